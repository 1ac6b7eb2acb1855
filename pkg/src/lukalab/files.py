"""Line-based ASCII file formats for theories, valuations, sequences and
regions.

All formats share the same conventions: `#` starts a comment, blank lines
are ignored, rationals are written p/q (or bare integers), and items on a
line are whitespace-separated.

Theory file      one formula per line in the formula grammar.
Valuation file   `point: r1 ... rn` then zero or more `dir: r1 ... rn`
                 lines; the order of the valuation is the number of dir
                 lines.
Sequence file    `limit: r1 ... rn` then one point per line.
Region file      optional `dim: N` header, then one polyhedron per line
                 as `;`-separated constraint rows `c0 c1 ... cN`, each
                 meaning c0 + c1 x1 + ... + cN xN >= 0; a row-free line
                 (just `;` or nothing between separators) denotes the
                 whole cube and needs the header.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from . import formula as fm
from .consequence import Theory
from .diffval import DifferentialValuation
from .geometry import AffineFn, Point, Polyhedron, rat
from .pl_engine import RegionUnion
from .tangent import PointSequence


class FileFormatError(ValueError):
    def __init__(self, path: str | Path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


def _content_lines(path: str | Path) -> list[tuple[int, str]]:
    out = []
    text = Path(path).read_text(encoding="ascii")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def _parse_rats(
    path: str | Path, lineno: int, tokens: list[str]
) -> tuple[Fraction, ...]:
    try:
        return tuple(rat(t) for t in tokens)
    except (ValueError, ZeroDivisionError) as exc:
        raise FileFormatError(path, lineno, f"bad rational: {exc}") from None


def load_theory(path: str | Path) -> Theory:
    """One formula per line; the theory keeps file order."""
    formulas = []
    for lineno, line in _content_lines(path):
        try:
            formulas.append(fm.parse(line))
        except fm.ParseError as exc:
            raise FileFormatError(path, lineno, str(exc)) from None
    return Theory(tuple(formulas), name=Path(path).stem)


def load_valuation(path: str | Path) -> DifferentialValuation:
    base: Point | None = None
    dirs: list[Point] = []
    for lineno, line in _content_lines(path):
        key, _, rest = line.partition(":")
        key = key.strip().lower()
        values = _parse_rats(path, lineno, rest.split())
        if key == "point":
            if base is not None:
                raise FileFormatError(path, lineno, "second point: line")
            base = values
        elif key == "dir":
            if base is None:
                raise FileFormatError(path, lineno, "dir: before point:")
            dirs.append(values)
        else:
            raise FileFormatError(path, lineno, f"unknown line kind {key!r}")
    if base is None:
        raise FileFormatError(path, 1, "missing point: line")
    return DifferentialValuation(base, tuple(dirs))


def load_sequence(path: str | Path) -> PointSequence:
    limit: Point | None = None
    points: list[Point] = []
    for lineno, line in _content_lines(path):
        if limit is None:
            key, _, rest = line.partition(":")
            if key.strip().lower() != "limit":
                raise FileFormatError(path, lineno, "first line must be limit:")
            limit = _parse_rats(path, lineno, rest.split())
            continue
        points.append(_parse_rats(path, lineno, line.split()))
    if limit is None:
        raise FileFormatError(path, 1, "missing limit: line")
    try:
        return PointSequence(limit, tuple(points))
    except ValueError as exc:
        raise FileFormatError(path, 1, str(exc)) from None


def load_region(path: str | Path) -> RegionUnion:
    dim: int | None = None
    members: list[Polyhedron] = []
    for lineno, line in _content_lines(path):
        if line.lower().startswith("dim:"):
            if dim is not None or members:
                raise FileFormatError(path, lineno, "dim: must come first")
            try:
                dim = int(line[4:].strip())
            except ValueError:
                raise FileFormatError(path, lineno, "bad dimension") from None
            if dim < 1:
                raise FileFormatError(path, lineno, "dimension must be >= 1")
            continue
        rows = []
        for part in line.split(";"):
            tokens = part.split()
            if not tokens:
                continue
            rows.append(_parse_rats(path, lineno, tokens))
        if not rows and dim is None:
            raise FileFormatError(
                path, lineno, "cube member needs a dim: header"
            )
        for row in rows:
            if dim is None:
                dim = len(row) - 1
                if dim < 1:
                    raise FileFormatError(
                        path, lineno, "constraint rows need n+1 entries"
                    )
            if len(row) != dim + 1:
                raise FileFormatError(
                    path, lineno, f"expected {dim + 1} entries per constraint"
                )
        members.append(
            Polyhedron(
                dim, tuple(AffineFn(r[0], tuple(r[1:])) for r in rows)
            )
        )
    if dim is None:
        raise FileFormatError(path, 1, "empty region file")
    return RegionUnion(dim, tuple(members))
