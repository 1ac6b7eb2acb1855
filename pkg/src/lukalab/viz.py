"""Figure rendering for compiled functions, regions and point sequences.

Everything draws through the Agg backend straight to files; nothing here
opens a window.  Exact rational data is converted to floats only at the
plotting boundary.  Each renderer returns the path it wrote.  Figures are
restricted to dimensions 1 and 2; higher dimensions have no faithful flat
picture and are rejected rather than projected.
"""

from __future__ import annotations

import csv
import math
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .geometry import ConvexCell, format_rat
from .pl_engine import PLFunction, RegionUnion
from .tangent import PointSequence


def _cell_polygon(cell: ConvexCell) -> tuple[list[float], list[float]]:
    """Vertices of a 2-D cell ordered around the centroid, closed."""
    pts = [(v[1] / v[0], v[2] / v[0]) for v in cell.verts]
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    pts.sort(key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
    pts.append(pts[0])
    return [p[0] for p in pts], [p[1] for p in pts]


def plot_function(
    F: PLFunction, path: str | Path, title: str = ""
) -> Path:
    """Graph of a compiled function: a line plot with cell boundaries in
    dimension 1, a heatmap with cell edges in dimension 2."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    if F.dim == 1:
        bounds = set()
        for cell in F.cells:
            (lo, hi), = cell.body.box()
            piece = cell.piece
            ax.plot(
                [float(lo), float(hi)],
                [float(piece((lo,))), float(piece((hi,)))],
                color="tab:blue",
            )
            bounds.update((lo, hi))
        for b in sorted(bounds):
            ax.axvline(float(b), color="0.85", lw=0.6, zorder=0)
        ax.set_xlim(0, 1)
        ax.set_ylim(-0.05, 1.05)
        ax.set_xlabel("x1")
        ax.set_ylabel("value")
    elif F.dim == 2:
        grid = np.linspace(0.0, 1.0, 201)
        X, Y = np.meshgrid(grid, grid)
        Z = np.full_like(X, np.nan)
        eps = 1e-9
        for cell in F.cells:
            mask = np.ones_like(X, dtype=bool)
            for c0, c1, c2 in cell.body.cons:
                mask &= c0 + c1 * X + c2 * Y >= -eps
            den, p0, p1, p2 = cell.piece_int
            Z[mask] = (p0 + p1 * X[mask] + p2 * Y[mask]) / den
        im = ax.pcolormesh(X, Y, Z, vmin=0.0, vmax=1.0, shading="auto")
        fig.colorbar(im, ax=ax, label="value")
        for cell in F.cells:
            xs, ys = _cell_polygon(cell.body)
            ax.plot(xs, ys, color="k", lw=0.5)
        ax.set_xlim(0, 1)
        ax.set_ylim(0, 1)
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
        ax.set_aspect("equal")
    else:
        raise ValueError("figures are available in dimensions 1 and 2 only")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_cells_csv(F: PLFunction, path: str | Path) -> Path:
    """Cell table next to the figure: piece and vertex data as rationals."""
    path = Path(path)
    with path.open("w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cell", "piece_den", "piece_coeffs", "vertices"])
        for i, cell in enumerate(F.cells):
            den, *coeffs = cell.piece_int
            verts = ";".join(
                ",".join(format_rat(c) for c in p)
                for p in cell.body.vertex_points()
            )
            writer.writerow(
                [i, den, " ".join(str(c) for c in coeffs), verts]
            )
    return path


def plot_region(
    region: RegionUnion, path: str | Path, title: str = ""
) -> Path:
    """Filled picture of a polyhedral union inside the cube."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5, 5 if region.dim == 2 else 1.8))
    drawn = 0
    for P in region:
        cell = ConvexCell.from_polyhedron(P)
        if cell is None or cell.is_empty():
            continue
        drawn += 1
        if region.dim == 1:
            (lo, hi), = cell.box()
            ax.plot(
                [float(lo), float(hi)], [0, 0],
                lw=6, solid_capstyle="butt", color="tab:green",
            )
            ax.plot(
                [float(lo), float(hi)], [0, 0], "o",
                ms=4, color="tab:green",
            )
        elif region.dim == 2:
            xs, ys = _cell_polygon(cell)
            ax.fill(xs, ys, alpha=0.4, color="tab:green")
            ax.plot(xs, ys, color="tab:green", lw=1.0)
        else:
            plt.close(fig)
            raise ValueError(
                "figures are available in dimensions 1 and 2 only"
            )
    ax.set_xlim(-0.02, 1.02)
    if region.dim == 1:
        ax.set_ylim(-1, 1)
        ax.set_yticks([])
        ax.set_xlabel("x1")
    else:
        ax.set_ylim(-0.02, 1.02)
        ax.set_aspect("equal")
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
    if title:
        ax.set_title(title)
    elif drawn == 0:
        ax.set_title("empty region")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_sequence(
    seq: PointSequence,
    path: str | Path,
    direction: Sequence[Fraction] | None = None,
    max_m: int = 3,
    title: str = "",
) -> Path:
    """Scatter of a point sequence with its limit; when a direction is
    given, the first few tangent cones are sketched as boundary rays."""
    path = Path(path)
    if seq.dim != 2:
        raise ValueError("sequence figures are two-dimensional")
    fig, ax = plt.subplots(figsize=(5, 5))
    xs = [float(p[0]) for p in seq.points]
    ys = [float(p[1]) for p in seq.points]
    ax.plot(xs, ys, ".", ms=4, color="tab:blue", label="points")
    lx, ly = float(seq.limit[0]), float(seq.limit[1])
    ax.plot([lx], [ly], "*", ms=12, color="tab:red", label="limit")
    if direction is not None:
        ux, uy = float(direction[0]), float(direction[1])
        norm = math.hypot(ux, uy)
        if norm == 0:
            raise ValueError("the direction must be nonzero")
        ux, uy = ux / norm, uy / norm
        px, py = -uy, ux
        for m in range(1, max_m + 1):
            t = 1.0 / (m * m)
            a = 1.0 / (m * math.sqrt(1.0 + t * t))
            for sign in (1.0, -1.0):
                ax.plot(
                    [lx, lx + a * (ux + sign * t * px)],
                    [ly, ly + a * (uy + sign * t * py)],
                    color="tab:orange", lw=0.8,
                )
            ax.plot(
                [lx + a * (ux + t * px), lx + a * (ux - t * px)],
                [ly + a * (uy + t * py), ly + a * (uy - t * py)],
                color="tab:orange", lw=0.8,
            )
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    ax.set_aspect("equal")
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.legend(loc="best")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
