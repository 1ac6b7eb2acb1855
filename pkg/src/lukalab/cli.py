"""Command-line front end.

Exit codes: 0 when the verdict holds / is valid / is certified, 1 when it
fails or is refuted (with the witness printed in the valuation or point
format so it can be fed back in), 2 for usage and input errors.  All
numeric output is exact rationals p/q.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import consequence as cq
from . import diffval as dv
from . import files
from . import formula as fm
from . import pl_engine as pl
from . import tangent as tg
from .geometry import format_point, format_rat, parse_point, rat


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="lukalab",
        description="Exact workbench for infinite-valued Łukasiewicz logic.",
    )
    sub = top.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("eval", help="evaluate a formula at a rational point")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("-p", "--point", required=True,
                   help="comma-separated rationals, e.g. 1/2,3/4")

    p = sub.add_parser("compile", help="compile to a piecewise-linear function")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("-n", "--dim", type=int)
    p.add_argument("--dump", action="store_true",
                   help="print one CELL/PIECE line per cell")

    p = sub.add_parser("oneset", help="the region where the formula equals 1")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("-n", "--dim", type=int)

    p = sub.add_parser("entails", help="semantic or stable consequence")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--semantic", action="store_true")
    mode.add_argument("--stable", action="store_true")
    mode.add_argument("--over-set", metavar="REGIONFILE",
                      help="check the query over an explicit region instead")
    p.add_argument("--theory", metavar="FILE")
    p.add_argument("--query", required=True)
    p.add_argument("-n", "--dim", type=int)

    p = sub.add_parser("diffval", help="differential-valuation checks")
    p.add_argument("action", choices=("check", "satisfies", "dominates"))
    p.add_argument("--valuation", required=True, metavar="FILE")
    p.add_argument("--valuation2", metavar="FILE")
    p.add_argument("--formula", "-f")
    p.add_argument("--vars", help="variable indices of the first valuation, "
                   "comma-separated (dominates only)")
    p.add_argument("--vars2", help="variable indices of the second valuation")

    p = sub.add_parser("tangent", help="Bouligand-Severi tangent analysis")
    p.add_argument("action", choices=("certify", "outgoing", "sss"))
    p.add_argument("--set", required=True, metavar="FILE", dest="set_file",
                   help="point-sequence file (limit: header) or region file")
    p.add_argument("--point")
    p.add_argument("--dir", dest="direction")
    p.add_argument("--max-m", type=int, default=10)
    p.add_argument("--lambda", dest="lam", default="1/2")
    p.add_argument("--candidate", action="append", default=[],
                   metavar="POINT;DIR", help="candidate pair for sss")

    p = sub.add_parser("witness", help="verify a differential countermodel")
    p.add_argument("--theory", required=True, metavar="FILE")
    p.add_argument("--query", required=True)
    p.add_argument("--valuation", required=True, metavar="FILE")

    p = sub.add_parser("interval",
                       help="formula with one-set [0, a], decreasing after a")
    p.add_argument("--a", required=True, metavar="RAT")

    p = sub.add_parser("plot", help="render figures to files")
    p.add_argument("target", choices=("function", "oneset", "region",
                                      "sequence"))
    p.add_argument("-f", "--formula")
    p.add_argument("-n", "--dim", type=int)
    p.add_argument("--set", metavar="FILE", dest="set_file")
    p.add_argument("--dir", dest="direction")
    p.add_argument("--max-m", type=int, default=3)
    p.add_argument("-o", "--out", required=True, metavar="FILE.png")
    return top


def _region_lines(region: pl.RegionUnion) -> list[str]:
    lines = [f"dim: {region.dim}", f"# members: {len(region.members)}"]
    for P in region.members:
        if P.constraints:
            lines.append(" ; ".join(
                " ".join(str(c) for c in h.scaled()) for h in P.constraints
            ))
        else:
            lines.append(";")
    return lines


def _valuation_lines(val: dv.DifferentialValuation) -> list[str]:
    lines = ["point: " + " ".join(format_rat(c) for c in val.base)]
    for u in val.directions:
        lines.append("dir: " + " ".join(format_rat(c) for c in u))
    return lines


def _report_lines(rep: cq.ConsequenceReport) -> tuple[list[str], int]:
    lines = [f"mode: {rep.mode}", f"verdict: {rep.verdict}"]
    if rep.minimum is not None:
        lines.append(f"minimum: {format_rat(rep.minimum)}")
    for note in rep.notes:
        lines.append(f"note: {note}")
    if rep.countermodel is None:
        return lines, 0
    if isinstance(rep.countermodel, dv.DifferentialValuation):
        lines.append("countermodel:")
        lines.extend(_valuation_lines(rep.countermodel))
    else:
        lines.append(f"countermodel: {format_point(rep.countermodel)}")
    return lines, 1


def _variable_indices(text: str | None, dim: int) -> tuple[int, ...]:
    if text is None:
        return tuple(range(1, dim + 1))
    return tuple(int(t) for t in text.replace(",", " ").split())


def _load_closed_set(path: str) -> tg.ClosedSetDescription:
    first = next((line for _, line in files._content_lines(path)), "")
    if first.lower().startswith("limit:"):
        return files.load_sequence(path)
    return tg.PolyhedralSet(files.load_region(path))


def _cmd_eval(ns) -> tuple[int, list[str]]:
    value = pl.eval_formula(fm.parse(ns.formula), parse_point(ns.point))
    return 0, [format_rat(value)]


def _cmd_compile(ns) -> tuple[int, list[str]]:
    F = pl.compile_formula(fm.parse(ns.formula), ns.dim)
    lines = [f"dimension: {F.dim}", f"cells: {len(F.cells)}"]
    if ns.dump:
        lines.extend(pl.dump_pl(F).splitlines())
    return 0, lines


def _cmd_oneset(ns) -> tuple[int, list[str]]:
    F = pl.compile_formula(fm.parse(ns.formula), ns.dim)
    return 0, _region_lines(pl.one_set(F))


def _theory_header(theory: cq.Theory) -> str:
    return (
        f"theory: {len(theory)} members, dimension {theory.dimension()}"
    )


def _cmd_entails(ns) -> tuple[int, list[str]]:
    query = fm.parse(ns.query)
    if ns.over_set:
        region = files.load_region(ns.over_set)
        rep = cq.semantic_over_set(region, query, ns.dim)
        lines, code = _report_lines(rep)
        return code, lines
    if not ns.theory:
        raise ValueError("--theory is required with --semantic/--stable")
    theory = files.load_theory(ns.theory)
    check = cq.stable_consequence if ns.stable else cq.semantic_consequence
    rep = check(theory, query, ns.dim)
    lines, code = _report_lines(rep)
    return code, [_theory_header(theory)] + lines


def _cmd_diffval(ns) -> tuple[int, list[str]]:
    val = files.load_valuation(ns.valuation)
    if ns.action == "check":
        verdict = dv.validate(val)
        if verdict:
            return 0, ["valid"]
        return 1, [f"invalid: {verdict.reason}"]
    if ns.action == "satisfies":
        if not ns.formula:
            raise ValueError("satisfies needs --formula")
        ok = dv.satisfies(val, fm.parse(ns.formula), dim=val.dim)
        return (0, ["satisfied"]) if ok else (1, ["not-satisfied"])
    if not ns.valuation2:
        raise ValueError("dominates needs --valuation2")
    other = files.load_valuation(ns.valuation2)
    big_vars = _variable_indices(ns.vars, val.dim)
    small_vars = _variable_indices(ns.vars2, other.dim)
    rep = dv.dominates_report(val, big_vars, other, small_vars)
    lines = [f"geometric: {'yes' if rep.geometric else 'no'}",
             f"probes-agree: {'yes' if rep.probe_agrees else 'no'}"]
    lines.append(f"detail: {rep.detail}")
    if rep.verdict:
        return 0, lines + ["verdict: dominates"]
    return 1, lines + ["verdict: does-not-dominate"]


def _cmd_tangent(ns) -> tuple[int, list[str]]:
    X = _load_closed_set(ns.set_file)
    if ns.action == "certify":
        if not ns.direction:
            raise ValueError("certify needs --dir")
        rep = tg.certify_tangent_sequence(
            X, parse_point(ns.direction), ns.max_m
        )
        lines = []
        for m, idx in rep.evidence:
            found = f"witness index {idx}" if idx else "no listed point"
            lines.append(f"m={m}: {found}")
        lines.append(f"verdict: {rep.verdict}")
        if rep.caveat:
            lines.append(f"caveat: {rep.caveat}")
        return (0 if rep.certified else 1), lines
    if ns.action == "outgoing":
        if not (ns.point and ns.direction):
            raise ValueError("outgoing needs --point and --dir")
        ok = tg.certify_outgoing(
            X, parse_point(ns.point), parse_point(ns.direction), rat(ns.lam)
        )
        line = f"outgoing: {'yes' if ok else 'no'} (lambda {ns.lam})"
        return (0 if ok else 1), [line]
    candidates = []
    for cand in ns.candidate:
        ptext, _, dtext = cand.partition(";")
        candidates.append((parse_point(ptext), parse_point(dtext)))
    if not candidates and ns.point and ns.direction:
        candidates.append((parse_point(ns.point), parse_point(ns.direction)))
    rep = tg.sss_check(X, candidates, ns.max_m)
    lines = [f"verdict: {rep.verdict}", f"basis: {rep.basis}"]
    for point, direction, treport in rep.witnesses:
        lines.append(
            f"witness: point={format_point(point)} "
            f"dir={format_point(direction)} "
            f"lambda={format_rat(treport.outgoing_lambda)}"
        )
    lines.extend(f"note: {n}" for n in rep.notes)
    bad = rep.verdict.startswith("not-strongly-semisimple")
    return (1 if bad else 0), lines


def _cmd_witness(ns) -> tuple[int, list[str]]:
    theory = files.load_theory(ns.theory)
    query = fm.parse(ns.query)
    val = files.load_valuation(ns.valuation)
    rep = cq.witness_verify(theory, query, val)
    lines = [_theory_header(theory)]
    lines.append("valuation: valid")
    if rep.reason:
        lines.append(f"problem: {rep.reason}")
    if rep.failing_members:
        failing = " ".join(str(i) for i in rep.failing_members)
        lines.append(f"unsatisfied theory members: {failing}")
    lines.append(f"refutes query: {'yes' if rep.refutes_query else 'no'}")
    lines.append(f"proviso: {rep.proviso}")
    verdict = "certified" if rep.ok else "not-certified"
    return (0 if rep.ok else 1), lines + [f"verdict: {verdict}"]


def _cmd_interval(ns) -> tuple[int, list[str]]:
    theta = cq.formula_from_interval(rat(ns.a))
    return 0, [fm.to_text(theta)]


def _cmd_plot(ns) -> tuple[int, list[str]]:
    from . import viz  # deferred: pulls in matplotlib

    out = Path(ns.out)
    if ns.target == "function":
        if not ns.formula:
            raise ValueError("plot function needs --formula")
        F = pl.compile_formula(fm.parse(ns.formula), ns.dim)
        viz.plot_function(F, out, title=ns.formula)
        csv_path = viz.write_cells_csv(F, out.with_suffix(".csv"))
        lines = pl.dump_pl(F).splitlines()
        return 0, lines + [f"figure: {out}", f"data: {csv_path}"]
    if ns.target == "oneset":
        if not ns.formula:
            raise ValueError("plot oneset needs --formula")
        F = pl.compile_formula(fm.parse(ns.formula), ns.dim)
        region = pl.one_set(F)
        viz.plot_region(region, out, title=f"one-set of {ns.formula}")
        return 0, _region_lines(region) + [f"figure: {out}"]
    if ns.target == "region":
        if not ns.set_file:
            raise ValueError("plot region needs --set")
        region = files.load_region(ns.set_file)
        viz.plot_region(region, out)
        return 0, _region_lines(region) + [f"figure: {out}"]
    if not ns.set_file:
        raise ValueError("plot sequence needs --set")
    seq = files.load_sequence(ns.set_file)
    direction = parse_point(ns.direction) if ns.direction else None
    viz.plot_sequence(seq, out, direction=direction, max_m=ns.max_m)
    lines = [f"limit: {format_point(seq.limit)}",
             f"points: {len(seq.points)}", f"figure: {out}"]
    return 0, lines


_HANDLERS = {
    "eval": _cmd_eval,
    "compile": _cmd_compile,
    "oneset": _cmd_oneset,
    "entails": _cmd_entails,
    "diffval": _cmd_diffval,
    "tangent": _cmd_tangent,
    "witness": _cmd_witness,
    "interval": _cmd_interval,
    "plot": _cmd_plot,
}


def dispatch(argv: list[str]) -> tuple[int, str]:
    """Run one command line; returns (exit code, report text)."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), ""
    try:
        code, lines = _HANDLERS[ns.verb](ns)
    except Exception as exc:  # exit-code contract is total: {0, 1, 2}
        return 2, f"error: {exc}"
    return code, "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    code, text = dispatch(sys.argv[1:] if argv is None else list(argv))
    if text:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
