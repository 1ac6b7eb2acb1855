"""File formats and the command-line front end.

The CLI is driven in-process through dispatch(), which already implements
the total exit-code contract {0, 1, 2}.
"""

from fractions import Fraction

import pytest

from lukalab import files, to_text
from lukalab.cli import dispatch
from lukalab.files import FileFormatError

F = Fraction


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# --- file formats ------------------------------------------------------

def test_load_theory(tmp_path):
    path = write(
        tmp_path,
        "family.luka",
        "# interval family prefix\n!(X1 * X1)\n\nX1 -> X2\n",
    )
    th = files.load_theory(path)
    assert len(th) == 2
    assert th.name == "family"
    assert th.dimension() == 2
    assert to_text(th.formulas[0]) == "!(X1 * X1)"


def test_load_theory_reports_file_line(tmp_path):
    path = write(tmp_path, "bad.luka", "X1\nX1 ->\n")
    with pytest.raises(FileFormatError, match="bad.luka:2"):
        files.load_theory(path)


def test_load_valuation(tmp_path):
    path = write(tmp_path, "u.dv", "point: 1/2 0\ndir: 1 0\ndir: 0 1\n")
    u = files.load_valuation(path)
    assert u.base == (F(1, 2), F(0))
    assert u.directions == ((F(1), F(0)), (F(0), F(1)))

    with pytest.raises(FileFormatError, match="before"):
        files.load_valuation(write(tmp_path, "b1.dv", "dir: 1\npoint: 0\n"))
    with pytest.raises(FileFormatError, match="second"):
        files.load_valuation(write(tmp_path, "b2.dv", "point: 0\npoint: 1\n"))
    with pytest.raises(FileFormatError):
        files.load_valuation(write(tmp_path, "b3.dv", "pt: 0\n"))
    with pytest.raises(FileFormatError):
        files.load_valuation(write(tmp_path, "b4.dv", "# nothing\n"))


def test_load_sequence(tmp_path):
    path = write(tmp_path, "s.seq", "limit: 0 0\n1/2 1/4\n1/3 1/9\n")
    seq = files.load_sequence(path)
    assert seq.limit == (F(0), F(0))
    assert seq.points == ((F(1, 2), F(1, 4)), (F(1, 3), F(1, 9)))
    with pytest.raises(FileFormatError, match="limit"):
        files.load_sequence(write(tmp_path, "b.seq", "1/2 1/4\n"))


def test_load_region(tmp_path):
    path = write(
        tmp_path,
        "r.region",
        "dim: 2\n0 1 0 ; 1 -1 -1\n;\n",
    )
    region = files.load_region(path)
    assert region.dim == 2
    assert len(region) == 2
    assert len(region.members[0].constraints) == 2
    assert len(region.members[1].constraints) == 0  # bare cube member

    # a member without rows needs the header to fix the dimension
    with pytest.raises(FileFormatError):
        files.load_region(write(tmp_path, "b.region", ";\n"))
    with pytest.raises(FileFormatError, match="entries"):
        files.load_region(write(tmp_path, "b2.region", "0 1 ; 1 -1 -1\n"))


# --- CLI verbs ---------------------------------------------------------

def test_eval_and_compile_and_oneset():
    code, text = dispatch(["eval", "-f", "!(X1 * X1)", "-p", "3/4"])
    assert (code, text) == (0, "1/2")
    code, text = dispatch(["compile", "-f", "X1 + X1", "--dump"])
    assert code == 0
    assert text.splitlines()[:4] == [
        "dimension: 1",
        "cells: 2",
        "CELL {0 1; 1 -2} PIECE {0 2}",
        "CELL {1 -1; -1 2} PIECE {1 0}",
    ]
    code, text = dispatch(["oneset", "-f", "!(X1 * X1)"])
    assert code == 0 and text.splitlines()[0] == "dim: 1"


def test_entails_semantic(tmp_path):
    t = write(tmp_path, "t.luka", "!(X1 * X1)\n")
    code, text = dispatch(
        ["entails", "--semantic", "--theory", t, "--query", "!X1"]
    )
    assert code == 1
    assert "verdict: fails" in text
    assert "countermodel: 1/2" in text
    code, text = dispatch(
        ["entails", "--semantic", "--theory", t, "--query", "!(X1 * X1 * X1)"]
    )
    assert code == 0 and "verdict: holds" in text


def test_entails_stable_prints_collapse_note(tmp_path):
    t = write(tmp_path, "t.luka", "!(X1 * X1)\n")
    code, text = dispatch(["entails", "--stable", "--theory", t, "--query", "!X1"])
    assert code == 1
    assert "coincides with semantic consequence" in text
    assert "point:" in text and "dir:" in text


def test_entails_over_set(tmp_path):
    r = write(tmp_path, "half.region", "dim: 1\n0 1 ; 1/2 -1\n")
    code, text = dispatch(
        ["entails", "--over-set", r, "--query", "!(X1 * X1)"]
    )
    assert code == 0 and "verdict: holds" in text
    code, text = dispatch(["entails", "--over-set", r, "--query", "!X1"])
    assert code == 1 and "countermodel: 1/2" in text


def test_stable_witness_round_trips(tmp_path):
    # a witness printed on exit 1 must re-verify when fed back
    t = write(tmp_path, "t.luka", "!(X1 * X1)\n")
    code, text = dispatch(["entails", "--stable", "--theory", t, "--query", "!X1"])
    assert code == 1
    lines = text.splitlines()
    marker = lines.index("countermodel:")
    u = write(tmp_path, "back.dv", "\n".join(lines[marker + 1 :]) + "\n")
    code, text = dispatch(["diffval", "check", "--valuation", u])
    assert code == 0
    code, text = dispatch(
        ["witness", "--theory", t, "--query", "!X1", "--valuation", u]
    )
    assert code == 0 and "verdict: certified" in text


def test_diffval_check_and_satisfies(tmp_path):
    good = write(tmp_path, "good.dv", "point: 1\ndir: -1\n")
    bad = write(tmp_path, "bad.dv", "point: 1\ndir: 1\n")
    assert dispatch(["diffval", "check", "--valuation", good])[0] == 0
    code, text = dispatch(["diffval", "check", "--valuation", bad])
    assert code == 1 and "invalid" in text

    half = write(tmp_path, "half.dv", "point: 1/2\ndir: 1\n")
    code, _ = dispatch(
        ["diffval", "satisfies", "--valuation", half, "--formula", "!(X1 * X1)"]
    )
    assert code == 1
    left = write(tmp_path, "left.dv", "point: 1/2\ndir: -1\n")
    code, _ = dispatch(
        ["diffval", "satisfies", "--valuation", left, "--formula", "!(X1 * X1)"]
    )
    assert code == 0


def test_diffval_dominates(tmp_path):
    u = write(tmp_path, "u.dv", "point: 1/2\ndir: 1\n")
    v = write(tmp_path, "v.dv", "point: 1/2 0\ndir: 1 0\n")
    w = write(tmp_path, "w.dv", "point: 1/2 0\ndir: 0 1\n")
    code, text = dispatch(
        ["diffval", "dominates", "--valuation", v, "--vars", "1,2",
         "--valuation2", u, "--vars2", "1"]
    )
    assert code == 0 and "verdict: dominates" in text
    assert "detail: projection matches" in text
    code, text = dispatch(
        ["diffval", "dominates", "--valuation", w, "--vars", "1,2",
         "--valuation2", u, "--vars2", "1"]
    )
    assert code == 1 and "verdict: does-not-dominate" in text


def test_tangent_verbs(tmp_path):
    seq = write(
        tmp_path,
        "par.seq",
        "limit: 0 0\n" + "".join(f"1/{i} 1/{i*i}\n" for i in range(1, 201)),
    )
    code, text = dispatch(
        ["tangent", "certify", "--set", seq, "--point", "0,0", "--dir", "1,0",
         "--max-m", "10"]
    )
    assert code == 0 and "certified-up-to-10" in text
    code, text = dispatch(
        ["tangent", "certify", "--set", seq, "--point", "0,0", "--dir", "0,1",
         "--max-m", "3"]
    )
    assert code == 1 and "refuted-at" in text
    code, text = dispatch(
        ["tangent", "outgoing", "--set", seq, "--point", "0,0", "--dir", "1,0",
         "--lambda", "1/2"]
    )
    assert code == 0 and "outgoing: yes" in text
    code, text = dispatch(
        ["tangent", "sss", "--set", seq, "--candidate", "0,0;1,0", "--max-m", "10"]
    )
    assert code == 1 and "not-strongly-semisimple-witnessed" in text

    square = write(tmp_path, "sq.region", "dim: 2\n;\n")
    code, text = dispatch(["tangent", "sss", "--set", square])
    assert code == 0 and "strongly-semisimple" in text


def test_witness_verb(tmp_path):
    t = write(tmp_path, "t.luka", "!(X1 * X1)\n")
    u = write(tmp_path, "u.dv", "point: 1/2\ndir: 1\n")
    code, text = dispatch(
        ["witness", "--theory", t, "--query", "!(X1 * X1)", "--valuation", u]
    )
    assert code == 1 and "verdict: not-certified" in text
    assert "unsatisfied theory members: 1" in text


def test_interval_verb():
    code, text = dispatch(["interval", "--a", "2/3"])
    assert code == 0
    assert text == "!(X1 * X1 * (X1 + !(X1 -> X1)))"


def test_usage_errors_exit_2(tmp_path):
    assert dispatch(["eval", "-f", "!(X1", "-p", "1/2"])[0] == 2
    assert dispatch(["eval", "-f", "X1", "-p", "3/2"])[0] == 2
    assert dispatch(["no-such-verb"])[0] == 2
    assert dispatch([])[0] == 2
    assert dispatch(["entails", "--semantic", "--theory", "/nonexistent",
                     "--query", "X1"])[0] == 2
    bad = write(tmp_path, "bad.dv", "point: 1\ndir: 1\n")
    t = write(tmp_path, "t.luka", "X1\n")
    # invalid valuations are input errors for witness, not refutations
    assert dispatch(["witness", "--theory", t, "--query", "X1",
                     "--valuation", bad])[0] == 2


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "lukalab.cli", "eval", "-f", "X1 -> X2",
         "-p", "1,1/3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "1/3"


def test_plot_verb_writes_files(tmp_path):
    out = tmp_path / "hat.png"
    code, text = dispatch(
        ["plot", "function", "-f", "!(X1 * X1)", "-o", str(out)]
    )
    assert code == 0 and out.exists() and out.stat().st_size > 0
    out2 = tmp_path / "region.png"
    code, _ = dispatch(
        ["plot", "oneset", "-f", "!(X1 * X1 + X2 * X2)", "-o", str(out2)]
    )
    assert code == 0 and out2.exists()
