"""Command-line interface: exit codes, determinism, exports, configs."""

import json
import subprocess
import sys

import pytest

from lenard.cli import main


def run_cli(*argv):
    import io
    from contextlib import redirect_stdout
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def test_check_skew_fails_on_d2():
    code, out = run_cli("check", "--op", "D^2", "--what", "skew")
    assert code == 1
    data = json.loads(out)
    assert data["results"][0]["verdict"] == "fails"
    assert "witness" in data["results"][0]


def test_check_skew_holds_on_d():
    code, out = run_cli("check", "--op", "D", "--what", "skew")
    assert code == 0


def test_check_jacobi_sokolov():
    code, out = run_cli("check", "--op", "u' D^-1 u'", "--what", "jacobi",
                        "--floor", "-6")
    assert code == 0
    data = json.loads(out)
    assert all(r["verdict"] == "holds-to-floor" for r in data["results"])


def test_check_jacobi_failure_witness():
    code, out = run_cli("check", "--op", "u' D + 1/2 u''", "--what", "jacobi",
                        "--floor", "-6")
    assert code == 1
    data = json.loads(out)
    assert any(r["verdict"] == "fails" and "witness" in r
               for r in data["results"])


def test_chain_verify_only():
    code, out = run_cli("chain", "--preset", "nls", "--steps", "0",
                        "--verify-only")
    assert code == 0
    assert json.loads(out)["verified"] is True


def test_chain_kn_one_step():
    code, out = run_cli("chain", "--preset", "kn", "--steps", "1")
    assert code == 0
    data = json.loads(out)
    steps = data["chain"]["steps"]
    assert steps[-1]["n"] == 4
    # P4 = u''' - 3/2 u''^2/u' modulo the documented free constants
    from fractions import Fraction as Q
    from lenard.presets import load_kn
    from lenard.grammar import parse_function
    from lenard.solve import in_span
    pre = load_kn()
    ctx = pre.ctx
    u, u1, u2, u3 = ctx.u(0), ctx.u(1), ctx.u(2), ctx.u(3)
    P4 = parse_function(ctx, steps[-1]["P"][0])
    core = u3 - Q(3, 2) * u2 ** 2 / u1
    assert in_span(ctx, [[ctx.one()], [u], [u * u], [u1]], [P4 - core])


def test_chain_left_blocked():
    code, out = run_cli("chain", "--preset", "liouville-iv",
                        "--direction", "left", "--steps", "2")
    assert code == 0
    data = json.loads(out)
    assert data["chain"]["left_status"]["kind"] == "blocked"
    assert "u_tx" in data["chain"]["left_status"]["equation"]


def test_classify_pattern():
    code, out = run_cli("classify", "--pattern", "b=(0,1,1),a=(1,0,0)")
    assert code == 0
    assert json.loads(out)["class"] == "S-type"


def test_classify_proportional_error():
    code, out = run_cli("classify", "--pattern", "b=(1,0,0),a=(1,0,0)")
    assert code == 1
    assert json.loads(out)["error"] == "Proportional"


def test_classify_table():
    code, out = run_cli("classify")
    assert code == 0
    table = json.loads(out)["table"]
    assert len(table) == 64


def test_determinism():
    _, out1 = run_cli("classify")
    _, out2 = run_cli("classify")
    assert out1 == out2
    _, c1 = run_cli("chain", "--preset", "liouville-vii", "--steps", "1")
    _, c2 = run_cli("chain", "--preset", "liouville-vii", "--steps", "1")
    assert c1 == c2


def test_export_roundtrip(tmp_path):
    session = tmp_path / "session.json"
    code, _ = run_cli("chain", "--preset", "kn", "--steps", "1",
                      "--session", str(session))
    assert code == 0
    out_json = tmp_path / "out.json"
    code, _ = run_cli("export", "--session", str(session), "--target", "json",
                      "--out", str(out_json))
    assert code == 0
    data = json.loads(out_json.read_text())
    # re-import: parse every printed P back and compare canonical forms
    from lenard.field import Context
    from lenard.grammar import fun_text, parse_function
    from lenard.presets import load_kn
    pre = load_kn()
    ctx = pre.ctx
    for step in data["chain"]["steps"]:
        for text in step["P"]:
            f = parse_function(ctx, text)
            assert fun_text(f) == text


def test_export_latex(tmp_path):
    session = tmp_path / "session.json"
    run_cli("chain", "--preset", "kn", "--steps", "1", "--format", "latex",
            "--session", str(session))
    out_tex = tmp_path / "out.tex"
    code, _ = run_cli("export", "--session", str(session), "--target", "latex",
                      "--out", str(out_tex))
    assert code == 0
    text = out_tex.read_text()
    assert "u'''" in text and "\\frac" in text


def test_export_empty_session(tmp_path):
    session = tmp_path / "empty.json"
    session.write_text("{}")
    code, _ = run_cli("export", "--session", str(session))
    assert code == 1


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("command = classify\npattern = b=(0,1,1),a=(1,0,0)\n")
    code, out = run_cli("--config", str(cfg))
    assert code == 0
    assert json.loads(out)["class"] == "S-type"


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 1\n")
    code, _ = run_cli("--config", str(cfg))
    assert code == 2


def test_presets_list():
    code, out = run_cli("presets")
    assert code == 0
    assert "kn" in out.split() and "liouville-i" in out.split()


def test_entry_point_installed():
    proc = subprocess.run([sys.executable, "-m", "lenard.cli", "presets"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
