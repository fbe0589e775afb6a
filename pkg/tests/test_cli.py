import io
import json
import subprocess
import sys


from adequal import bounds, calculus, germ, lcfield, notation, roots
from adequal.cli import COMMANDS, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_reference_outputs():
    assert call("diff", "x^2", "--at", "1", "--dx", "-eps")[:2] == (0, "2\n")
    assert call("stevin", "x^2-2", "--lo", "1", "--hi", "2", "--digits", "6")[:2] == (0, "1.414213\n")
    assert call("irr-gap", "7", "5")[:2] == (0, "gap=1 bound=1/75 verified=true\n")


def test_eval_and_st():
    assert call("eval", "1/(1+eps)", "--order", "3")[1] == "1 - 1*eps^1 + 1*eps^2 - 1*eps^3\n"
    assert call("eval", "x^2", "--at", "H + eps")[1] == "1*eps^-2 + 2 + 1*eps^2\n"
    assert call("eval", "1 - eps", "--semicolon", "6")[1] == "1.000000 ; −1·ε^1\n"
    assert call("eval", "-eps")[1] == "-1*eps^1\n"
    assert call("st", "2 - eps")[1] == "2\n"
    assert call("st", "--germ", "(3*n+1)/(2*n)")[1] == "3/2\n"


def test_germ_inspection():
    code, out, _ = call("eval", "--germ", "((-1)^n)/(n)", "--adequal", "0")
    assert code == 0
    assert out.splitlines() == ["germ: <n%2==0: (1)/(n) | n%2==1: (-1)/(n)>", "null: true",
                                "infinitesimal: true", "sign: 1", "st: 0", "adequal: true"]
    out = call("eval", "--germ", "((-1)^n)/(n)", "--stance", "1 mod 2")[1]
    assert "sign: -1" in out
    out = call("eval", "--germ", "1/(2*pi*n)", "--apply", "sin(1/x)")[1]
    assert out.splitlines()[0] == "germ: <(0)>"


def test_classify_and_microcont():
    code, out, _ = call("classify", "x^2", "--on", "(0,inf)")
    assert code == 0 and out.splitlines()[0] == "continuous"
    assert "fails | H | 1*eps^-1 + 1*eps^1 | 2 + 1*eps^2" in out
    assert call("classify", "H + 7")[1] == "unlimited\n"
    assert call("classify", "--germ", "1/n")[1] == "infinitesimal: true\n"
    out = call("microcont", "sin(1/x)", "--germ", "--at", "1/(2*pi*n)", "--witness", "1/(2*pi*n+pi/2)")[1]
    assert out == "fails | <(1)/(2*pi*n)> | <(1)/(2*pi*n + 1/2*pi)> | <(1)>\n"


def test_roots_bounds_wallis_transfer():
    out = call("stevin", "x^2-2", "--lo", "1", "--hi", "2", "--digits", "2", "--certificates")[1]
    assert out.splitlines() == ["1.41", "step 1: [7/5, 3/2] signs(−,+)", "step 2: [141/100, 71/50] signs(−,+)"]
    assert call("bisect", "x-1/2", "--lo", "0", "--hi", "1", "--steps", "1")[1] == "exact root 1/2\n"
    assert "digits=1.41421356" in call("bisect", "x^2-2", "--lo", "1", "--hi", "2", "--steps", "40")[1]
    assert call("sweep", "10")[1].startswith("pairs=")
    assert call("wallis", "3", "4")[1].splitlines()[0] == "area=6"
    assert call("transfer-check", "--samples", "50")[1] == "identities=8 samples=50 violations=0\n"


def test_exit_codes():
    assert call("st", "H")[0] == 1
    assert call("stevin", "x^2+1", "--lo", "0", "--hi", "1")[0] == 1
    assert call("irr-gap", "8", "5")[0] == 1
    assert call("diff", "1/x", "--at", "0")[0] == 1
    assert call("st", "1 +")[0] == 2
    assert call("bogus")[0] == 2
    assert call("diff", "x^2")[0] == 2
    assert call("eval", "x^2", "--bogus")[0] == 2
    assert call("--help")[0] == 0


def test_json_records():
    code, out, _ = call("--format", "json", "irr-gap", "7", "5")
    rec = json.loads(out)
    assert code == 0 and rec["command"] == "irr-gap" and rec["ok"] is True
    assert rec["result"]["bound"] == "1/75" and rec["result"]["verified"] is True
    code, out, _ = call("st", "H", "--format", "json")
    rec = json.loads(out)
    assert code == 1 and rec["ok"] is False and rec["error"]["type"] == "Unlimited"
    code, out, _ = call("--format=json", "st", "1 +")
    assert code == 2 and json.loads(out)["error"]["type"] == "ParseError"


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "adequal.cfg"
    cfg.write_text("# defaults\norder = 2\nstance = 1 mod 2\n")
    assert call("eval", "1/(1+eps)", "--config", str(cfg))[1] == "1 - 1*eps^1 + 1*eps^2\n"
    assert call("eval", "1/(1+eps)", "--config", str(cfg), "--order", "1")[1] == "1 - 1*eps^1\n"
    assert "sign: -1" in call("eval", "--germ", "((-1)^n)/n", "--config", str(cfg))[1]
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert call("st", "1", "--config", str(bad))[0] == 2


def test_byte_identical_runs():
    argv = [sys.executable, "-m", "adequal", "classify", "sin(1/x)", "--on", "(0,1)", "--format", "json"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first


# every public operation must be reachable from some command
OPERATIONS = [
    lcfield.add, lcfield.mul, lcfield.inv, lcfield.cmp, lcfield.st, lcfield.adequal, lcfield.classify,
    lcfield.leading_order, lcfield.check_transfer_identity,
    germ.germ_is_null, germ.germ_sign, germ.germ_adequal, germ.germ_apply, germ.germ_st,
    calculus.derivative_at, calculus.microcontinuous_at, calculus.classify_continuity, calculus.wallis_area,
    roots.stevin_root, roots.cauchy_bisect, bounds.irr_gap, bounds.sweep,
    notation.parse_expr, notation.parse_rule, notation.render_semicolon,
]

COVERAGE_RUNS = [
    ("eval", "1/(1+eps) * 2 + eps", "--semicolon", "3"),
    ("eval", "--germ", "1/n", "--apply", "x^2", "--adequal", "2/n"),
    ("st", "2 - eps"),
    ("diff", "x^2", "--at", "1"),
    ("classify", "x^2", "--on", "(0,1)"),
    ("microcont", "x", "--at", "eps", "--witness", "2*eps"),
    ("stevin", "x^2-2", "--lo", "1", "--hi", "2"),
    ("bisect", "x^2-2", "--lo", "1", "--hi", "2"),
    ("irr-gap", "7", "5"),
    ("sweep", "3"),
    ("wallis", "1", "2"),
    ("transfer-check", "--samples", "5"),
]


def test_dispatch_covers_every_operation():
    assert {run[0] for run in COVERAGE_RUNS} == set(COMMANDS)
    seen = set()

    def profile(frame, event, arg):
        if event == "call":
            seen.add(frame.f_code)

    sys.setprofile(profile)
    try:
        for argv in COVERAGE_RUNS:
            assert call(*argv)[0] == 0, argv
    finally:
        sys.setprofile(None)
    missing = [op.__name__ for op in OPERATIONS if op.__code__ not in seen]
    assert not missing
