import json
import subprocess
import sys

import pytest

from kmlab import __version__
from kmlab.cli import run


def _call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _json_result(capsys, *argv):
    code, out, _ = _call(capsys, *argv)
    assert code == 0
    rep = json.loads(out)
    assert rep["header"]["command"] == argv[0]
    assert rep["header"]["versions"]["cli"] == __version__
    return rep["result"]


def test_classify(capsys):
    assert _json_result(capsys, "classify", "-A", "2,-3;-3,2")["type"] == "indefinite"
    assert _json_result(capsys, "classify", "-A", "2,-1;-1,2")["type"] == "finite"


def test_coxeter_affine(capsys):
    res = _json_result(capsys, "coxeter", "-A", "2,-2;-2,2")
    assert res["closed_form"] == res["composed"] == [[3, -2], [2, -1]]


def test_lemma54(capsys):
    res = _json_result(capsys, "lemma54", "-m", "3", "-n", "3", "-p", "5")
    assert res["branch"] == "p∤m" and res["ok"] and res["coefficient"] == 3


def test_header_echoes_defaults(capsys):
    code, out, _ = _call(capsys, "roots", "-A", "2,-3;-3,2", "--height", "3")
    cfg = json.loads(out)["header"]["config"]
    assert cfg["lmax"] == 60 and cfg["q"] == 3 and cfg["height"] == 3 and cfg["seed"] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ("partition", "-A", "2,-3;-3,2", "--height", "8"),
        ("dynamics", "-A", "2,-3;-3,2", "--alpha", "1,0", "--lmax", "5"),
        ("group", "-A", "2,-3;-3,2", "--height", "3", "--exp", "1,0:1", "--exp", "0,1:2"),
        ("contract", "-A", "2,-3;-3,2", "--height", "6", "--word", "1,2", "--alpha", "1,0", "--lmax", "3"),
    ],
)
def test_reports_are_reproducible(capsys, argv):
    a = _call(capsys, *argv)
    b = _call(capsys, *argv)
    assert a[0] == 0 and a == b


def test_csv_output(capsys):
    code, out, _ = _call(capsys, "roots", "-A", "2,-3;-3,2", "--height", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["coords,height,class,mult", "1 0,1,real,1", "0 1,1,real,1", "1 1,2,imaginary,1"]


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = _call(capsys, "classify", "-A", "2,-2;-2,2", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["result"]["type"] == "affine"


@pytest.mark.parametrize(
    "argv, code",
    [
        (("bogus",), 64),
        (("classify", "--height", "x"), 64),
        (("lemma54", "-m", "3", "-n", "3"), 64),
        (("classify", "-A", "2,-1;-2,3"), 1),
        (("lemma54", "-m", "3", "-n", "3", "-p", "2"), 1),
        (("partition", "-A", "2,-2;-2,2"), 1),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert _call(capsys, *argv)[0] == code


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kmlab", "classify", "-A", "2,-2;-2,2"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["type"] == "affine"
