import json
import subprocess
import sys

import pytest

from hdx.cli import main
from hdx.complexes import TwoComplex, dumps_complex, loads_complex
from hdx.io import meta_path, sha256_file

CONLON = '{"t": 6, "size": 5}'


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def conlon_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "conlon.json"
    assert main(["build", "--construction", "conlon", "--params", CONLON, "--seed", "1", "--out", str(path)]) == 0
    return path


def test_build_writes_complex_and_sidecar(conlon_file):
    """Build output has the expected counts and a matching sidecar hash."""
    meta = json.loads(meta_path(conlon_file).read_text())
    assert meta["counts"] == {"vertices": 64, "edges": 320, "triangles": 640}
    assert meta["complex_sha256"] == sha256_file(conlon_file)
    assert meta["construction"] == "conlon" and meta["seed"] == 1
    assert meta["instance"]["group"]["kind"] == "boolean-vector"


def test_build_is_deterministic(conlon_file, tmp_path, capsys):
    """Same construction and seed give byte-identical files."""
    other = tmp_path / "again.json"
    code, out, _ = _run(capsys, "build", "--construction", "conlon", "--params", CONLON, "--seed", "1",
                        "--out", str(other))
    assert code == 0 and json.loads(out)["complex"] == sha256_file(conlon_file)
    assert other.read_bytes() == conlon_file.read_bytes()
    assert meta_path(other).read_bytes() == meta_path(conlon_file).read_bytes()


def test_file_roundtrip(conlon_file):
    """Loading and re-serialising a built file is byte-identical."""
    text = conlon_file.read_text()
    assert dumps_complex(*loads_complex(text)) == text


def test_verify_default_checks_pass(conlon_file, capsys):
    """Default checks pass with lemma ids and tolerances."""
    code, out, _ = _run(capsys, "verify", str(conlon_file))
    rep = json.loads(out)
    assert code == 0
    assert [c["check"] for c in rep["checks"]] == ["cts", "two-centers", "lift"]
    assert all(c["verdict"] == "pass" for c in rep["checks"])
    lift = rep["checks"][2]
    assert lift["lemma"] == "lemma:zigzag-lift-covers-walk"
    assert lift["values"]["rep_vertices"] == {"value": 640, "tolerance": 0}
    assert rep["instance"]["matches_build"] is True


def test_verify_report_is_deterministic(conlon_file, tmp_path, capsys):
    """Two runs write identical reports."""
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["verify", str(conlon_file), "--checks", "cts,lift,bound,links", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert str(tmp_path) not in a.read_text()


def test_verify_detects_corruption(conlon_file, tmp_path, capsys):
    """Replacing a triangle makes verify exit 1 with a witness."""
    cx, col = loads_complex(conlon_file.read_text())
    tri = cx.triangles.copy()
    tri[0] = [0, 1, 2]
    bad = tmp_path / "bad.json"
    bad.write_text(dumps_complex(TwoComplex(cx.vertices, tri), col))
    meta_path(bad).write_text(meta_path(conlon_file).read_text())
    code, out, _ = _run(capsys, "verify", str(bad), "--checks", "two-centers,lift")
    rep = json.loads(out)
    assert code == 1 and rep["instance"]["matches_build"] is False
    assert rep["summary"]["failed"] and all("witness" in c for c in rep["checks"] if c["verdict"] == "fail")


def test_verify_skips_with_reason(tmp_path, capsys):
    """Checks needing group structure are skipped on a plain multipartite complex."""
    path = tmp_path / "k222.json"
    assert main(["build", "--construction", "multipartite", "--params", '{"chi": 3, "n": 2}', "--out", str(path)]) == 0
    capsys.readouterr()
    code, out, _ = _run(capsys, "verify", str(path), "--checks", "regularity,coloring,inv,cts,links")
    rep = json.loads(out)
    verdicts = {c["check"]: c["verdict"] for c in rep["checks"]}
    assert code == 0
    assert verdicts == {"regularity": "pass", "coloring": "pass", "inv": "pass", "cts": "skipped", "links": "pass"}
    assert rep["checks"][3]["reason"]


def test_spectrum_small_values(tmp_path, capsys):
    """L of a 6-element Conlon set has lambda 1/4."""
    path = tmp_path / "c6.json"
    main(["build", "--construction", "conlon", "--params", '{"t": 6, "size": 6}', "--seed", "1", "--out", str(path)])
    capsys.readouterr()
    code, out, _ = _run(capsys, "spectrum", str(path), "--graph", "L")
    rep = json.loads(out)
    assert code == 0 and rep["spectrum"]["lambda_abs"]["value"] == pytest.approx(0.25, abs=1e-9)
    assert rep["spectrum"]["lambda_abs"]["tolerance"] == 1e-9


def test_spectrum_bound(tmp_path, capsys):
    """The walk bound holds with a positive margin on a connected Conlon instance."""
    path = tmp_path / "c7.json"
    main(["build", "--construction", "conlon", "--params", '{"t": 6, "size": 7}', "--seed", "0", "--out", str(path)])
    capsys.readouterr()
    code, out, _ = _run(capsys, "spectrum", str(path), "--bound")
    rep = json.loads(out)
    assert code == 0 and rep["bound"]["verdict"] == "holds"
    assert rep["bound"]["values"]["margin"]["value"] > 0.05


def test_usage_error_exit_2(capsys):
    """Unknown subcommands are usage errors with a JSON message."""
    code, _, err = _run(capsys, "frobnicate")
    assert code == 2 and json.loads(err)["error"] == "usage"


def test_missing_file_exit_2(tmp_path, capsys):
    """A missing complex file is a parse error."""
    code, _, err = _run(capsys, "verify", str(tmp_path / "nope.json"))
    assert code == 2 and json.loads(err)["exit_code"] == 2


def test_bad_params_exit_2(tmp_path, capsys):
    """Wrong generator count is a parameter error."""
    params = '{"base": {"multipartite": {"chi": 3, "n": 2}}, "groups": ["Z7", "Z7", "Z7"], "generators": [[1, 6], [1, 6], [1, 6]]}'
    code, _, err = _run(capsys, "build", "--construction", "hdz-plus", "--params", params, "--out", str(tmp_path / "x"))
    assert code == 2 and json.loads(err)["error"] == "parameter"


def test_infeasible_exit_3(tmp_path, capsys):
    """No Sidon set of size 4 in F2^2."""
    code, _, err = _run(capsys, "build", "--construction", "conlon", "--params", '{"t": 2, "size": 4}',
                        "--out", str(tmp_path / "x"))
    assert code == 3 and json.loads(err)["error"] == "infeasible"


def test_size_cap_exit_3(conlon_file, capsys, monkeypatch):
    """Graphs above the sparse cap are refused with exit 3."""
    monkeypatch.setenv("HDX_SPARSE_CAP", "100")
    code, _, err = _run(capsys, "spectrum", str(conlon_file))
    assert code == 3 and "sampled" in json.loads(err)["message"]


def test_console_script_runs(conlon_file):
    """The installed entry point runs as a subprocess."""
    r = subprocess.run([sys.executable, "-m", "hdx.cli", "verify", str(conlon_file), "--checks", "cts"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["checks"][0]["verdict"] == "pass"
