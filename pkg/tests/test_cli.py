import json
import shutil
import subprocess
import sys

import pytest

from diffgeo.cli import RunConfig, main
from diffgeo.errors import DomainError
from diffgeo.io import dumps, load_diffeo


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path, capsys):
    paths = {}
    specs = {
        "exp3": ["--family", "exp", "--a", "3"],
        "id": ["--family", "identity"],
        "rot": ["--family", "rotation", "--t", "0.5"],
        "cid": ["--family", "circle-identity"],
        "cos": ["--family", "cosine", "--a", "0.5", "--c", "0.2", "--t", "0.3"],
    }
    for name, args in specs.items():
        p = tmp_path / f"{name}.json"
        assert run(["gen", *args, "--k", "2", "--n", "256", "--out", str(p)], capsys)[0] == 0
        paths[name] = str(p)
    return paths


def test_run_config_validation():
    with pytest.raises(DomainError):
        RunConfig(n=15)
    with pytest.raises(DomainError):
        RunConfig(n=8)
    with pytest.raises(DomainError):
        RunConfig(k=7)
    assert RunConfig(n=16, k=6).n == 16


def test_gen_round_trip_is_byte_identical(files):
    for p in files.values():
        text = open(p).read()
        assert dumps(load_diffeo(p).to_dict()) == text


def test_gen_is_deterministic(tmp_path, capsys):
    a = run(["gen", "--family", "mobius", "--t", "0.7", "--n", "64"], capsys)[1]
    b = run(["gen", "--family", "mobius", "--t", "0.7", "--n", "64"], capsys)[1]
    assert a == b
    assert json.loads(a)["manifold"] == "interval"


def test_gen_degenerate_exp_is_identity(capsys):
    out = run(["gen", "--family", "exp", "--a", "0", "--n", "32"], capsys)[1]
    ident = run(["gen", "--family", "identity", "--n", "32"], capsys)[1]
    assert json.loads(out)["jets"] == json.loads(ident)["jets"]


def test_metric_values(files, capsys):
    assert run(["metric", "dk", files["exp3"], files["id"], "--order", "1"], capsys)[1] == "3.00000000000\n"
    assert run(["metric", "rho", files["exp3"], files["exp3"]], capsys)[1] == "0.00000000000\n"
    assert run(["metric", "sigma1", files["rot"], files["cid"]], capsys)[1] == "2.00000000000\n"


def test_metric_errors(files, capsys):
    code, _, err = run(["metric", "dk", files["exp3"], files["rot"]], capsys)
    assert code == 2
    assert json.loads(err)["error"] == "DomainError"
    code, _, err = run(["metric", "sigma1", files["exp3"], files["id"]], capsys)
    assert code == 2 and "circle" in json.loads(err)["message"]


def test_gen_invalid_params(capsys):
    code, _, err = run(["gen", "--family", "cosine", "--a", "1.5"], capsys)
    assert code == 2
    assert "error" in json.loads(err)


def test_coords(files, capsys):
    out = run(["coords", files["exp3"], "--order", "2"], capsys)[1]
    data = json.loads(out)
    assert data["order"] == 2 and data["initial_values"] == []
    assert all(abs(v - 3.0) < 1e-9 for v in data["head"]["values"])


def test_factor_writes_files(tmp_path, capsys):
    src = tmp_path / "f.json"
    run(["gen", "--family", "exp", "--a", "3", "--n", "512", "--out", str(src)], capsys)
    outdir = tmp_path / "fac"
    code, out, _ = run(["factor", str(src), "--order", "1", "--eps", "0.5", "--out", str(outdir)], capsys)
    assert code == 0 and json.loads(out)["r"] == 7
    assert len(list(outdir.glob("factor_*.json"))) == 7
    lines = (outdir / "radii.csv").read_text().splitlines()
    assert lines[0] == "i,radius" and len(lines) == 8
    assert all(abs(float(l.split(",")[1]) - 3 / 7) < 1e-6 for l in lines[1:])


def test_chain_csv(files, capsys):
    out = run(["chain", files["rot"], "--steps", "auto"], capsys)[1]
    assert out == "i,step_cost\n1,2.0\n"
    out = run(["chain", files["cos"], "--steps", "3"], capsys)[1]
    assert len(out.splitlines()) == 4
    assert run(["chain", files["exp3"]], capsys)[0] == 2


def test_ob_csv(files, capsys):
    out = run(["ob", files["exp3"], files["id"], "--k", "2"], capsys)[1]
    lines = out.splitlines()
    assert lines[0] == "j,sup" and [l.split(",")[0] for l in lines[1:]] == ["1", "2"]


def test_verify_identities(capsys):
    code, out, _ = run(["verify", "--suite", "identities", "--order", "5"], capsys)
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "kind,k,max_residual" and len(rows) == 1 + 3 * 4
    assert all(float(r.split(",")[2]) <= 1e-6 for r in rows[1:])


def test_verify_fails_on_tiny_tolerance(capsys):
    code, _, _ = run(["verify", "--suite", "identities", "--order", "3", "--tol", "1e-30"], capsys)
    assert code == 1


def test_verify_invariants_seeded(capsys):
    a = run(["verify", "--suite", "invariants", "--order", "2", "--n", "128", "--seed", "3"], capsys)
    b = run(["verify", "--suite", "invariants", "--order", "2", "--n", "128", "--seed", "3"], capsys)
    assert a[0] == 0 and a[1] == b[1]


def test_threads_env_does_not_change_output(tmp_path, capsys, monkeypatch):
    src = tmp_path / "f.json"
    run(["gen", "--family", "mobius", "--t", "1.0", "--k", "2", "--n", "128", "--out", str(src)], capsys)
    outs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("DIFFGEO_THREADS", threads)
        d = tmp_path / f"t{threads}"
        run(["factor", str(src), "--order", "2", "--eps", "0.5", "--out", str(d)], capsys)
        outs.append((d / "radii.csv").read_text())
    assert outs[0] == outs[1]


@pytest.mark.skipif(shutil.which("diffgeo") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["diffgeo", "gen", "--family", "exp", "--a", "1", "--n", "16"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["n"] == 16


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diffgeo.cli", "gen", "--family", "bogus"], capture_output=True, text=True)
    assert proc.returncode == 2
