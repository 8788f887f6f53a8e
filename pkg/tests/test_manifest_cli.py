from __future__ import annotations

import gzip
import json
import subprocess
import sys

import numpy as np
import pytest

from agdistill import manifest
from agdistill.cli import default_basis, main
from agdistill.gf2e import get_field
from agdistill.phasepoly import decomposition
from agdistill.selfdual import find_self_dual_basis, is_self_dual


@pytest.fixture(scope="module")
def small_artifact(tmp_path_factory):
    path = tmp_path_factory.mktemp("art") / "small.json"
    assert main(["construct", "--preset", "small", "--out", str(path)]) == 0
    return path


def test_construct_table(tmp_path, capsys):
    out = tmp_path / "a.json"
    assert main(["construct", "--curve", "rational:s=5", "--a", "4", "--k", "1", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    for key, val in [("n", "30"), ("m", "5"), ("d_lower", "5"), ("t", "2"), ("degA1", "2")]:
        assert any(line.split() == [key, val] for line in text.splitlines())
    assert "C_conv" in text and "overhead" in text


def test_manifest_roundtrip_bytes(small_artifact, tmp_path):
    text = small_artifact.read_text()
    assert manifest.digest_ok(text) and text.endswith('"}\n')
    doc = manifest.loads(text)
    T, basis, par = manifest.to_objects(doc)
    again = tmp_path / "again.json"
    manifest.write(again, manifest.build_body(T, basis, par["t"], par["degA1"], par["d_lower"]))
    assert again.read_bytes() == small_artifact.read_bytes()
    assert (T.n, T.k, T.m) == (30, 1, 5) and is_self_dual(basis)


def test_construct_deterministic(small_artifact, tmp_path):
    other = tmp_path / "b.json"
    assert main(["construct", "--preset", "small", "--out", str(other)]) == 0
    assert other.read_bytes() == small_artifact.read_bytes()


def test_gzip(small_artifact, tmp_path):
    a, b = tmp_path / "x.json.gz", tmp_path / "y.bin"
    assert main(["construct", "--preset", "small", "--out", str(a)]) == 0
    assert main(["construct", "--preset", "small", "--gzip", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert gzip.decompress(a.read_bytes()) == small_artifact.read_bytes()
    assert main(["verify", str(a), "--json", str(tmp_path / "r.json")]) == 0


def test_verify_ok(small_artifact, tmp_path):
    rep = tmp_path / "rep.json"
    assert main(["verify", str(small_artifact), "--states", "--json", str(rep)]) == 0
    r = json.loads(rep.read_text())
    assert r["passed"] and r["digest_ok"] and r["triorthogonality"]["mode"] == "exhaustive"
    assert r["triorthogonality"]["triples_checked"] == 125
    _, basis, _ = manifest.to_objects(manifest.read(small_artifact))
    c = decomposition(basis).C
    assert c == 5 and r["overhead"]["ratio"] == str(c * 30)  # C n / k over GF(32)


def _corrupt_row(text: str, row: int) -> dict:
    doc = json.loads(text)
    body = manifest.body_of(doc)
    r = body["rows"][row]
    body["rows"][row] = r[:-1] + format(int(r[-1], 16) ^ 1, "x")  # flip the low bit of the last entry
    return body


def test_corrupted_row_fails_with_triple(small_artifact, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    manifest.write(bad, _corrupt_row(small_artifact.read_text(), 2))  # fresh digest: only the math is wrong
    assert main(["verify", str(bad), "--json", str(tmp_path / "r.json")]) == 1
    err = capsys.readouterr().err
    assert "identity violated at rows (" in err
    r = json.loads((tmp_path / "r.json").read_text())
    assert r["digest_ok"] and not r["triorthogonality"]["passed"]
    assert any(2 in (v["a"], v["b"], v.get("c")) for v in r["triorthogonality"]["violations"])


def test_tampered_digest(small_artifact, tmp_path, capsys):
    text = small_artifact.read_text()
    doc = json.loads(text)
    body = _corrupt_row(text, 0)
    tampered = manifest.dumps(body)
    tampered = tampered[: tampered.rfind('"digest"')] + '"digest":"' + doc["digest"] + '"}\n'
    bad = tmp_path / "t.json"
    bad.write_text(tampered)
    assert not manifest.digest_ok(tampered)
    with pytest.raises(manifest.ManifestError):
        manifest.loads(tampered)
    assert main(["verify", str(bad), "--json", str(tmp_path / "r.json")]) == 1
    assert "rows (" in capsys.readouterr().err
    assert main(["simulate", str(bad), "--p", "0.01", "--trials", "10"]) == 1


def test_usage_errors(small_artifact, tmp_path):
    out = str(tmp_path / "z.json")
    assert main(["construct", "--curve", "rational:s=5", "--a", "1", "--k", "1", "--out", out]) == 2
    assert main(["construct", "--curve", "hermitian:q0=4", "--out", out]) == 2
    assert main(["construct", "--curve", "rational:s=6", "--out", out]) == 2
    assert main(["construct", "--out", out]) == 2
    assert main(["simulate", str(small_artifact), "--p", "0.01", "--trials", "0"]) == 2
    assert main(["simulate", str(small_artifact), "--p", "1.5"]) == 2
    assert main(["simulate", str(small_artifact), "--weight", "1", "--t", "3"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["simulate", str(small_artifact)])
    assert exc.value.code == 2


def test_simulate_outputs(small_artifact, tmp_path, capsys, monkeypatch):
    j1, j2, c1 = tmp_path / "1.json", tmp_path / "2.json", tmp_path / "1.csv"
    assert main(["simulate", str(small_artifact), "--p", "0.05", "--trials", "5000", "--seed", "9", "--json", str(j1), "--csv", str(c1)]) == 0
    monkeypatch.setenv("AGDISTILL_THREADS", "3")
    assert main(["simulate", str(small_artifact), "--p", "0.05", "--trials", "5000", "--seed", "9", "--json", str(j2)]) == 0
    assert j1.read_bytes() == j2.read_bytes()
    d = json.loads(j1.read_text())
    assert d["trials"] == 5000 and "wall_time" not in d
    assert c1.read_text().splitlines()[0].split(",") == list(d)
    assert "wall time" in capsys.readouterr().err
    assert main(["simulate", str(small_artifact), "--weight", "2", "--trials", "2000"]) == 0
    assert json.loads(capsys.readouterr().out)["block_failures"] == 0


def test_decompose_reference(tmp_path, reference_gates):
    out = tmp_path / "d.json"
    assert main(["decompose", "--basis", "paper", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["C"] == 70 and {k: d[k] for k in ("z", "cz", "ccz")} == reference_gates


def test_decompose_file_and_search(tmp_path):
    out = tmp_path / "s.json"
    assert main(["decompose", "--basis", "search", "--s", "5", "--budget", "3", "--out", str(out)]) == 0
    found = json.loads(out.read_text())
    assert found["s"] == 5 and found["C"] == len(found["ccz"])
    again = tmp_path / "f.json"
    assert main(["decompose", "--basis", "file", "--basis-file", str(out), "--out", str(again)]) == 0
    assert json.loads(again.read_text()) == found
    bad = dict(found, basis=[found["basis"][0]] * 5)
    (tmp_path / "bad.json").write_text(json.dumps(bad))
    assert main(["decompose", "--basis", "file", "--basis-file", str(tmp_path / "bad.json")]) == 1
    assert main(["decompose", "--basis", "file"]) == 2


def test_default_basis():
    F10, F5 = get_field(10), get_field(5)
    assert default_basis(F10, 0).alphas[0] == 0b110110101
    assert default_basis(F5, 3) == find_self_dual_basis(F5, 3)


def test_console_script_help():
    res = subprocess.run([sys.executable, "-m", "agdistill.cli", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "construct" in res.stdout


def test_hex_rows():
    F = get_field(10)
    m = F.random(np.random.default_rng(0), (3, 7))
    rows = manifest.matrix_to_hex(F, m)
    assert np.array_equal(np.array([manifest.hex_to_row(F, r) for r in rows]), m)
