"""Front-door contract: exit codes, artifacts, manifests, cache roundtrip.

Subcommands run in-process through run(argv) against a temporary output
directory; one test drives the installed console script to check the
packaging wire-up.
"""

import csv
import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from rslab import cache
from rslab.cli import cache_roundtrip, run
from rslab.eigenforms import eigenforms
from rslab.reports import cache_file_digest


def _read_artifact(path):
    with open(path) as fh:
        first = fh.readline()
        assert first.startswith("# manifest: ")
        manifest_id = first.split(":", 1)[1].strip()
        rows = list(csv.reader(fh))
    return manifest_id, rows


def _manifest_ids(out_dir):
    path = os.path.join(out_dir, "manifest.jsonl")
    with open(path) as fh:
        return [json.loads(line)["manifest_id"] for line in fh]


def test_usage_errors(capsys):
    assert run([]) == 1
    assert run(["fourier"]) == 1
    assert run(["eigenforms", "--k", "24", "--wat"]) == 1
    err = capsys.readouterr().err
    assert "usage" in err


def test_validation_failure_exit_code(tmp_path, capsys):
    # weight 12 has a single form, so a cross pair cannot exist
    assert run(["primes", "--k", "12", "--which", "cross",
                "--out", str(tmp_path)]) == 2
    assert "validation failure" in capsys.readouterr().err
    assert run(["zeros", "--target", "sym2", "--k", "12",
                "--gamma-convention", "motivic",
                "--out", str(tmp_path)]) == 2


def test_basis_echelon_artifact(tmp_path):
    out = str(tmp_path)
    assert run(["basis", "--k", "24", "--n", "6", "--out", out]) == 0
    man_id, rows = _read_artifact(os.path.join(out, "basis_k24.csv"))
    assert rows[0] == ["row", "n", "a_n"]
    body = {(int(r[0]), int(r[1])): int(r[2]) for r in rows[1:]}
    # echelon normalization a_{g_i}(j) = delta_{ij}
    for i in range(2):
        for j in range(1, 3):
            assert body[(i, j)] == (1 if i + 1 == j else 0)
    assert man_id in _manifest_ids(out)


def test_eigenforms_artifact_and_manifest_append(tmp_path, monkeypatch):
    out = str(tmp_path / "out")
    monkeypatch.setenv("RSLAB_CACHE_DIR", str(tmp_path / "cache"))
    assert run(["eigenforms", "--k", "12", "--n", "30",
                "--coeff-bound", "200", "--out", out]) == 0
    man_id, rows = _read_artifact(os.path.join(out, "eigenforms_k12.csv"))
    assert rows[0] == ["n", "lambda_0"]
    assert len(rows) == 31
    assert float(rows[1][1]) == 1.0
    ids = _manifest_ids(out)
    assert ids[-1] == man_id
    # the run persists the weight cache and stamps its digest in the manifest
    assert os.path.exists(cache.cache_path(12))
    assert cache_roundtrip(12)
    with open(os.path.join(out, "manifest.jsonl")) as fh:
        rec = json.loads(fh.readlines()[-1])
    assert rec["cache_digests"]["weight_12"] == cache_file_digest(12)
    # append-only: a second run adds a line, never rewrites
    assert run(["basis", "--k", "12", "--out", out]) == 0
    assert _manifest_ids(out)[:len(ids)] == ids


def test_coeffs_zeta(tmp_path):
    out = str(tmp_path)
    assert run(["coeffs", "--kind", "zeta", "--n", "8", "--out", out]) == 0
    _, rows = _read_artifact(os.path.join(out, "coeffs_zeta.csv"))
    assert [r[1] for r in rows[1:]] == ["1.0"] * 8


def test_rn_table_consistent(tmp_path):
    out = str(tmp_path)
    assert run(["rn", "--k", "12", "--x-list", "10,50,100",
                "--out", out]) == 0
    _, rows = _read_artifact(os.path.join(out, "rn_k12_0x0.csv"))
    assert rows[0] == ["x", "rn_sum", "rn_main", "ratio"]
    last = rows[-1]
    assert float(last[3]) == pytest.approx(
        float(last[1]) / float(last[2]), rel=1e-12)
    assert float(last[3]) == pytest.approx(0.935958, abs=1e-3)
    with open(os.path.join(out, "rn_k12_0x0.dat")) as fh:
        fh.readline()
        pts = [line.split() for line in fh]
    assert len(pts) == 3 and len(pts[0]) == 2


def test_distinguish_record(tmp_path):
    out = str(tmp_path)
    assert run(["distinguish", "--k", "24", "--out", out]) == 0
    with open(os.path.join(out, "distinguish_k24.jsonl")) as fh:
        rec = json.loads(fh.readline())
    assert rec["p_star"] == 2
    assert rec["certified"] is True
    assert rec["discriminant"] == 83041344
    assert rec["manifest"] in _manifest_ids(out)
    for stem in ("rn1_k24.dat", "rn2_k24.dat"):
        assert os.path.exists(os.path.join(out, stem))


def test_zeros_sym2_count_zero(tmp_path):
    out = str(tmp_path)
    assert run(["zeros", "--target", "sym2", "--k", "12", "--alpha", "0.6",
                "--t", "10", "--out", out]) == 0
    with open(os.path.join(out, "zeros_sym2.jsonl")) as fh:
        rec = json.loads(fh.readline())
    assert rec["count"] == 0
    assert rec["accepted"] is True
    assert rec["contour_residual"] <= 1e-3
    assert rec["gamma_convention"] == "default"


def test_sieve_summary(tmp_path):
    out = str(tmp_path)
    assert run(["sieve", "--k", "24", "--length", "500", "--out", out]) == 0
    with open(os.path.join(out, "sieve_summary_k24.jsonl")) as fh:
        rec = json.loads(fh.readline())
    assert rec["lhs_unit"] == 2.0
    assert rec["ratio_spread"] <= 10.0
    assert rec["seed"] == 20240801
    _, rows = _read_artifact(os.path.join(out, "sieve_matrix_k24.csv"))
    assert len(rows) == 1 + 16


def test_moments_first_only(tmp_path):
    out = str(tmp_path)
    assert run(["moments", "--k", "24", "--t", "1", "--first-only",
                "--out", out]) == 0
    with open(os.path.join(out, "moments_k24.jsonl")) as fh:
        rec = json.loads(fh.readline())
    assert float(rec["first"]) >= 0
    assert rec["second"] is None


def test_sato_tate_masses(tmp_path):
    out = str(tmp_path)
    assert run(["sato-tate", "--k", "12", "--x", "10000", "--out", out]) == 0
    _, rows = _read_artifact(os.path.join(out, "sato_tate_k12_0.csv"))
    total = sum(Fraction(r[3]) for r in rows[1:])
    assert total == 1
    with open(os.path.join(out, "sato_tate_k12_0.jsonl")) as fh:
        rec = json.loads(fh.readline())
    assert rec["ks"] <= 0.05


def test_l1_single_weight(tmp_path):
    out = str(tmp_path)
    assert run(["l1", "--k-list", "12", "--out", out]) == 0
    _, rows = _read_artifact(os.path.join(out, "l1_values.csv"))
    assert rows[1][0] == "sym2(k12.0)"
    assert float(rows[1][3]) == pytest.approx(0.63179295, rel=2e-4)


def test_mollifier_check_small(tmp_path):
    out = str(tmp_path)
    assert run(["mollifier-check", "--k", "24", "--s-list", "2",
                "--z-list", "20", "--l-max", "300", "--out", out]) == 0
    with open(os.path.join(out, "mollifier_check_k24.jsonl")) as fh:
        recs = [json.loads(line) for line in fh]
    assert len(recs) == 3  # pairs (0,0), (0,1), (1,1)
    assert all(abs(float(r["residual"])) <= 1e-25 for r in recs)


def test_density_bookkeeping(tmp_path):
    out = str(tmp_path)
    assert run(["density", "--k", "24", "--alpha", "0.75", "--t", "5",
                "--out", out]) == 0
    _, rows = _read_artifact(os.path.join(out, "density_k24.csv"))
    per_pair = sum(int(r[3]) for r in rows[1:])
    with open(os.path.join(out, "density_k24.jsonl")) as fh:
        rec = json.loads(fh.readline())
    assert rec["aggregate"] == per_pair == 0
    assert rec["poisoned"] is False


def test_probe_rows(tmp_path):
    out = str(tmp_path)
    assert run(["probe", "--target", "sym2", "--k", "12",
                "--t-list", "0,1,2", "--out", out]) == 0
    _, rows = _read_artifact(os.path.join(out, "probe_sym2.csv"))
    assert len(rows) == 4
    assert all(float(r[3]) > 0 for r in rows[1:])


def test_console_script(tmp_path):
    out = str(tmp_path)
    proc = subprocess.run(["rslab", "basis", "--k", "12", "--out", out],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert os.path.exists(os.path.join(out, "basis_k12.csv"))


def test_cache_roundtrip(tmp_path):
    d = str(tmp_path / "cache")
    forms = eigenforms(12, coeff_bound=2000)
    cache.save_forms(12, forms, directory=d)
    assert cache_roundtrip(12, directory=d)
    assert not cache_roundtrip(24, directory=d)  # never written
    # truncation invalidates instead of crashing
    path = cache.cache_path(12, directory=d)
    with open(path) as fh:
        text = fh.read()
    with open(path, "w") as fh:
        fh.write(text[:len(text) // 2])
    assert cache.load_forms(12, directory=d) is None
    assert not cache_roundtrip(12, directory=d)
