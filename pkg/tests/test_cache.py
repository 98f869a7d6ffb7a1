"""Cache files: bit-identical reload, corruption handling, atomicity."""

import os

from rslab import cache
from rslab.eigenforms import eigenforms


def _write(tmp_path, k=24, n=40, prec=160):
    forms = eigenforms(k, coeff_bound=n, prec=prec)
    path = cache.save_forms(k, forms, directory=str(tmp_path))
    return forms, path


def test_roundtrip_bit_identical(tmp_path):
    forms, path = _write(tmp_path)
    loaded = cache.load_forms(24, directory=str(tmp_path))
    assert loaded is not None and len(loaded) == 2
    for f, g in zip(forms, loaded):
        assert g.charpoly == f.charpoly
        assert g.combo_polys == f.combo_polys
        assert g.operator == f.operator
        for n in range(1, f.coeff_bound + 1):
            a, b = f.lambda_(n), g.lambda_(n)
            assert a._mpf_ == b._mpf_
            assert cache.mpf_to_str(a, f.prec) == cache.mpf_to_str(b, f.prec)


def test_reload_is_stable_under_rewrite(tmp_path):
    _, path = _write(tmp_path)
    first = open(path).read()
    loaded = cache.load_forms(24, directory=str(tmp_path))
    cache.save_forms(24, loaded, directory=str(tmp_path))
    assert open(path).read() == first


def test_truncated_file_invalidates(tmp_path):
    _, path = _write(tmp_path)
    text = open(path).read()
    open(path, "w").write(text[: len(text) // 2])
    assert cache.load_forms(24, directory=str(tmp_path)) is None


def test_tampered_digest_invalidates(tmp_path):
    _, path = _write(tmp_path)
    text = open(path).read().replace("lam 2 ", "lam 2 -", 1)
    open(path, "w").write(text)
    assert cache.load_forms(24, directory=str(tmp_path)) is None


def test_stale_bounds_miss(tmp_path):
    _write(tmp_path, n=40, prec=160)
    assert cache.load_forms(24, directory=str(tmp_path), min_bound=41) is None
    assert cache.load_forms(24, directory=str(tmp_path), min_prec=161) is None
    assert cache.load_forms(24, directory=str(tmp_path), min_bound=40,
                            min_prec=160) is not None


def test_missing_file_and_foreign_weight(tmp_path):
    assert cache.load_forms(12, directory=str(tmp_path)) is None
    _write(tmp_path)
    # file for 24 exists; 26 still misses
    assert cache.load_forms(26, directory=str(tmp_path)) is None


def test_atomic_replace_leaves_single_file(tmp_path):
    _write(tmp_path)
    _write(tmp_path)
    names = [p for p in os.listdir(tmp_path) if not p.startswith(".")]
    assert names == ["weight_0024.txt"]


def test_environment_variable_controls_directory(tmp_path, monkeypatch):
    monkeypatch.setenv("RSLAB_CACHE_DIR", str(tmp_path))
    forms = eigenforms(12, coeff_bound=10, prec=80)
    cache.save_forms(12, forms)
    assert os.path.exists(os.path.join(str(tmp_path), "weight_0012.txt"))
    assert cache.load_forms(12) is not None
