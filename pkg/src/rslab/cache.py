"""Per-weight eigenform cache files.

One text file per weight holding the exact integer characteristic polynomial,
the exact integer adjugate polynomials behind each eigenvector, and the
lambda table as decimal strings at an annotated bit precision. Writes go to a
temp file in the same directory followed by an atomic rename, so concurrent
writers leave exactly one intact winner. A sha256 digest over the body turns
truncation or corruption into a cache miss instead of a crash.
"""

from __future__ import annotations

import hashlib
import os
import tempfile

import mpmath
from mpmath import mp, mpf

from .eigenforms import Eigenform

MAGIC = "rslab-eigenform-cache v1"
ORDERING = "lambda2-ascending"


def cache_dir(explicit: str | None = None) -> str:
    if explicit:
        return explicit
    env = os.environ.get("RSLAB_CACHE_DIR")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "rslab")


def cache_path(k: int, directory: str | None = None) -> str:
    return os.path.join(cache_dir(directory), "weight_%04d.txt" % k)


def mpf_to_str(x, prec: int) -> str:
    """Decimal string with enough digits to reproduce x at prec bits."""
    dps = int(prec * 0.30103) + 3
    return mpmath.libmp.to_str(x._mpf_, dps)


def str_to_mpf(s: str, prec: int):
    with mp.workprec(prec):
        return +mpf(s)


def _body_lines(k: int, forms: list) -> list:
    lines = ["k %d" % k, "dim %d" % len(forms)]
    if forms:
        f0 = forms[0]
        lines.append("prec %d" % f0.prec)
        lines.append("coeff_bound %d" % f0.coeff_bound)
        lines.append("operator %s" % f0.operator)
        lines.append("ordering %s" % ORDERING)
        lines.append("charpoly " + " ".join(str(c) for c in f0.charpoly))
    for f in forms:
        lines.append("form %d" % f.index)
        lo_n, lo_d, hi_n, hi_d = f.root_bracket
        lines.append("bracket %d %d %d %d" % (lo_n, lo_d, hi_n, hi_d))
        for i, poly in enumerate(f.combo_polys):
            lines.append("combo %d " % i + " ".join(str(c) for c in poly))
        for i, v in enumerate(f.vec):
            lines.append("vec %d %s" % (i, mpf_to_str(v, f.prec + 64)))
        for n in range(1, f.coeff_bound + 1):
            lines.append("lam %d %s" % (n, mpf_to_str(f.lambda_(n), f.prec)))
    lines.append("end")
    return lines


def save_forms(k: int, forms: list, directory: str | None = None) -> str:
    """Write the cache file for weight k atomically; returns the path."""
    d = cache_dir(directory)
    os.makedirs(d, exist_ok=True)
    body = "\n".join(_body_lines(k, forms)) + "\n"
    digest = hashlib.sha256(body.encode()).hexdigest()
    payload = "%s\ndigest %s\n%s" % (MAGIC, digest, body)
    fd, tmp = tempfile.mkstemp(prefix=".weight_%04d-" % k, dir=d)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(payload)
        path = cache_path(k, directory)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load_forms(k: int, directory: str | None = None,
               min_bound: int = 0, min_prec: int = 0):
    """Reload weight k; None on any miss, digest mismatch, or stale bounds."""
    path = cache_path(k, directory)
    try:
        with open(path, "r") as fh:
            text = fh.read()
    except OSError:
        return None
    try:
        head, digest_line, body = text.split("\n", 2)
        if head != MAGIC or not digest_line.startswith("digest "):
            return None
        if hashlib.sha256(body.encode()).hexdigest() != digest_line.split()[1]:
            return None
        return _parse_body(k, body, min_bound, min_prec)
    except (ValueError, IndexError, KeyError):
        return None


def _parse_body(k: int, body: str, min_bound: int, min_prec: int):
    lines = body.splitlines()
    if not lines or lines[-1] != "end":
        return None
    meta = {}
    i = 0
    while i < len(lines) and not lines[i].startswith("form "):
        if lines[i] == "end":
            break
        key, _, rest = lines[i].partition(" ")
        meta[key] = rest
        i += 1
    if int(meta["k"]) != k:
        return None
    dim = int(meta["dim"])
    if dim == 0:
        return []
    prec = int(meta["prec"])
    bound = int(meta["coeff_bound"])
    if prec < min_prec or bound < min_bound:
        return None
    cp = [int(c) for c in meta["charpoly"].split()]
    operator = meta["operator"]
    forms = []
    while i < len(lines) and lines[i].startswith("form "):
        index = int(lines[i].split()[1])
        i += 1
        br = tuple(int(t) for t in lines[i].split()[1:])
        i += 1
        combos, vec, lam = [], [], {}
        while i < len(lines) and lines[i] != "end" and not lines[i].startswith("form "):
            tag, _, rest = lines[i].partition(" ")
            if tag == "combo":
                combos.append([int(c) for c in rest.split()[1:]])
            elif tag == "vec":
                vec.append(str_to_mpf(rest.split(None, 1)[1], prec + 64))
            elif tag == "lam":
                n_s, v_s = rest.split(None, 1)
                lam[int(n_s)] = str_to_mpf(v_s, prec)
            else:
                return None
            i += 1
        f = Eigenform(k, index, prec, bound, operator, tuple(vec), None,
                      cp, combos, br)
        f._lam = lam
        forms.append(f)
    if len(forms) != dim:
        return None
    return forms
