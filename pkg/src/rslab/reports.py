"""Artifact plumbing: run manifests, CSV tables, record streams, curves.

Every emitted file opens with a "# manifest: <id>" line tying it to exactly
one entry in the append-only manifest log, so a table can be traced back to
the recorded parameters, tool version, and input cache digests that made it.
Curves are bare two-column text ready for gnuplot.
"""

import csv
import hashlib
import json
import os
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .cache import cache_path

MANIFEST_LOG = "manifest.jsonl"


@dataclass(frozen=True)
class RunManifest:
    manifest_id: str
    subcommand: str
    params: dict
    version: str
    started_utc: str
    wall_clock_s: float
    cache_digests: dict = field(default_factory=dict)


def cache_file_digest(k: int, directory=None):
    """Digest recorded inside the weight-k cache file, or None if absent."""
    try:
        with open(cache_path(k, directory), "r") as fh:
            fh.readline()
            line = fh.readline().split()
    except OSError:
        return None
    if len(line) == 2 and line[0] == "digest":
        return line[1]
    return None


def new_manifest(subcommand: str, params: dict, wall_clock_s: float,
                 weights=(), directory=None) -> RunManifest:
    started = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    digests = {("weight_%d" % k): cache_file_digest(k, directory)
               for k in sorted(set(weights))}
    seed = hashlib.sha256(json.dumps(
        [subcommand, sorted(params.items(), key=lambda kv: kv[0]),
         __version__, started, digests], default=str).encode()).hexdigest()
    return RunManifest(seed[:16], subcommand, dict(params), __version__,
                       started, wall_clock_s, digests)


def append_manifest(out_dir: str, manifest: RunManifest) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, MANIFEST_LOG)
    with open(path, "a") as fh:
        fh.write(json.dumps(asdict(manifest), default=str) + "\n")
    return path


def _open_artifact(out_dir: str, name: str, manifest: RunManifest):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    fh = open(path, "w", newline="")
    fh.write("# manifest: %s\n" % manifest.manifest_id)
    return path, fh


def write_csv(out_dir: str, name: str, manifest: RunManifest,
              header, rows) -> str:
    path, fh = _open_artifact(out_dir, name, manifest)
    with fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([str(v) for v in row])
    return path


def write_records(out_dir: str, name: str, manifest: RunManifest,
                  records) -> str:
    """Line-delimited structured records, one JSON object per line.

    No comment header here: every record carries its manifest id as a
    field so the stream stays valid line-delimited JSON throughout.
    """
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        for rec in records:
            body = {"manifest": manifest.manifest_id}
            body.update(rec)
            fh.write(json.dumps(body, default=str) + "\n")
    return path


def write_curve(out_dir: str, name: str, manifest: RunManifest,
                points) -> str:
    """Two-column gnuplot data; comment lines carry the provenance."""
    path, fh = _open_artifact(out_dir, name, manifest)
    with fh:
        for x, y in points:
            fh.write("%s %s\n" % (x, y))
    return path
