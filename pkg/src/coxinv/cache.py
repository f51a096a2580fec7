"""Append-only JSONL cache for enumeration layers.

Ball enumeration dominates every expensive pipeline, so its per-length
class counts are cached keyed by (matrix digest, radius).  The file is
append-only: a deeper enumeration appends a new record rather than
rewriting, and lookups take the deepest usable record.  Records that fail
to parse, carry an unknown version, or are structurally wrong are skipped
silently; a truncated tail (interrupted write) therefore costs a rebuild,
never an error.
"""

import json
import os
from pathlib import Path

CACHE_VERSION = 1
CACHE_FILENAME = "layers.jsonl"


def cache_file(cache_dir):
    return Path(cache_dir) / CACHE_FILENAME


def _encode_layers(layers):
    out = []
    for layer in layers:
        out.append(sorted([list(cv), c] for cv, c in layer.items()))
    return out


def _decode_layers(raw):
    layers = []
    for layer in raw:
        d = {}
        for cv, c in layer:
            d[tuple(int(x) for x in cv)] = int(c)
        layers.append(d)
    return layers


def load_layers(cache_dir, digest, radius):
    """Deepest cached (layers, method) for this digest covering radius,
    or None."""
    if cache_dir is None:
        return None
    path = cache_file(cache_dir)
    if not path.exists():
        return None
    best = None
    try:
        lines = path.read_text().splitlines()
    except OSError:
        return None
    for line in lines:
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            if rec.get("v") != CACHE_VERSION or rec.get("digest") != digest:
                continue
            r = int(rec["radius"])
            if r < radius:
                continue
            if best is not None and best[0] >= r:
                continue
            layers = _decode_layers(rec["layers"])
            if len(layers) != r + 1:
                continue
            best = (r, layers, str(rec.get("method", "bfs")))
        except (ValueError, KeyError, TypeError):
            continue        # corrupt or foreign line: rebuild instead
    if best is None:
        return None
    _, layers, method = best
    return layers[:radius + 1], method


def store_layers(cache_dir, digest, radius, layers, method):
    if cache_dir is None:
        return
    os.makedirs(cache_dir, exist_ok=True)
    rec = {"v": CACHE_VERSION, "digest": digest, "radius": radius,
           "method": method, "layers": _encode_layers(layers)}
    with open(cache_file(cache_dir), "a") as fh:
        fh.write(json.dumps(rec, sort_keys=True) + "\n")


def cached_layer_counts(M, radius, caps=None, cache_dir=None):
    """layer_class_counts with a transparent disk cache.

    Hits replay the stored method tag so downstream reports are
    bit-identical whether or not the cache was warm.
    """
    from .growth import layer_class_counts
    digest = M.digest()
    hit = load_layers(cache_dir, digest, radius)
    if hit is not None:
        return hit
    layers, method = layer_class_counts(M, radius, caps=caps)
    store_layers(cache_dir, digest, radius, layers, method)
    return layers, method
