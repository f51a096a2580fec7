"""Deterministic invariant reports.

A report is a plain JSON-able dict assembled in a fixed order with exact
values rendered as strings and floats kept as floats.  Infinite values
are carried as the string token "Infinity" ("-Infinity") in the machine
format and restored on load, so reports survive a JSON round trip
byte-for-byte.  Optional sections that fail a precondition (confdim on a
non-hyperbolic system, support refinement without a witness) record the
error inline rather than failing the whole report.

Timings are collected only on request and live outside the deterministic
payload.
"""

import json
import math
import time
from fractions import Fraction

from .building import ThicknessVector, critical_exponents
from .cache import cached_layer_counts
from .conformal import confdim_bounds, is_nerve_circle, moussong_hyperbolic
from .coxeter import classify_parabolic, finite_group_order
from .davis import bestvina_support, is_type_PM, vcd_real
from .davis import nerve_complex
from .errors import (AffineDegenerate, CoxinvError, DegenerateWeights,
                     NoWitness, NotHyperbolic, SchemaError, ThinBuilding)
from .growth import (WeightVector, classify_convergence, growth_rate,
                     rational_growth_series)

SCHEMA_VERSION = 1
INF_TOKEN = "Infinity"
NEG_INF_TOKEN = "-Infinity"


# ---------------------------------------------------------------------------
# JSON with explicit infinity tokens

def encode_json_value(x):
    if isinstance(x, float):
        if math.isinf(x):
            return INF_TOKEN if x > 0 else NEG_INF_TOKEN
        return x
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): encode_json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode_json_value(v) for v in x]
    return x


def decode_json_value(x):
    if x == INF_TOKEN:
        return math.inf
    if x == NEG_INF_TOKEN:
        return -math.inf
    if isinstance(x, dict):
        return {k: decode_json_value(v) for k, v in x.items()}
    if isinstance(x, list):
        return [decode_json_value(v) for v in x]
    return x


def report_to_json(report):
    """Canonical machine rendering: sorted keys, no whitespace, infinity
    tokens."""
    return json.dumps(encode_json_value(report), sort_keys=True,
                      separators=(",", ":"), allow_nan=False)


def report_from_json(text):
    return decode_json_value(json.loads(text))


# ---------------------------------------------------------------------------
# pieces

def _poly_str(p, names):
    """Deterministic human-readable polynomial."""
    terms = sorted(p.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))
    if not terms:
        return "0"
    out = []
    for e, c in terms:
        factors = []
        if abs(c) != 1 or not any(e):
            factors.append(str(abs(c)))
        for i, k in enumerate(e):
            if k == 1:
                factors.append(names[i])
            elif k > 1:
                factors.append(f"{names[i]}^{k}")
        term = "*".join(factors)
        if not out:
            out.append(term if c > 0 else f"-{term}")
        else:
            out.append(("+ " if c > 0 else "- ") + term)
    return " ".join(out)


def _matrix_json(M):
    return [[("inf" if v == math.inf else v) for v in row] for row in M.m]


def _rate_json(rate):
    return {
        "value": rate.value,
        "bracket": [rate.bracket[0], rate.bracket[1]],
        "method": rate.method,
        "uncertainty": rate.uncertainty,
        "exact": rate.exact,
    }


def _error_json(exc):
    return {"error": {"type": type(exc).__name__, "message": str(exc)}}


def _witness_json(w):
    if w is None:
        return None
    kind = type(w).__name__
    if kind == "AffineRank3":
        return {"kind": kind, "subset": list(w.subset)}
    return {"kind": kind, "first": list(w.first), "second": list(w.second)}


# ---------------------------------------------------------------------------
# assembly

def build_report(M, thickness=None, weights=None, depth=8, radius=None,
                 lam=None, apartment_confdim=None, p_grid=(1.5, 2.0, 3.0),
                 caps=None, cache_dir=None, timings=False):
    """Full invariant report for one system.

    thickness: ThicknessVector or None (no building sections).
    weights: WeightVector or None (thickness-induced, else all-one).
    """
    clock = {}

    def timed(name, fn):
        t0 = time.perf_counter()
        out = fn()
        clock[name] = time.perf_counter() - t0
        return out

    cls = classify_parabolic(M)
    order = finite_group_order(M, range(M.rank)) if cls.is_finite() else None
    report = {
        "schema_version": SCHEMA_VERSION,
        "system": {
            "generators": list(M.generators),
            "matrix": _matrix_json(M),
            "digest": M.digest(),
            "rank": M.rank,
            "right_angled": M.is_right_angled(),
        },
        "classification": {
            "kind": cls.kind,
            "components": [{"label": c.label, "kind": c.kind,
                            "vertices": sorted(c.vertices)}
                           for c in cls.components],
            "finite": cls.is_finite(),
            "order": order,
        },
        "parameters": {
            "depth": depth,
            "radius": radius,
            "p_grid": [float(p) for p in p_grid],
        },
    }

    # nerve and Davis-complex invariants
    nerve = timed("nerve", lambda: nerve_complex(M))
    pm = timed("type_pm", lambda: is_type_PM(M))
    report["nerve"] = {
        "dim": nerve.dim,
        "face_counts": [len(nerve.k_faces(k)) for k in range(nerve.dim + 1)],
        "euler": nerve.euler_characteristic(),
        "is_circle": is_nerve_circle(M),
    }
    report["type_pm"] = {
        "is_pm": pm.is_pm,
        "dim": pm.dim,
        "purely_dimensional": pm.purely_dimensional,
        "pseudomanifold": pm.pseudomanifold,
        "gallery_connected": pm.gallery_connected,
        "orientable": pm.orientable,
    }
    v = timed("vcd", lambda: vcd_real(M))
    report["vcd"] = {
        "value": v.value,
        "spherical_value": v.spherical_value,
        "witnesses": [{"subset": list(w.subset), "degree": w.degree,
                       "spherical": w.spherical} for w in v.witnesses],
    }
    try:
        bs = timed("bestvina", lambda: bestvina_support(M, vcd=v))
        report["bestvina"] = {"F0": list(bs.F0), "S0": list(bs.S0),
                              "degree": bs.degree}
    except NoWitness as exc:
        report["bestvina"] = _error_json(exc)

    hyp = moussong_hyperbolic(M)
    report["hyperbolic"] = {"verdict": hyp.hyperbolic,
                            "witness": _witness_json(hyp.witness)}

    # weighted growth
    if weights is None:
        if thickness is not None:
            weights = WeightVector(M, [Fraction(q) for q in thickness.values])
        else:
            weights = WeightVector(M, [Fraction(1)] * len(M.conjugacy_classes()))
    layers, source = timed(
        "layers", lambda: cached_layer_counts(M, depth, caps=caps,
                                              cache_dir=cache_dir))
    class_of = M.class_of()
    growth = {
        "weights": {M.generators[i]:
                    encode_json_value(weights.values[class_of[i]])
                    for i in range(M.rank)},
        "weighted": not weights.all_one(),
        "layer_source": source,
        "layer_sizes": [sum(layer.values()) for layer in layers],
    }
    try:
        series = timed("series",
                       lambda: rational_growth_series(M, caps=caps))
        # the report carries the collapsed univariate form; the per-class
        # function stays a library-level object
        growth["series"] = {
            "variables": ["t"],
            "numerator": _poly_str(series.numerator.collapse(), ["t"]),
            "denominator": _poly_str(series.denominator.collapse(), ["t"]),
            "validated_depth": series.validated_depth,
        }
        # trivial weights fall back to the plain rate e(W)
        w_arg = None if weights.all_one() else weights
        rate = timed("rate", lambda: growth_rate(M, w_arg, method="series",
                                                 caps=caps, series=series))
        growth["rate"] = _rate_json(rate)
        if w_arg is not None:
            growth["convergence_at_one"] = classify_convergence(
                M, weights, 1.0, rate=rate, caps=caps)
    except (DegenerateWeights, SchemaError) as exc:
        growth.update(_error_json(exc))
    report["growth"] = growth

    # building sections only with a thickness vector
    if thickness is not None:
        try:
            ce = timed("exponents",
                       lambda: critical_exponents(M, thickness, caps=caps))
            report["building"] = {
                "thickness": list(thickness.per_generator(M)),
                "thin": ce.thin,
                "exponents": {
                    "p_hom": ce.p_hom,
                    "p_cohom": ce.p_cohom,
                    "p_hom_bracket": list(ce.p_hom_bracket),
                    "p_cohom_bracket": list(ce.p_cohom_bracket),
                },
                "nerve_is_pm": ce.nerve_is_pm,
            }
        except CoxinvError as exc:
            report["building"] = _error_json(exc)
        try:
            b = timed("confdim",
                      lambda: confdim_bounds(M, thickness, lam=lam,
                                             apartment_confdim=apartment_confdim,
                                             caps=caps))
            report["confdim"] = {
                "lower": b.lower,
                "upper": b.upper,
                "lower_provenance": b.lower_provenance,
                "upper_provenance": b.upper_provenance,
                "lambda": b.lam,
                "lambda_provenance": b.lambda_provenance,
                "hausdim": b.hausdim,
                "fuchsian": b.fuchsian,
            }
        except (NotHyperbolic, ThinBuilding, AffineDegenerate) as exc:
            report["confdim"] = _error_json(exc)
    else:
        report["building"] = None
        report["confdim"] = None

    if timings:
        report["timings"] = {k: round(t, 6) for k, t in sorted(clock.items())}
    return report


# ---------------------------------------------------------------------------
# text rendering

def _fmt(v):
    if v is None:
        return "-"
    if isinstance(v, float):
        if math.isinf(v):
            return INF_TOKEN if v > 0 else NEG_INF_TOKEN
        return repr(v)
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def report_to_text(report):
    lines = []
    add = lines.append
    sysmeta = report["system"]
    add(f"system: rank {sysmeta['rank']}, generators "
        + " ".join(sysmeta["generators"]))
    add(f"  digest: {sysmeta['digest'][:16]}")
    add(f"  right-angled: {_fmt(sysmeta['right_angled'])}")
    cls = report["classification"]
    add(f"classification: {cls['kind']}"
        + (f", order {cls['order']}" if cls["order"] else ""))
    nerve = report["nerve"]
    add(f"nerve: dim {nerve['dim']}, faces {_fmt(nerve['face_counts'])}, "
        f"euler {nerve['euler']}, circle {_fmt(nerve['is_circle'])}")
    pm = report["type_pm"]
    add(f"type PM: {_fmt(pm['is_pm'])} (pseudomanifold "
        f"{_fmt(pm['pseudomanifold'])}, orientable {_fmt(pm['orientable'])})")
    v = report["vcd"]
    add(f"vcd_R: {v['value']} (spherical-only {v['spherical_value']})")
    for w in v["witnesses"][:4]:
        add(f"  witness: subset {_fmt(w['subset'])} degree {w['degree']}"
            + ("" if w["spherical"] else " (non-spherical)"))
    bs = report["bestvina"]
    if "error" in bs:
        add(f"support refinement: unavailable ({bs['error']['message']})")
    else:
        add(f"support refinement: F0 {_fmt(bs['F0'])} -> S0 {_fmt(bs['S0'])}")
    hyp = report["hyperbolic"]
    if hyp["verdict"]:
        add("hyperbolic: yes")
    else:
        w = hyp["witness"]
        detail = _fmt(w.get("subset", [])) if w["kind"] == "AffineRank3" \
            else f"{_fmt(w['first'])} x {_fmt(w['second'])}"
        add(f"hyperbolic: no ({w['kind']} {detail})")
    g = report["growth"]
    add("growth:")
    add(f"  weights: " + ", ".join(f"{k}={v}" for k, v in sorted(g["weights"].items())))
    add(f"  layer sizes ({g['layer_source']}): {_fmt(g['layer_sizes'])}")
    if "series" in g:
        add(f"  series: ({g['series']['numerator']}) / ({g['series']['denominator']})")
        r = g["rate"]
        add(f"  rate: {_fmt(r['value'])} [{_fmt(r['bracket'][0])}, "
            f"{_fmt(r['bracket'][1])}] via {r['method']}"
            + (" (exact)" if r["exact"] else ""))
    elif "error" in g:
        add(f"  rate: unavailable ({g['error']['message']})")
    b = report.get("building")
    if b is not None:
        add("building:")
        if "error" in b:
            add(f"  unavailable ({b['error']['message']})")
        else:
            add(f"  thickness: {_fmt(b['thickness'])}"
                + (" (thin)" if b["thin"] else ""))
            e = b["exponents"]
            add(f"  critical exponents: p_hom {_fmt(e['p_hom'])}, "
                f"p_cohom {_fmt(e['p_cohom'])}")
    c = report.get("confdim")
    if c is not None:
        if "error" in c:
            add(f"confdim: unavailable ({c['error']['message']})")
        elif c["fuchsian"]:
            add(f"confdim: {_fmt(c['lower'])} (exact, {c['lower_provenance']})")
        else:
            add(f"confdim: [{_fmt(c['lower'])}, {_fmt(c['upper'])}] "
                f"({c['lower_provenance']} / {c['upper_provenance']})")
        if "error" not in c:
            add(f"  lambda {_fmt(c['lambda'])} ({c['lambda_provenance']}), "
                f"hausdim {_fmt(c['hausdim'])}")
    if "timings" in report:
        add("timings (s): " + ", ".join(
            f"{k}={v}" for k, v in sorted(report["timings"].items())))
    return "\n".join(lines) + "\n"
