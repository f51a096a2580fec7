"""Command-line interface.

Subcommands cover the pipeline stages individually (classify, nerve,
growth, exponents, confdim, verify-oracle) plus an all-in-one report.
Input is a JSON file describing the system; machine output is canonical
JSON (sorted keys, "Infinity" tokens) and is bit-identical across runs.

Exit codes: 0 success, 2 invalid input or failed precondition,
3 resource cap exceeded, 4 a verified identity failed to hold.
"""

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from .building import (ThicknessVector, critical_exponents, oracle_battery)
from .conformal import confdim_bounds, fuchsian_report, moussong_hyperbolic
from .coxeter import CoxeterMatrix, classify_parabolic, finite_group_order
from .davis import is_type_PM, nerve_complex, vcd_real
from .elements import Caps
from .errors import (CoxinvError, ResourceExceeded, SchemaError,
                     ValidationMismatch)
from .growth import (WeightVector, classify_convergence, growth_rate,
                     rational_growth_series)
from .report import (build_report, encode_json_value, report_to_json,
                     report_to_text, _poly_str, _rate_json, _witness_json,
                     _fmt)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_MISMATCH = 4


# ---------------------------------------------------------------------------
# input loading

def _parse_entry(v):
    if isinstance(v, str):
        if v.lower() in ("inf", "infinity"):
            return math.inf
        raise SchemaError(f"bad matrix entry {v!r}")
    return v


def load_system(path):
    """(matrix, thickness or None, weights or None) from an input file."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise SchemaError("input must be a JSON object")
    try:
        gens = data["generators"]
        rows = data["matrix"]
    except KeyError as exc:
        raise SchemaError(f"input missing key {exc}")
    if not isinstance(rows, list):
        raise SchemaError("matrix must be a list of rows")
    M = CoxeterMatrix(gens, [[_parse_entry(v) for v in row] for row in rows])

    thickness = None
    if "thickness" in data:
        t = data["thickness"]
        if isinstance(t, dict):
            missing = [g for g in M.generators if g not in t]
            if missing:
                raise SchemaError(f"thickness missing generators {missing}")
            thickness = ThicknessVector.from_generator_map(M, t)
        else:
            thickness = ThicknessVector.constant(M, int(t))

    weights = None
    if "weights" in data:
        w = data["weights"]
        if isinstance(w, dict):
            missing = [g for g in M.generators if g not in w]
            if missing:
                raise SchemaError(f"weights missing generators {missing}")
            weights = WeightVector.from_generator_map(
                M, {g: Fraction(v) for g, v in w.items()})
        else:
            weights = WeightVector.constant(M, Fraction(w))
    return M, thickness, weights


def _parse_p_grid(text):
    try:
        return [Fraction(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise SchemaError(f"bad p grid {text!r}: {exc}")


def _require_thickness(thickness):
    if thickness is None:
        raise SchemaError('this command needs a "thickness" entry '
                          "in the input file")
    return thickness


# ---------------------------------------------------------------------------
# subcommands, each returning a JSON-ready dict

def cmd_classify(M, thickness, weights, args):
    cls = classify_parabolic(M)
    return {
        "digest": M.digest(),
        "rank": M.rank,
        "right_angled": M.is_right_angled(),
        "kind": cls.kind,
        "components": [{"label": c.label, "kind": c.kind,
                        "vertices": sorted(c.vertices)}
                       for c in cls.components],
        "order": finite_group_order(M, range(M.rank))
                 if cls.is_finite() else None,
        "hyperbolic": moussong_hyperbolic(M).hyperbolic,
    }


def cmd_nerve(M, thickness, weights, args):
    N = nerve_complex(M)
    pm = is_type_PM(M)
    v = vcd_real(M)
    return {
        "dim": N.dim,
        "face_counts": [len(N.k_faces(k)) for k in range(N.dim + 1)],
        "euler": N.euler_characteristic(),
        "type_pm": {
            "is_pm": pm.is_pm,
            "purely_dimensional": pm.purely_dimensional,
            "pseudomanifold": pm.pseudomanifold,
            "gallery_connected": pm.gallery_connected,
            "orientable": pm.orientable,
        },
        "vcd": v.value,
        "vcd_spherical": v.spherical_value,
    }


def cmd_growth(M, thickness, weights, args):
    caps = args.caps
    if weights is None and thickness is not None:
        weights = WeightVector(M, [Fraction(q) for q in thickness.values])
    series = rational_growth_series(M, caps=caps)
    out = {
        "series": {
            "numerator": _poly_str(series.numerator.collapse(), ["t"]),
            "denominator": _poly_str(series.denominator.collapse(), ["t"]),
            "validated_depth": series.validated_depth,
        },
    }
    w_arg = None if weights is None or weights.all_one() else weights
    rate = growth_rate(M, w_arg, method="series", caps=caps, series=series)
    out["rate"] = _rate_json(rate)
    out["weighted"] = w_arg is not None
    if w_arg is not None:
        out["convergence_at_one"] = classify_convergence(
            M, weights, 1.0, rate=rate, caps=caps)
    if args.radius:
        fit = growth_rate(M, w_arg, method="enumeration",
                          radius=args.radius, caps=caps)
        out["enumeration_rate"] = _rate_json(fit)
        out["routes_consistent"] = (
            fit.bracket[0] - fit.uncertainty <= rate.value
            <= fit.bracket[1] + fit.uncertainty)
    return out


def cmd_exponents(M, thickness, weights, args):
    thickness = _require_thickness(thickness)
    ce = critical_exponents(M, thickness, caps=args.caps)
    return {
        "thickness": list(thickness.per_generator(M)),
        "thin": ce.thin,
        "p_hom": ce.p_hom,
        "p_cohom": ce.p_cohom,
        "p_hom_bracket": list(ce.p_hom_bracket),
        "p_cohom_bracket": list(ce.p_cohom_bracket),
        "nerve_is_pm": ce.nerve_is_pm,
    }


def cmd_confdim(M, thickness, weights, args):
    thickness = _require_thickness(thickness)
    b = confdim_bounds(M, thickness, lam=args.lam,
                       apartment_confdim=args.apartment_confdim,
                       caps=args.caps)
    out = {
        "lower": b.lower,
        "upper": b.upper,
        "lower_provenance": b.lower_provenance,
        "upper_provenance": b.upper_provenance,
        "lambda": b.lam,
        "lambda_provenance": b.lambda_provenance,
        "hausdim": b.hausdim,
        "fuchsian": b.fuchsian,
    }
    if b.fuchsian:
        fr = fuchsian_report(M, thickness, p_grid=args.p_grid,
                             e_q=b.e_q, caps=args.caps)
        out["vanishing"] = [{"p": p, "degree_1": d1, "degree_2": d2}
                            for p, d1, d2 in fr.table]
    return out


def cmd_verify_oracle(M, thickness, weights, args):
    thickness = _require_thickness(thickness)
    radius = args.radius or 4
    return oracle_battery(M, thickness, radius, p_values=tuple(args.p_grid),
                          chains=args.chains, seed=args.seed, caps=args.caps)


def cmd_report(M, thickness, weights, args):
    return build_report(M, thickness=thickness, weights=weights,
                        depth=args.depth, radius=args.radius, lam=args.lam,
                        apartment_confdim=args.apartment_confdim,
                        p_grid=args.p_grid, caps=args.caps,
                        cache_dir=args.cache_dir, timings=args.timings)


# ---------------------------------------------------------------------------
# text renderings for the focused subcommands

def _text_lines(result, indent=""):
    lines = []
    for k in sorted(result):
        v = result[k]
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.extend(_text_lines(v, indent + "  "))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{indent}{k}:")
            for item in v:
                lines.extend(_text_lines(item, indent + "  "))
                lines.append(f"{indent}  -")
            lines.pop()
        else:
            lines.append(f"{indent}{k}: {_fmt(v)}")
    return lines


def render(command, result, fmt):
    if fmt == "machine":
        return report_to_json({"command": command, "result": result})
    if command == "report":
        return report_to_text(result).rstrip("\n")
    return "\n".join(_text_lines(result))


# ---------------------------------------------------------------------------

COMMANDS = {
    "classify": cmd_classify,
    "nerve": cmd_nerve,
    "growth": cmd_growth,
    "exponents": cmd_exponents,
    "confdim": cmd_confdim,
    "verify-oracle": cmd_verify_oracle,
    "report": cmd_report,
}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="coxinv",
        description="Exact invariants of Coxeter systems and their "
                    "right-angled buildings.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="system JSON file")
        p.add_argument("--depth", type=int, default=8,
                       help="enumeration depth for counting data")
        p.add_argument("--radius", type=int, default=None,
                       help="ball radius (buildings, enumeration fits)")
        p.add_argument("--p-grid", type=_parse_p_grid,
                       default=[Fraction(3, 2), Fraction(2), Fraction(3)],
                       help="comma-separated exponents, e.g. 3/2,2,3")
        p.add_argument("--lambda", dest="lam", default=None,
                       help='visual parameter > 1, or "bourdon"')
        p.add_argument("--apartment-confdim", type=float, default=None,
                       help="known conformal dimension of the apartment "
                            "boundary (lower-bound floor)")
        p.add_argument("--format", choices=("text", "machine"),
                       default="text")
        p.add_argument("--cache-dir", default=os.environ.get("CACHE_DIR"),
                       help="enumeration cache directory "
                            "(default: $CACHE_DIR)")
        p.add_argument("--max-elements", type=int, default=None,
                       help="hard cap on enumerated elements")
        p.add_argument("--chains", type=int, default=100,
                       help="random chains for verify-oracle")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for verify-oracle chains")
        p.add_argument("--timings", action="store_true",
                       help="include wall-clock timings (report only; "
                            "breaks bit-determinism)")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    caps = Caps.from_env()
    if args.max_elements is not None:
        caps = Caps(max_elements=args.max_elements,
                    max_simplices=caps.max_simplices)
    args.caps = caps
    if args.lam is not None and args.lam != "bourdon":
        try:
            args.lam = float(args.lam)
        except ValueError:
            print(f"error: bad lambda {args.lam!r}", file=sys.stderr)
            return EXIT_INPUT
    try:
        M, thickness, weights = load_system(args.input)
        result = COMMANDS[args.command](M, thickness, weights, args)
    except ValidationMismatch as exc:
        print(f"error: identity violated: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except ResourceExceeded as exc:
        print(f"error: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CoxinvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(render(args.command, result, args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
