"""Weighted growth series and exponents.

The weighted series W(t) = sum_w t_w (one variable per conjugacy class of
generators) is rational: for infinite W,

    sum over finite-parabolic subsets T of (-1)^|T| / W_T(t)  =  1 / W(1/t),

so W is recovered by exact fraction arithmetic and a coefficient reversal.
Every constructed series is validated coefficient-by-coefficient against
breadth-first counts before use; a mismatch is a fatal internal error.

The exponential growth rate e_t(W) = limsup (1/n) log #{w : t_w <= e^n} is
computed two independent ways: the smallest positive singularity of the
series (exact rational Sturm isolation, or a certified interval scan along
the substitution curve t -> t^-x for mixed weights), and a regression fit
on the enumerated counting function.
"""

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import mpmath
import numpy as np

from .coxeter import finite_group_order, classify_parabolic, spherical_subsets
from .elements import Caps, ball_enumerate, racg_layer_counts
from .errors import (DegenerateWeights, ResourceExceeded, SchemaError,
                     ValidationMismatch)

DEFAULT_VALIDATION_DEPTH = 10
ROOT_TOL = Fraction(1, 10 ** 9)


# ---------------------------------------------------------------------------
# multivariate polynomials over Q (dict exponent tuple -> Fraction)

class PolyQ:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[tuple(e)] = c

    @staticmethod
    def const(nvars, c):
        return PolyQ(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def monomial(nvars, expo, c=1):
        return PolyQ(nvars, {tuple(expo): Fraction(c)})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, Fraction(0)) + c
            if v:
                out[e] = v
            elif e in out:
                del out[e]
        return PolyQ(self.nvars, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return PolyQ(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, Fraction(0)) + c1 * c2
                if v:
                    out[e] = v
                elif e in out:
                    del out[e]
        return PolyQ(self.nvars, out)

    def max_degrees(self):
        out = [0] * self.nvars
        for e in self.terms:
            for i, v in enumerate(e):
                out[i] = max(out[i], v)
        return out

    def min_degrees(self):
        out = None
        for e in self.terms:
            out = list(e) if out is None else [min(a, b) for a, b in zip(out, e)]
        return out or [0] * self.nvars

    def reversed_by(self, E):
        return PolyQ(self.nvars, {tuple(E[i] - e[i] for i in range(self.nvars)): c
                                  for e, c in self.terms.items()})

    def shift_down(self, g):
        return PolyQ(self.nvars, {tuple(e[i] - g[i] for i in range(self.nvars)): c
                                  for e, c in self.terms.items()})

    def eval_frac(self, point):
        tot = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                v *= Fraction(x) ** k
            tot += v
        return tot

    def collapse(self):
        """Substitute every variable by a single one."""
        out = {}
        for e, c in self.terms.items():
            k = (sum(e),)
            v = out.get(k, Fraction(0)) + c
            if v:
                out[k] = v
            elif k in out:
                del out[k]
        return PolyQ(1, out)

    def constant(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def __repr__(self):
        return f"PolyQ({self.nvars}, {len(self.terms)} terms)"


# ---------------------------------------------------------------------------
# weights

class WeightVector:
    """Per-conjugacy-class weights >= 1 (exact rationals)."""

    def __init__(self, M, per_class):
        classes = M.conjugacy_classes()
        if len(per_class) != len(classes):
            raise SchemaError(
                f"expected {len(classes)} class weights, got {len(per_class)}")
        vals = tuple(Fraction(v) for v in per_class)
        if any(v < 1 for v in vals):
            raise SchemaError("weights must be >= 1")
        self.M = M
        self.values = vals

    @staticmethod
    def from_generator_map(M, mapping):
        """Build from a generator-name -> weight map, enforcing class constancy."""
        classes = M.conjugacy_classes()
        per_class = []
        for cls in classes:
            vals = {Fraction(mapping[M.generators[i]]) for i in cls}
            if len(vals) != 1:
                names = [M.generators[i] for i in cls]
                raise SchemaError(
                    f"weight must be constant on the conjugacy class {names}")
            per_class.append(vals.pop())
        return WeightVector(M, per_class)

    @staticmethod
    def constant(M, value):
        return WeightVector(M, [Fraction(value)] * len(M.conjugacy_classes()))

    def weight_of(self, class_vec):
        out = Fraction(1)
        for v, k in zip(self.values, class_vec):
            out *= v ** k
        return out

    def log_values(self):
        return [math.log(v) for v in self.values]

    def is_constant(self):
        return len(set(self.values)) == 1

    def all_one(self):
        return all(v == 1 for v in self.values)


# ---------------------------------------------------------------------------
# enumeration-backed counting (BFS, extended by the descent recurrence)

def layer_class_counts(M, depth, caps=None, validate_depth=DEFAULT_VALIDATION_DEPTH):
    """Per-length dict {class_vector: count} for lengths 0..depth.

    Uses true BFS when the ball fits the caps; for right-angled systems a
    depth beyond BFS reach falls back to the descent-set recurrence, which is
    first cross-validated against BFS on a shared prefix.
    Returns (counts, source) with source in {"bfs", "recurrence"}.
    """
    caps = caps or Caps.from_env()
    try:
        ball = ball_enumerate(M, depth, caps=caps)
        return ball.class_counts(), "bfs"
    except ResourceExceeded:
        if not M.is_right_angled():
            raise
    check_depth = validate_depth
    ball = ball_enumerate(M, check_depth, caps=caps)
    rec = racg_layer_counts(M, depth, track_classes=True)
    bfs_counts = ball.class_counts()
    if rec[:len(bfs_counts)] != bfs_counts:
        raise ValidationMismatch(
            "descent recurrence disagrees with BFS class counts")
    return rec, "recurrence"


@dataclass
class GrowthTable:
    """Counting function of a weight vector against enumerated lengths.

    breakpoints are the distinct values v = log t_w realized within the
    complete range; Q(v) counts elements with log t_w <= v.  Q is complete
    for v <= radius * min_i log t_i, and entries beyond that bound are
    never reported.
    """
    M: object
    weights: WeightVector
    radius: int
    counts: list            # per length: {class_vec: count}
    source: str
    degenerate: bool
    breakpoints: list = dc_field(default_factory=list)   # sorted v values
    q_values: list = dc_field(default_factory=list)      # Q at breakpoints

    def ball_sizes(self):
        out, tot = [], 0
        for d in self.counts:
            tot += sum(d.values())
            out.append(tot)
        return out


def growth_table(M, weights, radius, caps=None):
    counts, source = layer_class_counts(M, radius, caps=caps)
    logs = weights.log_values()
    degenerate = weights.all_one()
    table = GrowthTable(M, weights, radius, counts, source, degenerate)
    if degenerate:
        return table
    if any(l == 0 for l in logs):
        # weight-1 classes contribute unbounded counts at fixed v unless the
        # classes span a finite parabolic; callers decide, we only mark it
        table.degenerate = True
        return table
    # group by the exact weight value; elements above t_min^radius may have
    # unenumerated peers of larger length, so the count stops there
    wmax = min(weights.values) ** radius
    acc = {}
    for d in counts:
        for cv, c in d.items():
            w = weights.weight_of(cv)
            if w <= wmax:
                acc[w] = acc.get(w, 0) + c
    ws = sorted(acc)
    table.breakpoints = [math.log(w) for w in ws]
    tot = 0
    qv = []
    for w in ws:
        tot += acc[w]
        qv.append(tot)
    table.q_values = qv
    return table


# ---------------------------------------------------------------------------
# rational growth series

@dataclass
class RationalGrowthSeries:
    M: object
    numerator: PolyQ
    denominator: PolyQ          # constant term 1
    per_class: bool
    validated_depth: int

    @property
    def nvars(self):
        return self.numerator.nvars

    def expand(self, depth):
        """Series coefficients by total degree: list of {expo: int}."""
        num, den = self.numerator, self.denominator
        nv = self.nvars
        d0 = den.constant()
        assert d0 == 1
        den_rest = [(e, c) for e, c in den.terms.items() if any(e)]
        coeffs = [dict() for _ in range(depth + 1)]
        by_degree = [dict() for _ in range(depth + 1)]
        for e, c in num.terms.items():
            td = sum(e)
            if td <= depth:
                by_degree[td][e] = c

        known = {}
        for total in range(depth + 1):
            cur = dict(by_degree[total])
            for e, c in den_rest:
                td = sum(e)
                if td > total:
                    continue
                for e2, c2 in coeffs[total - td].items():
                    tgt = tuple(a + b for a, b in zip(e, e2))
                    if sum(tgt) != total:
                        continue
                    v = cur.get(tgt, Fraction(0)) - c * c2
                    if v:
                        cur[tgt] = v
                    elif tgt in cur:
                        del cur[tgt]
            coeffs[total] = cur
        return [{e: c for e, c in layer.items()} for layer in coeffs]

    def expand_univariate(self, depth):
        num = self.numerator.collapse()
        den = self.denominator.collapse()
        a = [Fraction(0)] * (depth + 1)
        for (k,), c in num.terms.items():
            if k <= depth:
                a[k] += c
        d = [Fraction(0)] * (depth + 1)
        for (k,), c in den.terms.items():
            if k <= depth:
                d[k] += c
        assert d[0] == 1
        out = [Fraction(0)] * (depth + 1)
        for k in range(depth + 1):
            v = a[k]
            for j in range(1, k + 1):
                v -= d[j] * out[k - j]
            out[k] = v
        return out


def _parabolic_poly(M, T, nclasses, class_of, caps):
    """Exact weighted enumeration polynomial of the finite parabolic W_T,
    in the ambient class variables."""
    if not T:
        return PolyQ.const(nclasses, 1)
    order = finite_group_order(M, T)
    if order > (caps.max_elements if caps else Caps.from_env().max_elements):
        raise ResourceExceeded(f"parabolic on {sorted(T)} has order {order}")
    sub = M.submatrix(T)
    idx = sorted(T)
    ball = ball_enumerate(sub, 4 * order, caps=caps)
    assert ball.group_exhausted
    sub_class_of = sub.class_of()
    # ambient class of each sub-generator
    amb = {}
    for pos, i in enumerate(idx):
        amb[pos] = class_of[i]
    out = {}
    for k, layer in enumerate(ball.layers):
        for key, word, cv, mask in layer:
            e = [0] * nclasses
            for s in word:
                e[amb[s]] += 1
            e = tuple(e)
            out[e] = out.get(e, Fraction(0)) + 1
    return PolyQ(nclasses, out)


def rational_growth_series(M, per_class=True, caps=None,
                           validate_depth=None):
    """Weighted growth series as an exact rational function, validated
    against BFS counts through validate_depth (mandatory)."""
    caps = caps or Caps.from_env()
    classes = M.conjugacy_classes()
    nclasses = len(classes) if per_class else 1
    class_of = M.class_of() if per_class else [0] * M.rank
    cls = classify_parabolic(M)
    if validate_depth is None:
        validate_depth = DEFAULT_VALIDATION_DEPTH

    if cls.is_finite():
        poly = _parabolic_poly(M, frozenset(range(M.rank)), nclasses, class_of, caps)
        series = RationalGrowthSeries(M, poly, PolyQ.const(nclasses, 1),
                                      per_class, validate_depth)
        _validate_series(series, caps, validate_depth)
        return series

    sphericals = spherical_subsets(M)
    # accumulate sum over T of (-1)^|T| / W_T as an exact fraction, reusing
    # syntactically identical parabolic polynomials
    polys = {}
    for T in sphericals:
        key = tuple(sorted(T))
        polys[key] = _parabolic_poly(M, T, nclasses, class_of, caps)
    num = PolyQ.const(nclasses, 0)
    den = PolyQ.const(nclasses, 1)
    seen_dens = {}
    for T in sphericals:
        poly = polys[tuple(sorted(T))]
        sign = -1 if len(T) % 2 else 1
        pk = tuple(sorted(poly.terms.items()))
        if pk in seen_dens:
            seen_dens[pk] = (seen_dens[pk][0] + sign, poly)
        else:
            seen_dens[pk] = (sign, poly)
    for coeff, poly in seen_dens.values():
        # num/den += coeff/poly
        num = num * poly + den.scale(coeff)
        den = den * poly
    # W(t) = rev(den) / rev(num)
    E = [max(a, b) for a, b in zip(num.max_degrees(), den.max_degrees())]
    W_num = den.reversed_by(E)
    W_den = num.reversed_by(E)
    g = [min(a, b) for a, b in zip(W_num.min_degrees(), W_den.min_degrees())]
    if any(g):
        W_num = W_num.shift_down(g)
        W_den = W_den.shift_down(g)
    c0 = W_den.constant()
    if c0 == 0:
        raise ValidationMismatch("growth series denominator lost its constant term")
    W_num = W_num.scale(Fraction(1) / c0)
    W_den = W_den.scale(Fraction(1) / c0)
    series = RationalGrowthSeries(M, W_num, W_den, per_class, validate_depth)
    _validate_series(series, caps, validate_depth)
    return series


def _validate_series(series, caps, depth):
    """Mandatory: Taylor coefficients must equal BFS class counts exactly."""
    M = series.M
    counts, _src = layer_class_counts(M, depth, caps=caps)
    if series.per_class:
        expanded = series.expand(depth)
        for k in range(min(depth + 1, len(counts))):
            want = {tuple(cv): Fraction(c) for cv, c in counts[k].items()}
            got = expanded[k]
            if want != got:
                raise ValidationMismatch(
                    f"series expansion disagrees with BFS at length {k}")
    else:
        expanded = series.expand_univariate(depth)
        sizes = [sum(d.values()) for d in counts]
        for k in range(min(depth + 1, len(sizes))):
            if expanded[k] != sizes[k]:
                raise ValidationMismatch(
                    f"series expansion disagrees with BFS at length {k}")
    series.validated_depth = depth


# ---------------------------------------------------------------------------
# exact univariate root isolation (Sturm)

def _p1_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _p1_eval(p, x):
    v = Fraction(0)
    for c in reversed(p):
        v = v * x + c
    return v


def _p1_deriv(p):
    return [c * k for k, c in enumerate(p)][1:]


def _p1_rem(a, b):
    a = list(a)
    while len(a) >= len(b) and _p1_trim(a):
        if not a:
            break
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a.pop()
        _p1_trim(a)
    return a


def _p1_gcd(a, b):
    a, b = list(a), list(b)
    _p1_trim(a), _p1_trim(b)
    while b:
        a, b = b, _p1_rem(a, b)
        _p1_trim(b)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _sturm_chain(p):
    chain = [list(p), _p1_deriv(p)]
    _p1_trim(chain[0]), _p1_trim(chain[1])
    while chain[-1]:
        r = _p1_rem(chain[-2], chain[-1])
        _p1_trim(r)
        if not r:
            break
        chain.append([-c for c in r])
    return [c for c in chain if c]


def _variations(chain, x):
    signs = []
    for p in chain:
        v = _p1_eval(p, x)
        if v:
            signs.append(1 if v > 0 else -1)
    out = 0
    for a, b in zip(signs, signs[1:]):
        if a != b:
            out += 1
    return out


def smallest_positive_root(poly, hi, tol=ROOT_TOL):
    """Smallest root of a univariate PolyQ (or Fraction list) in (0, hi].

    Returns (lo, hi) as Fractions bracketing the root to width <= tol, or
    the exact root as (r, r), or None.  Exact rational arithmetic only.
    """
    if isinstance(poly, PolyQ):
        deg = poly.max_degrees()[0]
        p = [Fraction(0)] * (deg + 1)
        for (k,), c in poly.terms.items():
            p[k] = c
    else:
        p = [Fraction(c) for c in poly]
    _p1_trim(p)
    if len(p) <= 1:
        return None
    g = _p1_gcd(p, _p1_deriv(p))
    if len(g) > 1:
        # squarefree part, exact division
        q = []
        a = list(p)
        while len(a) >= len(g):
            c = a[-1] / g[-1]
            q.append(c)
            shift = len(a) - len(g)
            for i, gc in enumerate(g):
                a[shift + i] -= c * gc
            a.pop()
            _p1_trim(a)
        p = list(reversed(q))
    chain = _sturm_chain(p)
    hi = Fraction(hi)

    def count_upto(b):
        # roots in (0, b]; shifts off roots at the endpoints by a safe margin
        eps = Fraction(1, 10 ** 12)
        b0 = b
        while _p1_eval(p, b0) == 0:
            b0 += eps
        lo0 = Fraction(0)
        while _p1_eval(p, lo0) == 0:
            lo0 += eps  # 0 itself never counts: growth denominators have den(0)=1
        return _variations(chain, lo0) - _variations(chain, b0)

    if count_upto(hi) == 0:
        return None
    lo, b = Fraction(0), hi
    while b - lo > tol:
        mid = (lo + b) / 2
        if _p1_eval(p, mid) == 0:
            if count_upto(mid) == 1 or count_upto(mid - tol / 2) == 0:
                return (mid, mid)
            b = mid
            continue
        if count_upto(mid) >= 1:
            b = mid
        else:
            lo = mid
    if _p1_eval(p, b) == 0:
        return (b, b)
    return (lo, b)


# ---------------------------------------------------------------------------
# growth-rate estimation

@dataclass
class GrowthRateEstimate:
    value: float
    method: str                 # "SeriesSingularity" | "EnumerationFit"
    uncertainty: float
    bracket: tuple              # (lo, hi) floats
    exact: bool = False
    details: dict = dc_field(default_factory=dict)

    def contains(self, x):
        return self.bracket[0] - 1e-15 <= x <= self.bracket[1] + 1e-15


def _series_rate_constant_weight(series, logq):
    """e_t from the smallest positive denominator root when every class has
    the same weight: the curve substitution is univariate."""
    den = series.denominator.collapse()
    num = series.numerator.collapse()
    g = _p1_gcd(
        _poly1_list(den), _poly1_list(num))
    denl = _poly1_list(den)
    if len(g) > 1:
        denl = _p1_exact_div(denl, g)
    bracket = smallest_positive_root(denl, Fraction(1))
    if bracket is None:
        return GrowthRateEstimate(0.0, "SeriesSingularity", 0.0, (0.0, 0.0),
                                  exact=True, details={"note": "no singularity in (0,1]"})
    lo, hi = bracket
    if lo == hi:
        r = lo
        if r == 1:
            return GrowthRateEstimate(0.0, "SeriesSingularity", 0.0, (0.0, 0.0),
                                      exact=True, details={"radius": str(r)})
        e_lo = e_hi = -math.log(float(r))
    else:
        e_lo, e_hi = -math.log(float(hi)), -math.log(float(lo))
    e_val = (e_lo + e_hi) / 2
    if logq is not None:
        e_lo, e_hi, e_val = e_lo / logq, e_hi / logq, e_val / logq
    unc = (e_hi - e_lo) / 2
    return GrowthRateEstimate(e_val, "SeriesSingularity", unc, (e_lo, e_hi),
                              exact=(lo == hi),
                              details={"radius_bracket": (str(lo), str(hi))})


def _poly1_list(p):
    deg = p.max_degrees()[0] if p.terms else 0
    out = [Fraction(0)] * (deg + 1)
    for (k,), c in p.terms.items():
        out[k] = c
    return out


def _p1_exact_div(a, b):
    a = list(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = a[k + len(b) - 1] / b[-1]
        q[k] = c
        if c:
            for j, y in enumerate(b):
                a[k + j] -= c * y
    assert all(v == 0 for v in a)
    return _p1_trim(q)


def _iv_eval_curve(poly, logs, x, prec):
    """Certified interval value of poly(t_1^-x, ..., t_k^-x)."""
    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = prec
        xs = iv.mpf(x.numerator) / iv.mpf(x.denominator) if isinstance(x, Fraction) else iv.mpf(x)
        tot = iv.mpf(0)
        for e, c in poly.terms.items():
            expo = iv.mpf(0)
            for l, k in zip(logs, e):
                if k:
                    expo += k * l
            term = iv.exp(-xs * expo)
            tot += (iv.mpf(c.numerator) / iv.mpf(c.denominator)) * term
        return tot
    finally:
        iv.prec = old


def _iv_sign(poly, logs, x, max_prec=2048):
    prec = 64
    while prec <= max_prec:
        v = _iv_eval_curve(poly, logs, x, prec)
        if v > 0:
            return 1
        if v < 0:
            return -1
        prec *= 2
    return 0


def _series_rate_curve(series, weights):
    """Mixed weights: scan the substitution curve for the first denominator
    sign change, certify with interval arithmetic, bisect to 1e-9."""
    iv = mpmath.iv
    logs = []
    old = iv.prec
    try:
        iv.prec = 256
        for v in weights.values:
            logs.append(iv.log(iv.mpf(v.numerator) / iv.mpf(v.denominator)))
    finally:
        iv.prec = old
    den, num = series.denominator, series.numerator
    # exact rational check at x = 0
    if den.eval_frac([Fraction(1)] * den.nvars) == 0:
        if num.eval_frac([Fraction(1)] * num.nvars) != 0:
            return GrowthRateEstimate(0.0, "SeriesSingularity", 0.0, (0.0, 0.0),
                                      exact=True, details={"root_at": 0.0})
    e_univ = _series_rate_constant_weight(series, None)
    logmin = math.log(float(min(weights.values)))
    xmax = Fraction(int((e_univ.bracket[1] / logmin + 1) * 100), 100) if logmin > 0 else Fraction(2)
    step = Fraction(1, 100)
    x = Fraction(0)
    s_prev = _iv_sign(den, logs, x + step / 10)  # just off zero
    found = None
    while x < xmax:
        x2 = x + step
        s2 = _iv_sign(den, logs, x2)
        if s2 == 0 or s2 != s_prev:
            # root in (x, x2]: check it is not removable
            found = (x, x2)
            break
        x = x2
        s_prev = s2
    if found is None:
        raise ValidationMismatch(
            "no singularity found on the substitution curve within the "
            "comparison bound")
    lo, hi = found
    while hi - lo > ROOT_TOL:
        mid = (lo + hi) / 2
        sm = _iv_sign(den, logs, mid)
        if sm == 0 or sm != s_prev:
            hi = mid
        else:
            lo = mid
    num_sign = _iv_sign(num, logs, (lo + hi) / 2, max_prec=512)
    details = {}
    if num_sign == 0:
        details["note"] = "numerator small at root; possible removable point"
    val = float((lo + hi) / 2)
    unc = float(hi - lo) / 2
    return GrowthRateEstimate(val, "SeriesSingularity", unc,
                              (float(lo), float(hi)), details=details)


def _fit_window(points, lo_frac):
    pts = points[int(len(points) * lo_frac):]
    nregs = 4 if len(pts) >= 8 else (3 if len(pts) >= 5 else 2)
    rows, ys = [], []
    for v, q in pts:
        row = [1.0, v]
        if nregs >= 3:
            row.append(math.log(v))
        if nregs >= 4:
            row.append(1.0 / v)
        rows.append(row)
        ys.append(math.log(q))
    X = np.array(rows)
    y = np.array(ys)
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    dof = max(1, len(y) - X.shape[1])
    s2 = float(resid @ resid) / dof
    try:
        cov = s2 * np.linalg.inv(X.T @ X)
        se = math.sqrt(max(cov[1][1], 0.0))
    except np.linalg.LinAlgError:
        se = float("nan")
    return float(beta[1]), se


def enumeration_fit(points):
    """Slope of log Q against v with slowly-varying correction terms.

    points: (v, Q) with v > 0, Q >= 1, complete counts.  The uncertainty sums
    the statistical error and the drift between two fit windows, which is the
    honest dominant term on deterministic data.
    """
    pts = [(v, q) for v, q in points if v > 0 and q >= 1]
    if len(pts) < 3:
        raise DegenerateWeights("too few complete counting points to fit")
    b1, se1 = _fit_window(pts, 0.5)
    b2, _ = _fit_window(pts, 0.25)
    unc = (0.0 if math.isnan(se1) else se1) + abs(b1 - b2)
    return GrowthRateEstimate(b1, "EnumerationFit", unc, (b1 - unc, b1 + unc),
                              details={"points": len(pts)})


def growth_rate(M, weights=None, method="series", radius=None, caps=None,
                series=None):
    """Weighted exponential growth rate e_t(W); weights None means the
    unweighted rate e(W).

    method "series" locates the smallest positive singularity of the exact
    rational series; "enumeration" regresses enumerated counting data.
    """
    caps = caps or Caps.from_env()
    cls = classify_parabolic(M)
    if weights is not None and weights.all_one():
        raise DegenerateWeights("all weights are 1; the counting function is trivial")
    if weights is not None and any(v == 1 for v in weights.values):
        ones = [ci for ci, v in enumerate(weights.values) if v == 1]
        union = [i for ci in ones for i in M.conjugacy_classes()[ci]]
        if not classify_parabolic(M, union).is_finite():
            raise DegenerateWeights(
                "weight 1 on classes spanning an infinite parabolic")

    if method == "series":
        if cls.is_finite():
            return GrowthRateEstimate(0.0, "SeriesSingularity", 0.0, (0.0, 0.0),
                                      exact=True, details={"finite": True})
        per_class = weights is not None and not weights.is_constant()
        if series is None:
            series = rational_growth_series(M, per_class=per_class, caps=caps)
        if weights is None:
            return _series_rate_constant_weight(series, None)
        if weights.is_constant():
            logq = math.log(float(weights.values[0]))
            return _series_rate_constant_weight(series, logq)
        return _series_rate_curve(series, weights)

    if method == "enumeration":
        if radius is None:
            radius = 20 if M.is_right_angled() else 12
        if weights is None:
            counts, _src = layer_class_counts(M, radius, caps=caps)
            sizes = []
            tot = 0
            for d in counts:
                tot += sum(d.values())
                sizes.append(tot)
            pts = [(float(k), sizes[k]) for k in range(1, len(sizes))]
            return enumeration_fit(pts)
        table = growth_table(M, weights, radius, caps=caps)
        if table.degenerate:
            raise DegenerateWeights("degenerate weights: no usable counting function")
        pts = list(zip(table.breakpoints, table.q_values))
        return enumeration_fit(pts)
    raise SchemaError(f"unknown growth-rate method {method!r}")


def classify_convergence(M, weights, x, rate=None, caps=None):
    """Does W(t^-x) converge?  Returns 'converges', 'diverges', or
    'boundary' when x falls inside the rate bracket."""
    x = float(x)
    if rate is None:
        rate = growth_rate(M, weights, method="series", caps=caps)
    if x > rate.bracket[1] + 1e-15:
        return "converges"
    if x < rate.bracket[0] - 1e-15:
        return "diverges"
    return "boundary"


def rate_comparison_bounds(M, weights, caps=None, e_univ=None):
    """e(W)/log t_max <= e_t <= e(W)/log t_min for weights > 1."""
    if any(v == 1 for v in weights.values):
        raise DegenerateWeights("comparison bounds require weights > 1")
    if e_univ is None:
        e_univ = growth_rate(M, None, method="series", caps=caps)
    ltmax = math.log(float(max(weights.values)))
    ltmin = math.log(float(min(weights.values)))
    return (e_univ.bracket[0] / ltmax, e_univ.bracket[1] / ltmin)
