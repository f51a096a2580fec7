"""Right-angled buildings as graph products of cyclic groups.

For a right-angled system (W, S) and a thickness vector q, the graph
product of the groups Z/(q_s + 1) over the commutation graph acts on a
building whose chambers are the group elements; syllable normal forms give
canonical chamber names, and erasing exponents is the retraction rho onto
the base apartment (a copy of W, realized here as the q = 1 building).

Simplices of the geometric realization are chains of nested spherical
residues, identified by (gate chamber, increasing chain of spherical
subsets).  Everything stays exact: coefficients are Fractions, and l^p
norm comparisons for integer and half-integer p reduce to rational vectors
over an explicit basis of square roots.
"""

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .coxeter import spherical_subsets
from .elements import Caps, commutation_table
from .errors import (MarginViolation, NotRightAngled, ResourceExceeded,
                     SchemaError, ThicknessClassError, ValidationMismatch)


@dataclass(frozen=True)
class ThicknessVector:
    """Per-conjugacy-class chamber multiplicities q >= 1 (q + 1 chambers
    per panel).  Thickness must be constant on conjugacy classes."""
    values: tuple

    @staticmethod
    def from_generator_map(M, mapping):
        per_class = []
        for cls in M.conjugacy_classes():
            vals = {int(mapping[M.generators[i]]) for i in cls}
            if len(vals) != 1:
                names = [M.generators[i] for i in cls]
                raise ThicknessClassError(
                    f"thickness must be constant on the conjugacy class {names}")
            per_class.append(vals.pop())
        return ThicknessVector.validated(per_class)

    @staticmethod
    def constant(M, q):
        return ThicknessVector.validated([q] * len(M.conjugacy_classes()))

    @staticmethod
    def validated(values):
        vals = tuple(int(v) for v in values)
        if any(v < 1 for v in vals):
            raise SchemaError("thickness must be >= 1")
        return ThicknessVector(vals)

    def is_thin(self):
        return all(v == 1 for v in self.values)

    def q_of(self, class_vector):
        out = 1
        for q, k in zip(self.values, class_vector):
            out *= q ** k
        return out

    def per_generator(self, M):
        cls_of = M.class_of()
        return [self.values[cls_of[s]] for s in range(M.rank)]


# ---------------------------------------------------------------------------
# syllable normal forms

def append_syllable(word, s, e, commute, qmod):
    """Multiply a canonical syllable word by the generator power (s, e).

    Returns (new_word, delta) with delta in {-1, 0, +1}: a cancellation, an
    exponent merge, or a fresh syllable.  The canonical form is the
    lexicographically least linearization of the commutation trace, exactly
    as for Coxeter words; merges keep the trace shape, deletions rebuild.
    """
    e %= qmod[s]
    if e == 0:
        return word, 0
    row = commute[s]
    for i in range(len(word) - 1, -1, -1):
        t = word[i][0]
        if t == s:
            ne = (word[i][1] + e) % qmod[s]
            if ne == 0:
                return rebuild_word(word[:i] + word[i + 1:], commute, qmod), -1
            return word[:i] + ((s, ne),) + word[i + 1:], 0
        if not row[t]:
            break
    p0 = 0
    for i in range(len(word) - 1, -1, -1):
        if not row[word[i][0]]:
            p0 = i + 1
            break
    p = len(word)
    for i in range(p0, len(word)):
        if word[i][0] > s:
            p = i
            break
    return word[:p] + ((s, e),) + word[p:], 1


def rebuild_word(syllables, commute, qmod):
    """Recanonicalize after a deletion: removing a separator can unlock
    merges and reorderings, so fold everything through append_syllable."""
    out = ()
    for s, e in syllables:
        out, _ = append_syllable(out, s, e, commute, qmod)
    return out


def erase_exponents(word):
    return tuple((s, 1) for s, _e in word)


def word_gens(word):
    return tuple(s for s, _e in word)


def gate_word(word, T, commute, qmod):
    """Minimal-length representative of the coset word * <T>: repeatedly
    drop syllables with generator in T that shuffle to the right end."""
    T = set(T)
    cur = word
    changed = True
    while changed:
        changed = False
        for i in range(len(cur) - 1, -1, -1):
            s = cur[i][0]
            movable = all(commute[s][cur[j][0]] for j in range(i + 1, len(cur)))
            if s in T and movable:
                cur = rebuild_word(cur[:i] + cur[i + 1:], commute, qmod)
                changed = True
                break
    return cur


# ---------------------------------------------------------------------------
# chamber enumeration

@dataclass
class BuildingBall:
    """All chambers of gallery length <= radius, with the fibration over
    the Weyl ball.  A q = 1 instance is the base apartment itself."""
    M: object
    thickness: ThicknessVector
    radius: int
    chambers: list              # canonical syllable words, sorted by (length, word)
    fibers: dict                # W-word (gens tuple) -> list of chamber words
    commute: tuple
    qmod: tuple                 # per generator: q_s + 1
    sphericals: tuple           # frozensets including the empty set

    def sphere_sizes(self):
        out = [0] * (self.radius + 1)
        for c in self.chambers:
            out[len(c)] += 1
        return out

    def q_of_word(self, w_word):
        per = self.thickness.per_generator(self.M)
        out = 1
        for s in w_word:
            out *= per[s]
        return out

    def contains_w(self, w_word):
        return w_word in self.fibers


def building_ball(M, thickness, radius, caps=None):
    """Enumerate the ball and verify the two panel axioms on it: every
    panel meeting the interior has exactly q_s + 1 chambers, and each has a
    unique gate (its shortest chamber) with all others one step longer."""
    if not M.is_right_angled():
        raise NotRightAngled("building model requires a right-angled system")
    caps = caps or Caps.from_env()
    if not isinstance(thickness, ThicknessVector):
        thickness = ThicknessVector.validated(thickness)
    if len(thickness.values) != len(M.conjugacy_classes()):
        raise SchemaError(
            f"expected {len(M.conjugacy_classes())} thickness classes")
    commute = commutation_table(M)
    per = thickness.per_generator(M)
    qmod = tuple(q + 1 for q in per)
    n = M.rank

    seen = {(): 0}
    frontier = [()]
    layers = [[()]]
    for r in range(radius):
        nxt = []
        for w in frontier:
            for s in range(n):
                for e in range(1, qmod[s]):
                    w2, delta = append_syllable(w, s, e, commute, qmod)
                    if delta == 1 and w2 not in seen:
                        seen[w2] = r + 1
                        nxt.append(w2)
                        if len(seen) > caps.max_elements:
                            raise ResourceExceeded(
                                f"building ball exceeds {caps.max_elements} chambers")
        nxt.sort()
        layers.append(nxt)
        frontier = nxt

    chambers = [w for layer in layers for w in layer]
    fibers = {}
    for w in chambers:
        fibers.setdefault(word_gens(w), []).append(w)
    ball = BuildingBall(M, thickness, radius, chambers, fibers, commute, qmod,
                        tuple(spherical_subsets(M)))
    _verify_building_axioms(ball)
    return ball


def _verify_building_axioms(ball):
    # fiber over each Weyl word has exactly q_w chambers
    for w_word, fib in ball.fibers.items():
        if len(fib) != ball.q_of_word(w_word):
            raise ValidationMismatch(
                f"fiber over {w_word} has {len(fib)} chambers, "
                f"expected {ball.q_of_word(w_word)}")
    # panels fully inside the ball: q_s + 1 chambers, unique gate
    chamber_set = set(ball.chambers)
    for g in ball.chambers:
        if len(g) + 1 > ball.radius:
            continue
        for s in range(ball.M.rank):
            panel = {g}
            for e in range(1, ball.qmod[s]):
                w2, _d = append_syllable(g, s, e, ball.commute, ball.qmod)
                panel.add(w2)
            if len(panel) != ball.qmod[s]:
                raise ValidationMismatch(
                    f"panel of size {len(panel)} != {ball.qmod[s]}")
            if not panel <= chamber_set:
                raise ValidationMismatch("panel escapes the enumerated ball")
            lengths = sorted(len(x) for x in panel)
            gate = gate_word(g, {s}, ball.commute, ball.qmod)
            if lengths.count(lengths[0]) != 1 or \
                    min(panel, key=len) != gate:
                raise ValidationMismatch("panel gate is not unique")


# ---------------------------------------------------------------------------
# simplices: chains of nested spherical residues

@dataclass(frozen=True)
class Simplex:
    """(gate, chain): the residue chain gate*<T_0> c ... c gate*<T_k>.

    The gate is T_0-reduced; dim = k; vertices (k = 0) with T_0 = () are
    chambers themselves.
    """
    gate: tuple
    chain: tuple                # strictly increasing tuple of sorted tuples

    @property
    def dim(self):
        return len(self.chain) - 1

    @property
    def min_type(self):
        return self.chain[0]

    @property
    def top_type(self):
        return self.chain[-1]


def make_simplex(ball, word, chain):
    """Canonical simplex from any chamber in the bottom residue.

    chain: iterable of generator subsets, strictly nested.  Raises
    MarginViolation when the top residue cannot be certified inside the
    enumerated radius (length of gate + |top| + 2 > radius).
    """
    chain = tuple(tuple(sorted(T)) for T in chain)
    if not chain:
        raise SchemaError("empty chain")
    for a, b in zip(chain, chain[1:]):
        if not set(a) < set(b):
            raise SchemaError(f"chain not strictly nested: {a} !< {b}")
    sph = {tuple(sorted(T)) for T in ball.sphericals}
    for T in chain:
        if T not in sph:
            raise SchemaError(f"{T} is not spherical")
    gate = gate_word(word, chain[0], ball.commute, ball.qmod)
    if len(gate) + len(chain[-1]) + 2 > ball.radius:
        raise MarginViolation(
            f"gate length {len(gate)} + top rank {len(chain[-1])} + 2 "
            f"exceeds radius {ball.radius}")
    return Simplex(gate, chain)


def boundary(ball, chain_coeffs):
    """Exact boundary of a chain {Simplex: Fraction}; deleting the bottom
    type re-gates to the next residue."""
    out = {}
    for sx, c in chain_coeffs.items():
        if sx.dim == 0:
            continue
        for i in range(len(sx.chain)):
            sub = sx.chain[:i] + sx.chain[i + 1:]
            if i == 0:
                g = gate_word(sx.gate, sub[0], ball.commute, ball.qmod)
            else:
                g = sx.gate
            face = Simplex(g, sub)
            v = out.get(face, Fraction(0)) + c * (-1 if i % 2 else 1)
            if v:
                out[face] = v
            elif face in out:
                del out[face]
    return out


def pushforward(ball, apartment, chain_coeffs):
    """rho_*: erase exponents, map onto the q = 1 apartment ball."""
    out = {}
    for sx, c in chain_coeffs.items():
        face = Simplex(erase_exponents(sx.gate), sx.chain)
        v = out.get(face, Fraction(0)) + c
        if v:
            out[face] = v
        elif face in out:
            del out[face]
    return out


def pullback(ball, apartment, chain_coeffs):
    """rho^*: spread each apartment simplex over its fiber with weight
    1/q_w; a section of rho_* (rho_* rho^* = identity)."""
    per = ball.thickness.per_generator(ball.M)
    out = {}
    for sx, c in chain_coeffs.items():
        gens = word_gens(sx.gate)
        qw = 1
        for s in gens:
            qw *= per[s]
        share = c / qw
        ranges = [range(1, per[s] + 1) for s in gens]
        for exps in itertools.product(*ranges):
            g = tuple(zip(gens, exps))
            face = Simplex(g, sx.chain)
            v = out.get(face, Fraction(0)) + share
            if v:
                out[face] = v
            elif face in out:
                del out[face]
    return out


# ---------------------------------------------------------------------------
# exact l^p machinery

def _squarefree_split(n):
    """n = a^2 * k with k squarefree; returns (a, k).  Trial division is
    plenty for chain coefficients."""
    a, k = 1, 1
    d = 2
    while d * d <= n:
        cnt = 0
        while n % d == 0:
            n //= d
            cnt += 1
        a *= d ** (cnt // 2)
        if cnt % 2:
            k *= d
        d += 1 if d == 2 else 2
    return a, k * n


def _sqrt_fraction(fr):
    """sqrt(fr) = rational * sqrt(squarefree kernel)."""
    m = fr.numerator * fr.denominator
    a, k = _squarefree_split(m)
    return Fraction(a, fr.denominator), k


def lp_power_sum(values, p):
    """Sum of |v|^p as {squarefree kernel: rational coefficient}, for
    integer or half-integer p; None when p is neither."""
    p = Fraction(p)
    out = {}
    if p.denominator == 1:
        tot = sum(abs(v) ** int(p) for v in values) or Fraction(0)
        return {1: Fraction(tot)}
    if p.denominator == 2:
        half = (p.numerator - 1) // 2
        for v in values:
            av = abs(Fraction(v))
            if av == 0:
                continue
            rat = av ** half
            root_rat, kernel = _sqrt_fraction(av)
            coeff = rat * root_rat
            out[kernel] = out.get(kernel, Fraction(0)) + coeff
        return out or {1: Fraction(0)}
    return None


def compare_radical_sums(A, B, max_prec=4096):
    """Sign of A - B where each side is {kernel: coeff}.  Equality is
    syntactic (square roots of distinct squarefree integers are linearly
    independent over Q); otherwise interval evaluation must separate."""
    diff = dict(A)
    for k, v in B.items():
        diff[k] = diff.get(k, Fraction(0)) - v
    diff = {k: v for k, v in diff.items() if v}
    if not diff:
        return 0
    iv = mpmath.iv
    prec = 64
    old = iv.prec
    try:
        while prec <= max_prec:
            iv.prec = prec
            tot = iv.mpf(0)
            for k, v in diff.items():
                term = iv.sqrt(iv.mpf(k)) * iv.mpf(v.numerator) / iv.mpf(v.denominator)
                tot += term
            if tot > 0:
                return 1
            if tot < 0:
                return -1
            prec *= 2
    finally:
        iv.prec = old
    raise ArithmeticError("radical comparison did not separate")


def _interval_power_sum(values, p, prec):
    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = prec
        pv = iv.mpf(Fraction(p).numerator) / iv.mpf(Fraction(p).denominator)
        tot = iv.mpf(0)
        for v in values:
            av = abs(Fraction(v))
            if av == 0:
                continue
            x = iv.mpf(av.numerator) / iv.mpf(av.denominator)
            tot += iv.exp(pv * iv.log(x))
        return tot
    finally:
        iv.prec = old


@dataclass
class JensenResult:
    holds: object          # True | False | None (indeterminate)
    comparison: str        # "equal" | "strict" | "interval" | "indeterminate"
    p: Fraction


def jensen_check(ball, apartment, chain_coeffs, p, max_prec=1024):
    """Does ||rho^* rho_* eta||_p <= ||eta||_p hold for this chain?

    Exact for integer and half-integer p; otherwise certified intervals,
    with None when the two sides cannot be separated (e.g. equality at
    irrational p).
    """
    p = Fraction(p)
    if p < 1:
        raise SchemaError("p must be >= 1")
    theta = pullback(ball, apartment,
                     pushforward(ball, apartment, chain_coeffs))
    clean = {k: v for k, v in chain_coeffs.items() if v}
    if theta == clean:
        return JensenResult(True, "equal", p)
    lhs = lp_power_sum(theta.values(), p)
    rhs = lp_power_sum(clean.values(), p)
    if lhs is not None and rhs is not None:
        sign = compare_radical_sums(lhs, rhs)
        return JensenResult(sign <= 0, "equal" if sign == 0 else "strict", p)
    prec = 64
    while prec <= max_prec:
        lo = _interval_power_sum(theta.values(), p, prec)
        hi = _interval_power_sum(clean.values(), p, prec)
        if lo.b < hi.a:
            return JensenResult(True, "interval", p)
        if lo.a > hi.b:
            return JensenResult(False, "interval", p)
        prec *= 2
    return JensenResult(None, "indeterminate", p)


def lp_pullback_partial_sums(M, thickness, p, radius, caps=None):
    """Partial sums through each radius of sum_w q_w^(1-p): the p-th power
    of the pullback norm of the apartment's chamber indicator, radius by
    radius.  Exact Fractions for integer p, kernel maps for half-integer,
    floats otherwise."""
    from .growth import layer_class_counts
    p = Fraction(p)
    counts, _src = layer_class_counts(M, radius, caps=caps)
    partials = []
    if p.denominator == 1:
        acc = Fraction(0)
        for d in counts:
            for cv, c in d.items():
                acc += c * Fraction(thickness.q_of(cv)) ** (1 - int(p))
            partials.append(acc)
        return partials
    if p.denominator == 2:
        acc = {}
        for d in counts:
            for cv, c in d.items():
                qw = Fraction(thickness.q_of(cv))
                # q_w^(1-p) = |1/q_w|^(p-1), again half-integer
                for k, v in lp_power_sum([Fraction(1) / qw], p - 1).items():
                    acc[k] = acc.get(k, Fraction(0)) + c * v
            partials.append({k: v for k, v in acc.items() if v})
        return partials
    acc = 0.0
    for d in counts:
        for cv, c in d.items():
            acc += c * float(thickness.q_of(cv)) ** float(1 - p)
        partials.append(acc)
    return partials


# ---------------------------------------------------------------------------
# critical exponents

@dataclass
class CriticalExponents:
    """p_hom = 1 + e_q and p_cohom = 1 + 1/e_q; e_q = 0 (polynomial
    chamber growth) sends the cohomological exponent to infinity, and a
    thin building (q = 1) has p_hom infinite with p_cohom = 1."""
    p_hom: float
    p_cohom: float
    p_hom_bracket: tuple
    p_cohom_bracket: tuple
    e_q: object            # GrowthRateEstimate | None for thin
    thin: bool
    nerve_is_pm: bool


def critical_exponents(M, thickness, caps=None, e_q=None):
    from .davis import is_type_PM
    from .growth import WeightVector, growth_rate
    pm = is_type_PM(M).is_pm
    if thickness.is_thin():
        return CriticalExponents(math.inf, 1.0, (math.inf, math.inf),
                                 (1.0, 1.0), None, True, pm)
    if e_q is None:
        w = WeightVector(M, [Fraction(v) for v in thickness.values])
        e_q = growth_rate(M, w, method="series", caps=caps)
    lo, hi = e_q.bracket
    if e_q.value == 0.0 and e_q.exact:
        return CriticalExponents(1.0, math.inf, (1.0, 1.0),
                                 (math.inf, math.inf), e_q, False, pm)
    p_hom = 1.0 + e_q.value
    p_cohom = math.inf if e_q.value == 0 else 1.0 + 1.0 / e_q.value
    pc_lo = 1.0 + 1.0 / hi if hi > 0 else math.inf
    pc_hi = math.inf if lo <= 0 else 1.0 + 1.0 / lo
    return CriticalExponents(p_hom, p_cohom, (1.0 + lo, 1.0 + hi),
                             (pc_lo, pc_hi), e_q, False, pm)


# ---------------------------------------------------------------------------
# sampling helpers for the verification battery

def random_simplices(ball, rng, count, max_dim=2):
    """Margin-valid simplices sampled uniformly-ish for the test battery."""
    sph = sorted({tuple(sorted(T)) for T in ball.sphericals},
                 key=lambda t: (len(t), t))
    out = []
    attempts = 0
    while len(out) < count and attempts < count * 200:
        attempts += 1
        word = ball.chambers[rng.randrange(len(ball.chambers))]
        k = rng.randint(0, max_dim)
        chain = [sph[rng.randrange(len(sph))]]
        while len(chain) < k + 1:
            bigger = [T for T in sph if set(T) > set(chain[-1])]
            if not bigger:
                break
            chain.append(bigger[rng.randrange(len(bigger))])
        try:
            out.append(make_simplex(ball, word, chain))
        except MarginViolation:
            continue
    return out


def random_chain(ball, rng, size, max_dim=2):
    """Random homogeneous-degree chain with small rational coefficients."""
    simplices = random_simplices(ball, rng, size * 3, max_dim)
    if not simplices:
        raise ResourceExceeded("no margin-valid simplices at this radius")
    deg = simplices[0].dim
    pool = [s for s in simplices if s.dim == deg]
    out = {}
    for sx in pool[:size]:
        c = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        if c:
            out[sx] = out.get(sx, Fraction(0)) + c
    return {k: v for k, v in out.items() if v}


def oracle_battery(M, thickness, radius, p_values=(Fraction(3, 2),
                   Fraction(2), Fraction(3)), chains=100, seed=0,
                   chain_size=5, caps=None):
    """Chain-level identity battery on an explicit building ball.

    Builds the ball (axioms are re-verified during construction), then
    checks on seeded random chains: boundary squared vanishing on both the
    building and its apartment, the retraction section and both boundary
    commutation identities, and the p-norm comparison between a chain and
    its retraction for each requested exponent.  Any failed identity
    raises ValidationMismatch; the return value summarizes what was
    checked and is JSON-ready.
    """
    ball = building_ball(M, thickness, radius, caps=caps)
    apartment = building_ball(M, ThicknessVector.constant(M, 1), radius,
                              caps=caps)
    rng = random.Random(seed)
    jensen = {"strict": 0, "equal": 0, "interval": 0, "indeterminate": 0}
    for trial in range(chains):
        ch = random_chain(ball, rng, chain_size)
        if boundary(ball, boundary(ball, ch)) != {}:
            raise ValidationMismatch(f"boundary^2 != 0 on trial {trial}")
        push = pushforward(ball, apartment, ch)
        if boundary(apartment, push) != \
                pushforward(ball, apartment, boundary(ball, ch)):
            raise ValidationMismatch(
                f"pushforward does not commute with boundary on trial {trial}")
        for p in p_values:
            res = jensen_check(ball, apartment, ch, p)
            if res.holds is False:
                raise ValidationMismatch(
                    f"norm comparison failed at p={p} on trial {trial}")
            jensen[res.comparison if res.holds else "indeterminate"] += 1
        ch_ap = random_chain(apartment, rng, chain_size)
        if boundary(apartment, boundary(apartment, ch_ap)) != {}:
            raise ValidationMismatch(
                f"apartment boundary^2 != 0 on trial {trial}")
        up = pullback(ball, apartment, ch_ap)
        if pushforward(ball, apartment, up) != ch_ap:
            raise ValidationMismatch(
                f"retraction section identity failed on trial {trial}")
        if boundary(ball, up) != \
                pullback(ball, apartment, boundary(apartment, ch_ap)):
            raise ValidationMismatch(
                f"pullback does not commute with boundary on trial {trial}")
    return {
        "chambers": len(ball.chambers),
        "apartment_chambers": len(apartment.chambers),
        "sphere_sizes": ball.sphere_sizes(),
        "radius": radius,
        "chains_checked": chains,
        "p_values": [str(p) for p in p_values],
        "seed": seed,
        "jensen": jensen,
        "identities": ["boundary_squared_zero", "pushforward_boundary",
                       "retraction_section", "pullback_boundary",
                       "norm_comparison"],
    }
