"""Exact arithmetic in the real cyclotomic field Q(2cos(pi/N)).

The minimal polynomial of 2cos(pi/N) is derived at runtime: Phi_2N is built
by exact integer polynomial division of z^2N - 1 by lower cyclotomics, then
rewritten through the basis z^d(z^j + z^-j) = z^d * D_j(z + 1/z) where D_j
are the degree-j Dickson polynomials (D_j(2cos a) = 2cos(ja)).  The result is
checked numerically to 1e-30 before any element arithmetic is allowed.

Field elements are coordinate tuples of Fractions in the power basis.  Exact
zero tests are coordinate tests; sign tests of nonzero elements refine an
interval enclosure of the generator until zero is excluded.
"""

from fractions import Fraction

import mpmath

VALIDATION_DIGITS = 60
VALIDATION_TOL = Fraction(1, 10 ** 30)


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod_exact(a, b):
    """Quotient of integer polynomials known to divide exactly."""
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = a[k + len(b) - 1]
        assert c % b[-1] == 0
        q[k] = c // b[-1]
        if q[k]:
            for j, y in enumerate(b):
                a[k + j] -= q[k] * y
    assert all(v == 0 for v in a)
    return q


def cyclotomic(n):
    """Integer coefficient list (low degree first) of Phi_n."""
    poly = [-1] + [0] * (n - 1) + [1]  # z^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divmod_exact(poly, cyclotomic(d))
    return poly


def dickson(k):
    """D_k with D_k(2cos a) = 2cos(ka), as an integer coefficient list."""
    if k == 0:
        return [2]
    prev, cur = [2], [0, 1]
    for _ in range(k - 1):
        nxt = [0] + cur
        for i, v in enumerate(prev):
            nxt[i] -= v
        prev, cur = cur, nxt
    return cur


def minimal_poly_2cos_pi_over(N):
    """Monic integer minimal polynomial of 2cos(pi/N), low degree first."""
    if N == 1:
        return [2, 1]  # x + 2, root -2
    phi = cyclotomic(2 * N)
    deg = len(phi) - 1
    assert deg % 2 == 0
    d = deg // 2
    for j in range(1, d + 1):  # palindromic check
        assert phi[d - j] == phi[d + j]
    psi = [0] * (d + 1)
    psi[0] = phi[d]
    for j in range(1, d + 1):
        e = phi[d + j]
        if e:
            for i, v in enumerate(dickson(j)):
                psi[i] += e * v
    assert psi[d] == 1
    return psi


def _validate_minpoly(psi, N):
    with mpmath.workdps(VALIDATION_DIGITS):
        x = 2 * mpmath.cos(mpmath.pi / N)
        val = mpmath.polyval([mpmath.mpf(c) for c in reversed(psi)], x)
        if not abs(val) < mpmath.mpf("1e-30"):
            raise AssertionError(f"minimal polynomial failed validation at N={N}: residual {val}")


class CycloField:
    """Q[x]/(psi) with x standing for 2cos(pi/N)."""

    _cache = {}

    def __new__(cls, N):
        if N in cls._cache:
            return cls._cache[N]
        self = super().__new__(cls)
        self.N = N
        self.minpoly = minimal_poly_2cos_pi_over(N)
        _validate_minpoly(self.minpoly, N)
        self.degree = len(self.minpoly) - 1
        # reduction table: x^(d+k) in the power basis, k = 0..d-2
        d = self.degree
        self._red = []
        if d > 1:
            cur = [Fraction(-c) for c in self.minpoly[:-1]]  # x^d
            self._red.append(tuple(cur))
            for _ in range(d - 2):
                shifted = [Fraction(0)] + list(cur)
                top = shifted.pop()
                if top:
                    for i in range(d):
                        shifted[i] -= top * self.minpoly[i]
                cur = shifted
                self._red.append(tuple(cur))
        self.zero = (Fraction(0),) * d
        self.one = self.from_rational(1)
        self._enclosure_prec = 0
        self._enclosure = None
        cls._cache[N] = self
        return self

    def from_rational(self, q):
        v = [Fraction(0)] * self.degree
        v[0] = Fraction(q)
        return tuple(v)

    def gen(self):
        """Coordinates of 2cos(pi/N) itself."""
        if self.degree == 1:
            # x reduces to the rational root of the linear minpoly
            return (Fraction(-self.minpoly[0], self.minpoly[1]),)
        v = [Fraction(0)] * self.degree
        v[1] = Fraction(1)
        return tuple(v)

    def two_cos_pi_over(self, m):
        """Coordinates of 2cos(pi/m) for finite m dividing N, or of the
        m = inf convention value 2."""
        if m is None:
            return self.from_rational(2)
        assert self.N % m == 0
        coeffs = dickson(self.N // m)
        out = self.zero
        xpow = self.one
        for c in coeffs:
            if c:
                out = self.add(out, self.scale(xpow, c))
            xpow = self.mul(xpow, self.gen())
        return out

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def scale(self, a, c):
        c = Fraction(c)
        return tuple(x * c for x in a)

    def mul(self, a, b):
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = list(prod[:d])
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                red = self._red[k - d]
                for i in range(d):
                    out[i] += c * red[i]
        return tuple(out)

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def _generator_interval(self, prec):
        if self._enclosure_prec >= prec and self._enclosure is not None:
            return self._enclosure
        iv = mpmath.iv
        old = iv.prec
        try:
            iv.prec = prec
            x = 2 * iv.cos(iv.pi / self.N)
        finally:
            iv.prec = old
        self._enclosure = x
        self._enclosure_prec = prec
        return x

    def sign(self, a):
        """-1, 0, or 1; exact zero by coordinates, otherwise certified by
        interval refinement."""
        if self.is_zero(a):
            return 0
        if self.degree == 1:
            return -1 if a[0] < 0 else 1
        iv = mpmath.iv
        prec = 64
        for _ in range(12):
            x = self._generator_interval(prec)
            old = iv.prec
            try:
                iv.prec = prec
                val = iv.mpf(0)
                for c in reversed(a):
                    val = val * x + iv.mpf(c.numerator) / iv.mpf(c.denominator)
            finally:
                iv.prec = old
            if val > 0:
                return 1
            if val < 0:
                return -1
            prec *= 2
        raise AssertionError("sign refinement failed to converge on a nonzero element")

    def to_mpf(self, a, dps=30):
        with mpmath.workdps(dps):
            x = 2 * mpmath.cos(mpmath.pi / self.N)
            val = mpmath.mpf(0)
            for c in reversed(a):
                val = val * x + mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
            return val

    def to_float(self, a):
        return float(self.to_mpf(a))

    def __repr__(self):
        return f"CycloField(N={self.N}, degree={self.degree})"
