"""Classical abelian knot invariants from Seifert matrices.

A knot enters the library as a Seifert matrix V (square, integer,
det(V - V^T) = +-1).  Everything downstream is exact: the Alexander
polynomial is a Bareiss determinant over Q[t,t^-1]; the Levine signature
function is computed with an exact jump locus (Sturm isolation of the
unit-circle zeros of the Alexander polynomial under x = t + 1/t) and
exact arc values (Descartes counts on characteristic polynomials at
rational points of the circle); the signature integral rho0 carries a
certified error bound.

Sign convention: sigma(omega) is the signature of (1-omega)V +
(1-conj(omega))V^T.  Mirroring (V -> -V^T) negates sigma and rho0.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from concord import realroots
from concord.certified import (
    CertifiedReal,
    Interval,
    acos_of_enclosure,
    pi_interval,
)
from concord.laurent import LaurentPoly, exact_div
from concord.realroots import IsolatedRoot

class SeifertMatrix:
    """An integer Seifert matrix; det(V - V^T) = +-1 is checked on build.

    >>> SeifertMatrix([[-1, 1], [0, -1]], name="trefoil").genus()
    1
    """

    __slots__ = ("entries", "name")

    def __init__(self, entries: Sequence[Sequence[int]], name: Optional[str] = None):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        n = len(rows)
        for row in rows:
            if len(row) != n:
                raise ValueError("Seifert matrix must be square")
        skew = [[rows[i][j] - rows[j][i] for j in range(n)] for i in range(n)]
        d = det_integer(skew)
        if d not in (1, -1):
            raise ValueError(
                f"det(V - V^T) = {d}; a Seifert matrix needs +-1 (size {n})"
            )
        self.entries = rows
        self.name = name

    def size(self) -> int:
        return len(self.entries)

    def genus(self) -> int:
        return len(self.entries) // 2

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeifertMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        label = self.name or "V"
        return f"SeifertMatrix({label}, {len(self.entries)}x{len(self.entries)})"


def det_integer(m: List[List[int]]) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def det_laurent(m: List[List[LaurentPoly]]) -> LaurentPoly:
    """Bareiss determinant over Q[t,t^-1] (exact divisions)."""
    n = len(m)
    if n == 0:
        return LaurentPoly.one()
    m = [row[:] for row in m]
    sign = 1
    prev = LaurentPoly.one()
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return LaurentPoly.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev)
        prev = m[k][k]
    d = m[-1][-1]
    return d if sign == 1 else -d


def mirror(v: SeifertMatrix) -> SeifertMatrix:
    """Seifert matrix of the mirror image: -V^T."""
    n = v.size()
    ent = [[-v.entries[j][i] for j in range(n)] for i in range(n)]
    name = f"mirror({v.name})" if v.name else None
    return SeifertMatrix(ent, name=name)


def connected_sum(v1: SeifertMatrix, v2: SeifertMatrix) -> SeifertMatrix:
    """Block sum; Alexander polynomials multiply, signatures add."""
    n1, n2 = v1.size(), v2.size()
    ent = [[0] * (n1 + n2) for _ in range(n1 + n2)]
    for i in range(n1):
        for j in range(n1):
            ent[i][j] = v1.entries[i][j]
    for i in range(n2):
        for j in range(n2):
            ent[n1 + i][n1 + j] = v2.entries[i][j]
    name = None
    if v1.name and v2.name:
        name = f"{v1.name}#{v2.name}"
    return SeifertMatrix(ent, name=name)


def alexander_poly(v: SeifertMatrix) -> LaurentPoly:
    """normalize(det(tV - V^T)); satisfies Delta(1) = +-1."""
    n = v.size()
    if n == 0:
        return LaurentPoly.one()
    t = LaurentPoly.t()
    m = [
        [t.scale(v.entries[i][j]) - LaurentPoly.constant(v.entries[j][i]) for j in range(n)]
        for i in range(n)
    ]
    return det_laurent(m).normalize()


def arf(v: SeifertMatrix) -> int:
    """0 iff |Delta(-1)| is +-1 mod 8 (the determinant criterion)."""
    d = alexander_poly(v).evaluate(-1)
    assert d.denominator == 1
    return 0 if abs(int(d)) % 8 in (1, 7) else 1


# -- exact signatures at rational points of the circle --------------------------


def _circle_point(tau: Fraction) -> Tuple[Fraction, Fraction]:
    """omega = e^{i theta} with tan(theta/2) = tau, as exact rationals."""
    tau = Fraction(tau)
    d = 1 + tau * tau
    return (1 - tau * tau) / d, 2 * tau / d


def _char_poly(m: List[List[Fraction]]) -> List[Fraction]:
    """Characteristic polynomial det(lambda I - M) by Faddeev-LeVerrier.

    Returns [c_n, ..., c_1, c_0] with leading coefficient 1 (index 0 =
    highest degree)."""
    n = len(m)
    coeffs = [Fraction(1)]
    mk = [row[:] for row in m]
    for k in range(1, n + 1):
        ck = -sum(mk[i][i] for i in range(n)) / k
        coeffs.append(ck)
        if k == n:
            break
        for i in range(n):
            mk[i][i] += ck
        mk = _mat_mul(m, mk)
    return coeffs


def _mat_mul(a, b):
    n = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def _sign_variations(seq: Sequence[Fraction]) -> int:
    signs = [1 if c > 0 else -1 for c in seq if c]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _hermitian_signature(a: List[List[Fraction]], b: List[List[Fraction]]) -> int:
    """Signature of the Hermitian matrix A + iB (A symmetric, B
    antisymmetric), exactly.

    Realified to the symmetric [[A, -B], [B, A]] whose spectrum doubles
    that of A + iB; Descartes' rule is exact on real-rooted polynomials,
    so the variation counts of p(x) and p(-x) are the eigenvalue counts.
    Requires A + iB nonsingular.
    """
    n = len(a)
    if n == 0:
        return 0
    big = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            big[i][j] = a[i][j]
            big[i][n + j] = -b[i][j]
            big[n + i][j] = b[i][j]
            big[n + i][n + j] = a[i][j]
    coeffs = _char_poly(big)
    if not coeffs[-1]:
        raise ValueError("singular Hermitian form (sample point on the jump locus)")
    pos = _sign_variations(coeffs)
    neg = _sign_variations([c if i % 2 == 0 else -c for i, c in enumerate(coeffs)])
    assert pos + neg == 2 * n, "Descartes counts must exhaust a nonsingular spectrum"
    sig2 = pos - neg
    assert sig2 % 2 == 0
    return sig2 // 2


def signature_at(v: SeifertMatrix, tau: Fraction) -> int:
    """Levine signature at the exact circle point with tan(theta/2) = tau.

    tau = 0 is omega = 1, where the form degenerates; not allowed.
    """
    tau = Fraction(tau)
    if tau == 0:
        raise ValueError("omega = 1 is excluded")
    n = v.size()
    if n == 0:
        return 0
    re, im = _circle_point(tau)
    vm = v.entries
    a = [
        [(1 - re) * (vm[i][j] + vm[j][i]) for j in range(n)]
        for i in range(n)
    ]
    b = [
        [-im * (vm[i][j] - vm[j][i]) for j in range(n)]
        for i in range(n)
    ]
    return _hermitian_signature(a, b)


# -- signature function -----------------------------------------------------------


def _compact_form(delta: LaurentPoly) -> List[Fraction]:
    """Write the (normalized, palindromic, even-degree) polynomial as
    p(t) = t^(d/2) g(t + 1/t) and return g as a dense list in x."""
    p = delta
    d = p.degree()
    assert d % 2 == 0, "palindromic knot polynomial must have even degree"
    g = [Fraction(0)] * (d // 2 + 1)
    f = p
    while not f.is_zero():
        fd = f.degree()
        assert fd % 2 == 0 and f.low() == 0
        c = f.coeff(fd)
        half = fd // 2
        g[half] += c
        # subtract c * t^half * (t + 1/t)^half = c * (t^2 + 1)^half
        f = f - (LaurentPoly({2: 1, 0: 1}) ** half).scale(c)
        if not f.is_zero():
            f = f.shift(-f.low())
    # verify: p == t^(d/2) g(t + 1/t)
    x = LaurentPoly({1: 1, -1: 1})
    check = LaurentPoly.zero()
    for i, c in enumerate(g):
        if c:
            check = check + (x**i).scale(c)
    assert (check.shift(d // 2)) == p, "compact form verification failed"
    return realroots.trim(g)


class SignatureFunction:
    """Piecewise-constant signature on the circle with exact jump locus.

    Jumps are stored for the upper half circle as isolated real algebraic
    numbers x = 2 cos(theta) (decreasing x = increasing theta); values are
    the constant signatures on the open arcs of (0, pi).  The lower half
    is the conjugate mirror.  The value at omega = 1 is 0.
    """

    def __init__(self, matrix: SeifertMatrix, delta: LaurentPoly,
                 upper_jumps: List[IsolatedRoot], upper_values: List[int]):
        assert len(upper_values) == len(upper_jumps) + 1
        self.matrix = matrix
        self.delta = delta
        self.upper_jumps = upper_jumps      # theta-increasing (x decreasing)
        self.upper_values = upper_values    # arc values on (0, pi)
        self.value_at_one = 0

    # -- structure ---------------------------------------------------------

    def jump_count_full_circle(self) -> int:
        return 2 * len(self.upper_jumps)

    def full_values(self) -> List[int]:
        """Arc values all the way around, cut at omega = 1."""
        up = self.upper_values
        return up + up[-2::-1] if len(up) > 1 else up

    def is_identically_zero(self) -> bool:
        return all(val == 0 for val in self.upper_values)

    def theta_enclosures(self, err: Fraction, width: Fraction) -> List[Interval]:
        """Certified enclosures of the jump angles in (0, pi)."""
        out = []
        for root in self.upper_jumps:
            r = root.refine(width)
            lo, hi = r.lo, r.hi
            lo = max(lo, Fraction(-2))
            hi = min(hi, Fraction(2))
            out.append(acos_of_enclosure(Interval(lo / 2, hi / 2), err))
        return out

    def integrate(self, err: Fraction = Fraction(1, 10**12)) -> CertifiedReal:
        """rho0: the circle integral, normalized to total length 1."""
        r = len(self.upper_jumps)
        if r == 0 or all(val == 0 for val in self.upper_values):
            return CertifiedReal.exact(0)
        # sum sigma_i (theta_{i+1} - theta_i) over (0, pi), telescoped:
        #   sum_j (sigma_{j-1} - sigma_j) theta_j + sigma_r * pi
        # and rho0 = that / pi.
        thetas = self.theta_enclosures(err, width=err)
        total = Interval.point(0)
        for j in range(1, r + 1):
            dv = self.upper_values[j - 1] - self.upper_values[j]
            if dv:
                total = total + thetas[j - 1].scale(dv)
        pi = pi_interval(min(err, Fraction(1, 10**40)))
        result = total / pi + Interval.point(self.upper_values[-1])
        return CertifiedReal.from_interval(result)

    def __repr__(self) -> str:
        return (
            f"SignatureFunction(jumps={self.jump_count_full_circle()}, "
            f"values={self.full_values()})"
        )


def _find_tau_for_gap(x_lo: Fraction, x_hi: Fraction) -> Fraction:
    """A rational tan-half-angle tau > 0 with 2(1-tau^2)/(1+tau^2) inside
    the open x-interval (x_lo, x_hi) of (-2, 2)."""
    def x_of(tau: Fraction) -> Fraction:
        return 2 * (1 - tau * tau) / (1 + tau * tau)

    lo, hi = Fraction(0), Fraction(1)
    while x_of(hi) >= x_hi:            # push hi until x(hi) < x_hi
        hi *= 2
    # invariant: x(lo) >= x_hi > x_lo... bisect on decreasing x(tau)
    for _ in range(10000):
        mid = (lo + hi) / 2
        xm = x_of(mid)
        if xm >= x_hi:
            lo = mid
        elif xm <= x_lo:
            hi = mid
        else:
            return mid
    raise AssertionError("tau search failed to converge")


def signature_function(v: SeifertMatrix) -> SignatureFunction:
    delta = alexander_poly(v)
    if delta.degree() == 0:
        return SignatureFunction(v, delta, [], [0])
    assert delta == LaurentPoly(
        {delta.degree() - e: c for e, c in delta.items()}
    ), "Alexander polynomial of a valid Seifert matrix is palindromic"
    g = _compact_form(delta)
    g_sf = realroots.squarefree(g)
    if realroots.evaluate(g_sf, Fraction(2)) == 0 or realroots.evaluate(g_sf, Fraction(-2)) == 0:
        raise AssertionError("Delta(1) = +-1 and odd determinant exclude x = +-2")
    roots = realroots.isolate_roots(g_sf, Fraction(-2), Fraction(2))
    if not roots:
        return SignatureFunction(v, delta, [], [0])
    # refine until pairwise disjoint so arc gaps are visible
    width = Fraction(1, 16)
    while True:
        refined = [r.refine(width) for r in roots]
        ok = all(refined[i].hi < refined[i + 1].lo for i in range(len(refined) - 1))
        if ok:
            roots = refined
            break
        width /= 4
    # theta-increasing order = x-decreasing
    roots_desc = list(reversed(roots))
    bounds: List[Fraction] = [Fraction(2)]
    for r in roots_desc:
        bounds.append(r.hi)
        bounds.append(r.lo)
    bounds.append(Fraction(-2))
    values: List[int] = []
    for k in range(len(roots_desc) + 1):
        x_hi = bounds[2 * k]      # upper x bound of this arc (exclusive)
        x_lo = bounds[2 * k + 1]  # lower x bound
        if x_hi == x_lo:  # exact root squeezed the gap; nudge with neighbors
            raise AssertionError("empty sampling gap despite disjoint isolation")
        tau = _find_tau_for_gap(x_lo, x_hi)
        values.append(signature_at(v, tau))
    assert values[0] == 0, "signature must vanish on the arc at omega = 1"
    assert all(val % 2 == 0 for val in values), "knot signatures are even"
    return SignatureFunction(v, delta, roots_desc, values)


# -- rho0 --------------------------------------------------------------------------


def rho0(v: SeifertMatrix, tol: Fraction = Fraction(1, 10**9)) -> CertifiedReal:
    """The integral of the signature function over the circle of length 1,
    certified to radius <= tol."""
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    sf = signature_function(v)
    err = min(tol / 4, Fraction(1, 2**20))
    for _ in range(64):
        out = sf.integrate(err)
        if out.radius <= tol:
            return out
        err /= 16
    raise AssertionError("rho0 refinement failed to reach tolerance")


def rho0_riemann_estimate(v: SeifertMatrix, samples: int = 10**6) -> float:
    """Independent numerical oracle: a Riemann sum of float signatures at
    uniform circle samples.  Used to cross-check the certified value; the
    exact path never consults it."""
    import numpy as np

    n = v.size()
    if n == 0:
        return 0.0
    vm = np.array(v.entries, dtype=np.float64)
    total = 0.0
    chunk = 65536
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        theta = 2.0 * np.pi * (np.arange(done, done + m) + 0.5) / samples
        om = np.exp(1j * theta)
        h = (1 - om)[:, None, None] * vm[None, :, :] + (1 - om.conj())[:, None, None] * vm.T[None, :, :]
        eigs = np.linalg.eigvalsh(h)
        total += float(np.sum(eigs > 1e-12) - np.sum(eigs < -1e-12))
        done += m
    return total / samples
