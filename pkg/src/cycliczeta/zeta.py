"""Orchestration: Frobenius matrix mod p^N, then the exact integer
L-polynomial via traces, Newton identities, Weil bounds and the functional
equation.

The trace route is the source of truth: s_i is known mod p^N from the matrix
and mod i from integrality of the elementary symmetric functions, which
pins it inside the Weil window.  The characteristic-polynomial route is a
mandatory cross-check.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import (
    BoundViolated,
    ConsistencyError,
    LiftAmbiguous,
    NonIntegralCoefficient,
    PrecisionExhausted,
)
from .frobenius import FrobTable
from .horizontal import StripPlan, h_reduce_full
from .padic import PMat, mat_charpoly
from .vertical import VerticalFamily


def resolve_strategy(curve, strategy: str) -> str:
    if strategy == "auto":
        return "bsgs" if curve.p >= 4 * (curve.d * curve.N) ** 2 else "naive"
    if strategy not in ("bsgs", "naive"):
        raise ValueError(f"unknown strategy {strategy!r}")
    return strategy


@dataclass
class FrobResult:
    matrix: PMat
    strategy: str
    interpolation_used: bool
    fallback: bool
    timings_ms: dict = field(default_factory=dict)


def frobenius_matrix(curve, strategy="auto", interpolation=True, threads=1) -> FrobResult:
    """Matrix of the p-power Frobenius on the basis x^i dx/y^j, entries
    reduced mod p^N, columns and rows in lexicographic (j, i) order."""
    strat = resolve_strategy(curve, strategy)
    ring = curve.ring
    n = curve.basis_size()
    pN = ring.ppow[curve.N]
    timings = {}
    t0 = time.perf_counter()
    table = FrobTable(curve)
    for j in curve.basis_j_range():
        table.mu_table(j)
    timings["expansion"] = time.perf_counter() - t0

    rows = [[0] * n for _ in range(n)]
    used_interp = False
    fallback = False
    if n == 0:
        return FrobResult(PMat.from_ints(ring, rows, prec=curve.N),
                          strat, False, False,
                          {k: v * 1000 for k, v in timings.items()})

    def horizontal_j(j):
        w = {i: {} for i in range(curve.d - 1)}
        interp_j = False
        fell = False
        for k in range(curve.N):
            plan = StripPlan(curve, j, k, strat, interpolation)
            if plan.strategy != strat:
                fell = True
            interp_j = interp_j or plan.used_interpolation
            for i in range(curve.d - 1):
                vec = h_reduce_full(curve, i, j, k, table.frob_terms(i, j),
                                    plan=plan)
                w[i][k] = vec[1:]
        return w, interp_j, fell

    t0 = time.perf_counter()
    jlist = list(curve.basis_j_range())
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hres = dict(zip(jlist, pool.map(horizontal_j, jlist)))
    else:
        hres = {j: horizontal_j(j) for j in jlist}
    for _, interp_j, fell in hres.values():
        used_interp = used_interp or interp_j
        fallback = fallback or fell
    timings["horizontal"] = time.perf_counter() - t0

    t0 = time.perf_counter()

    def vertical_j(j):
        fam = VerticalFamily(curve, j, strat)
        w, _, _ = hres[j]
        cols = {}
        for i in range(curve.d - 1):
            cols[i] = fam.reduce(w[i])
        return fam, cols

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vres = dict(zip(jlist, pool.map(vertical_j, jlist)))
    else:
        vres = {j: vertical_j(j) for j in jlist}
    for j in jlist:
        fam, cols = vres[j]
        if fam.strategy != strat:
            fallback = True
        jrow = curve.eps * curve.r + fam.beta
        for i in range(curve.d - 1):
            col = curve.basis_column(i, j)
            for a, val in enumerate(cols[i]):
                rows[curve.basis_column(a, jrow)][col] = val % pN
    timings["vertical"] = time.perf_counter() - t0

    M = PMat.from_ints(ring, rows, prec=curve.N)
    if M.min_prec() < curve.N:
        raise PrecisionExhausted("Frobenius matrix below target precision")
    return FrobResult(M, strat, used_interp, fallback,
                      {k: v * 1000 for k, v in timings.items()})


def _crt_symmetric(a, m, b, n):
    """x = a mod m, x = b mod n (coprime), in the symmetric range
    (-mn/2, mn/2]."""
    minv = pow(m % n, -1, n) if n > 1 else 0
    x = a + m * ((b - a) * minv % n)
    mn = m * n
    x %= mn
    if 2 * x > mn:
        x -= mn
    return x


def power_sums(M: PMat, g: int, curve):
    """s_i = trace(Frob^i | H^1) for i = 1..g, as exact integers."""
    N, q = curve.N, curve.p
    pN = curve.ring.ppow[N]
    raw = [[c.res % pN for c in row] for row in M.rows]
    n = len(raw)
    s = []
    e = [1]
    power = raw
    for i in range(1, g + 1):
        if i > 1:
            power = [[sum(x * y for x, y in zip(row, col)) % pN
                      for col in zip(*raw)] for row in power]
        tr = sum(power[a][a] for a in range(n)) % pN
        ti = (tr - curve.ker_eta_power_sum(i)) % pN
        S = sum((-1) ** (m - 1) * e[i - m] * s[m - 1] for m in range(1, i))
        rem_i = (S if i % 2 == 0 else -S) % i  # s_i mod i, from i | i*e_i
        Mi = i * pN
        if 16 * g * g * q**i >= Mi * Mi:
            raise LiftAmbiguous(
                f"Weil window for s_{i} exceeds i * p^N; N too small")
        x = _crt_symmetric(ti, pN, rem_i, i)
        if x * x > 4 * g * g * q**i:
            raise BoundViolated(f"|s_{i}| = {abs(x)} breaks the Weil bound")
        s.append(x)
        num = S + (x if i % 2 == 1 else -x)
        if num % i:
            raise NonIntegralCoefficient(f"e_{i} not an integer")
        e.append(num // i)
    return s


@dataclass
class LPolynomial:
    """L(t) = prod (1 - alpha_k t), integer coefficients a_0..a_{2g}."""

    coeffs: list
    g: int
    q: int
    U: list = field(default_factory=lambda: [1])
    chi_modN: list = field(default_factory=list)

    def functional_equation_ok(self) -> bool:
        a, g, q = self.coeffs, self.g, self.q
        return all(a[2 * g - i] == q ** (g - i) * a[i] for i in range(g + 1))

    def weil_bounds_ok(self) -> bool:
        a, g, q = self.coeffs, self.g, self.q
        return all(a[i] * a[i] <= math.comb(2 * g, i) ** 2 * q**i
                   for i in range(2 * g + 1))

    def reciprocal(self):
        """Monic 'frobenius polynomial' prod (x - alpha_k), ascending."""
        return list(reversed(self.coeffs))

    def power_sums_of_roots(self, i_max):
        a = self.coeffs
        twog = 2 * self.g
        ps = []
        for i in range(1, i_max + 1):
            acc = -i * a[i] if i <= twog else 0
            for m in range(1, min(i, twog) + 1):
                if m < i:
                    acc -= a[m] * ps[i - m - 1]
            ps.append(acc)
        return ps

    def point_count(self, i):
        return self.q**i + 1 - self.power_sums_of_roots(i)[i - 1]


def lpolynomial_from_power_sums(s, g, q) -> LPolynomial:
    e = [1]
    for i in range(1, g + 1):
        num = sum((-1) ** (m - 1) * e[i - m] * s[m - 1] for m in range(1, i + 1))
        if num % i:
            raise NonIntegralCoefficient(f"e_{i} not an integer")
        e.append(num // i)
    a = [(-1) ** i * e[i] for i in range(g + 1)]
    for i in range(g + 1, 2 * g + 1):
        a.append(q ** (i - g) * a[2 * g - i])
    return LPolynomial(a, g, q)


def zeta_check_charpoly(M: PMat, L: LPolynomial, U, curve) -> bool:
    """det(I - tM) = L(t) * rev(U)(t) mod p^N."""
    pN = curve.ring.ppow[curve.N]
    chi = mat_charpoly(M)
    m = M.nrows
    lhs = [chi[m - i].res % pN for i in range(m + 1)]
    revu = list(reversed(U))
    rhs = [0] * (len(L.coeffs) + len(revu) - 1)
    for i, x in enumerate(L.coeffs):
        for k, y in enumerate(revu):
            rhs[i + k] = (rhs[i + k] + x * y) % pN
    if len(rhs) != m + 1:
        return False
    return lhs == rhs


def point_counts_from_L(L: LPolynomial, q, i_max):
    ps = L.power_sums_of_roots(i_max)
    return {i: q**i + 1 - ps[i - 1] for i in range(1, i_max + 1)}


@dataclass
class ZetaResult:
    curve: object
    frob: FrobResult
    power_sums: list
    lpoly: LPolynomial
    timings_ms: dict

    @property
    def strategy(self):
        return self.frob.strategy


def compute(curve, strategy="auto", interpolation=True, threads=1) -> ZetaResult:
    """Full pipeline: Frobenius matrix, trace lift, cross-checks."""
    frob = frobenius_matrix(curve, strategy, interpolation, threads)
    t0 = time.perf_counter()
    s = power_sums(frob.matrix, curve.g, curve)
    L = lpolynomial_from_power_sums(s, curve.g, curve.p)
    U = curve.ker_eta_charpoly()
    L.U = U
    chi = mat_charpoly(frob.matrix)
    pN = curve.ring.ppow[curve.N]
    L.chi_modN = [c.res % pN for c in chi.coeffs]
    if not L.functional_equation_ok():
        raise ConsistencyError("functional equation violated")
    if not L.weil_bounds_ok():
        raise BoundViolated("L-polynomial coefficient breaks a Weil bound")
    if not zeta_check_charpoly(frob.matrix, L, U, curve):
        raise ConsistencyError(
            "trace route and characteristic polynomial route disagree mod p^N")
    timings = dict(frob.timings_ms)
    timings["lift"] = (time.perf_counter() - t0) * 1000
    return ZetaResult(curve, frob, s, L, timings)
