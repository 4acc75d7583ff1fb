"""Curve model y^r = F(x) over F_p: hypothesis validation, genus, working
precision, and the characteristic polynomial U(t) of Frobenius on the trivial
(rational) part of the chosen cohomology basis.
"""

import math

from .errors import DegenerateCover, LeadingCoeffVanishes, NotSquarefree, PTooSmall
from .padic import RingCtx, fp_gcd, fp_powmod, fp_sub, fp_divmod, fp_trim


def genus(d: int, r: int) -> int:
    """g = ((d-1)(r-1) - (delta-1)) / 2 with delta = gcd(r, d)."""
    delta = math.gcd(r, d)
    num = (d - 1) * (r - 1) - (delta - 1)
    if num % 2 != 0:
        raise ValueError(f"(d-1)(r-1) - (delta-1) = {num} is odd")
    return num // 2


def choose_precision(g: int, p: int) -> int:
    """Smallest N with N >= log_p(4g/i) + i/2 for every i = 1..g.

    Exact integer comparisons only: the condition for candidate m is
    i^2 * p^(2m) >= 16 g^2 * p^i.
    """
    if g <= 0:
        return 1
    N = 1
    for i in range(1, g + 1):
        rhs = 16 * g * g * p**i
        m = max(N, (i + 1) // 2)  # N is nondecreasing as a running max
        while i * i * p ** (2 * m) < rhs:
            m += 1
        N = m
    return N


def _cycle_type(p: int, delta: int, f_d: int):
    """Factor-degree multiset of T^delta - f_d over F_p (the Frobenius cycle
    type on its roots), by distinct-degree factorization."""
    f = [(-f_d) % p] + [0] * (delta - 1) + [1]
    cycles = []
    h = [0, 1]  # T
    e = 0
    while len(f) > 2:
        e += 1
        h = fp_powmod(h, p, f, p)
        g = fp_gcd(fp_sub(h, [0, 1], p), f, p)
        if len(g) > 1:
            deg = len(g) - 1
            cycles.extend([e] * (deg // e))
            f, rem = fp_divmod(f, g, p)
            assert not rem
            h = fp_divmod(h, f, p)[1]
    if len(f) == 2:
        cycles.append(1)
    cycles.sort()
    assert sum(cycles) == delta
    return cycles


def _poly_mul_z(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def ker_eta_u_from_cycles(cycles):
    """U(t) = det(tI - P)/(t - 1) as integer coefficients (ascending), where
    det(tI - P) = prod over cycle lengths e of (t^e - 1)."""
    det = [1]
    for e in cycles:
        det = _poly_mul_z(det, [-1] + [0] * (e - 1) + [1])
    # exact division by (t - 1)
    u = [0] * (len(det) - 1)
    carry = 0
    for i in range(len(det) - 1, 0, -1):
        u[i - 1] = det[i] + carry
        carry = u[i - 1]
    assert det[0] + carry == 0, "det(tI - P) not divisible by t - 1"
    # reconstruction check: (t - 1) * U == det
    recon = _poly_mul_z([-1, 1], u)
    assert recon == det
    return u


def monic_closed_form_u(p: int, delta: int):
    """U(t) = prod_{i | delta, i > 1} (t^{k_i} - 1)^{phi(i)/k_i} for monic F,
    k_i the multiplicative order of p mod i."""
    u = [1]
    for i in range(2, delta + 1):
        if delta % i:
            continue
        phi = sum(1 for a in range(1, i + 1) if math.gcd(a, i) == 1)
        k = 1
        acc = p % i
        while acc != 1:
            acc = acc * p % i
            k += 1
        factor = [-1] + [0] * (k - 1) + [1]
        for _ in range(phi // k):
            u = _poly_mul_z(u, factor)
    return u


class CurveSpec:
    """Validated cyclic cover y^r = F(x) over F_p with its working ring."""

    def __init__(self, p, r, Fcoeffs, N_override=None):
        coeffs = [c % p for c in Fcoeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) != len(Fcoeffs) or not coeffs:
            raise LeadingCoeffVanishes(
                "leading coefficient of F vanishes mod p")
        d = len(coeffs) - 1
        if d < 1:
            raise DegenerateCover("F must be non-constant")
        if r < 2 or r + d < 5:
            raise DegenerateCover(f"r + d = {r + d} < 5 (or r < 2)")
        ring_p = RingCtx(p, 1)  # validates primality
        fbar = coeffs
        fbar_prime = fp_trim([(i * coeffs[i]) % p for i in range(1, d + 1)])
        if len(fp_gcd(fbar, fbar_prime, p)) != 1:
            raise NotSquarefree("F has a repeated root mod p")
        self.p = p
        self.r = r
        self.d = d
        self.delta = math.gcd(r, d)
        self.eps = 0 if self.delta == 1 else 1
        self.g = genus(d, r)
        self.N = N_override if N_override is not None else choose_precision(self.g, p)
        if self.N < 1:
            raise ValueError("N must be >= 1")
        bound = d * (self.N + self.eps) * r
        if p <= bound:
            raise PTooSmall(p, bound)
        self.W = self.N + 2
        self.ring = RingCtx(p, self.W)
        self.Fcoeffs = [c % self.ring.pW for c in Fcoeffs]  # lift of F mod p^W
        self.f_d = self.Fcoeffs[d]
        self.f_d_inv = pow(self.f_d, -1, self.ring.pW)
        # F = f_d x^d + P with deg P <= d - 1
        self.Pcoeffs = self.Fcoeffs[:d]
        self.cycles = _cycle_type(p, self.delta, self.f_d % p)
        del ring_p

    # -- basis bookkeeping ---------------------------------------------------

    def basis_j_range(self):
        return range(1 + self.eps * self.r, (1 + self.eps) * self.r)

    def basis(self):
        """Basis indices (i, j) for x^i dx / y^j, lexicographic in (j, i)."""
        return [(i, j) for j in self.basis_j_range() for i in range(self.d - 1)]

    def basis_size(self):
        return (self.d - 1) * (self.r - 1)

    def basis_column(self, i, j):
        jlo = 1 + self.eps * self.r
        return (j - jlo) * (self.d - 1) + i

    def ker_eta_charpoly(self):
        """U(t) as integer coefficients, ascending; degree delta - 1."""
        u = ker_eta_u_from_cycles(self.cycles)
        assert len(u) - 1 == self.delta - 1
        return u

    def ker_eta_power_sum(self, i: int) -> int:
        """Power sum of Frobenius eigenvalues on ker(eta): the cycle-type sum
        minus the eigenvalue 1 removed with the (t - 1) factor."""
        return sum(e for e in self.cycles if i % e == 0) - 1

    def __repr__(self):
        return (f"CurveSpec(p={self.p}, r={self.r}, d={self.d}, "
                f"g={self.g}, delta={self.delta}, N={self.N})")


def curve_new(p, r, Fcoeffs, N_override=None) -> CurveSpec:
    return CurveSpec(p, r, Fcoeffs, N_override)
