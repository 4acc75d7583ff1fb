"""Horizontal reduction: lower the x-degree of a differential at fixed
y-pole order t by the cohomology relation killing the top coefficient.

A vector in W_{s,t} holds the coefficients of G(x) x^s y^-t dx, ascending in
x, so index 0 is the coefficient of x^s.  One step maps W_{s,t} to
W_{s-1,t}: the matrix has D_H = (d(t-r) - rs) f_d on the subdiagonal and the
coefficients of C(x, s) = r s P(x) - (t-r) x P'(x) in the last column, all
divided by D_H.  Along the descent of the Frobenius terms the denominator is
divisible by p exactly at s = -d mod p (valuation exactly 1), which is
crossed once per macro-step; the computed numerator is asserted divisible.

Macro-step discipline (the "1-correct" bookkeeping): entering each level
the coefficient of x^{pl-1} is divisible by p and one digit more precise
than the rest; the d single steps, the unit interval product and the final
boundary step preserve that shape, which is re-asserted at each boundary.
"""

import logging

from .errors import (
    ConsistencyError,
    InexactDivision,
    PreconditionFailed,
    UnexpectedZeroDenominator,
)
from .linrec import LinMat, eval_intervals
from .padic import PElt, PMat, vandermonde_solve

log = logging.getLogger(__name__)


class WVec:
    """Differential G(x) x^s y^-t dx, deg G <= d-1, ascending coefficients."""

    __slots__ = ("s", "t", "coeffs")

    def __init__(self, s, t, coeffs):
        self.s = s
        self.t = t
        self.coeffs = list(coeffs)

    def residues(self, mod=None):
        m = mod if mod is not None else self.coeffs[0].ring.pW
        return [c.res % m for c in self.coeffs]


class HStep:
    """Sparse single-step data at (t, s): scalar D and last column C."""

    __slots__ = ("t", "s", "Dcore", "D", "C")

    def __init__(self, t, s, Dcore, D, C):
        self.t = t
        self.s = s
        self.Dcore = Dcore  # exact integer (d(t-r) - rs); D = Dcore * f_d mod p^W
        self.D = D
        self.C = C


def h_step_matrix(curve, t, s) -> HStep:
    ring = curve.ring
    Dcore = curve.d * (t - curve.r) - curve.r * s
    D = ring.elt(Dcore * curve.f_d)
    C = [ring.elt(c) for c in _c_row(curve, t, s)]
    return HStep(t, s, Dcore, D, C)


def _c_row(curve, t, s):
    pW = curve.ring.pW
    return [(P_h * (curve.r * s - (t - curve.r) * h)) % pW
            for h, P_h in enumerate(curve.Pcoeffs)]


def _single_step_raw(curve, t, s, v):
    """One reduction step W_{s,t} -> W_{s-1,t} on raw residues.

    Returns the new vector; divides by p exactly once when s = -d mod p.
    """
    p, pW = curve.p, curve.ring.pW
    d = curve.d
    Dcore = d * (t - curve.r) - curve.r * s
    if Dcore == 0:
        raise UnexpectedZeroDenominator(f"D_H = 0 at (t={t}, s={s})")
    crossing = Dcore % p == 0
    if crossing:
        if (s + d) % p != 0:
            raise UnexpectedZeroDenominator(
                f"p | D_H at s = {s} with s != -d mod p")
        if Dcore % (p * p) == 0:
            raise UnexpectedZeroDenominator(f"p^2 | D_H at (t={t}, s={s})")
    C = _c_row(curve, t, s)
    top = v[d - 1]
    out = [C[0] * top % pW]
    D = Dcore % pW * curve.f_d % pW
    for h in range(1, d):
        out.append((D * v[h - 1] + C[h] * top) % pW)
    if crossing:
        for c in out:
            if c % p:
                raise InexactDivision(
                    f"numerator not divisible by p at crossing s = {s}")
        out = [c // p for c in out]
        Dunit = (Dcore // p) % pW * curve.f_d % pW
    else:
        Dunit = D
    inv = pow(Dunit, -1, pW)
    return [c * inv % pW for c in out]


def h_reduce_one(curve, v: WVec) -> WVec:
    """Single step with precision propagation (min of inputs, minus one
    digit when the denominator is divisible by p)."""
    ring = curve.ring
    raw = _single_step_raw(curve, v.t, v.s, v.residues())
    Dcore = curve.d * (v.t - curve.r) - curve.r * v.s
    prec = min(c.prec for c in v.coeffs)
    if Dcore % curve.p == 0:
        prec -= 1
    return WVec(v.s - 1, v.t, [PElt(ring, c, prec) for c in raw])


def _h_linmat(curve, t) -> LinMat:
    ring = curve.ring
    d = curve.d
    pW = ring.pW
    M0 = [[0] * d for _ in range(d)]
    M1 = [[0] * d for _ in range(d)]
    subdiag0 = d * (t - curve.r) % pW * curve.f_d % pW
    subdiag1 = (-curve.r) % pW * curve.f_d % pW
    for h in range(1, d):
        M0[h][h - 1] = subdiag0
        M1[h][h - 1] = subdiag1
    for h, P_h in enumerate(curve.Pcoeffs):
        M0[h][d - 1] = (-(t - curve.r) * h * P_h) % pW
        M1[h][d - 1] = curve.r * P_h % pW
    return LinMat.from_ints(ring, M0, M1)


def _d_linmat(curve, t) -> LinMat:
    ring = curve.ring
    pW = ring.pW
    D0 = [[curve.d * (t - curve.r) % pW * curve.f_d % pW]]
    D1 = [[(-curve.r) % pW * curve.f_d % pW]]
    return LinMat.from_ints(ring, D0, D1)


def h_interval_matrices(curve, t, L, strategy="bsgs"):
    """(D(l), M(l)) for l = 0..L with M(l) = M_H^t(pl, p(l+1)-d-1); the
    intervals avoid the p-divisible denominator positions entirely."""
    p, d = curve.p, curve.d
    lin = _h_linmat(curve, t)
    dlin = _d_linmat(curve, t)
    intervals = [(p * l, p * (l + 1) - d - 1) for l in range(L + 1)]
    K = p * (L + 1)
    mats = eval_intervals(lin, intervals, K=K, strategy=strategy)
    dens = eval_intervals(dlin, intervals, K=K, strategy=strategy)
    out = []
    for M, Dm in zip(mats, dens):
        Dv = Dm.rows[0][0]
        if not Dv.is_unit():
            raise UnexpectedZeroDenominator(
                "interval denominator product not a unit")
        out.append((Dv, M))
    return out


def h_interpolate(curve, t, known, targets):
    """Interpolate (D(l), M(l)) mod p^N at the target indices from the known
    ones; the product over an interval of p consecutive steps is polynomial
    of degree < N in the interval index l mod p^N."""
    ring = curve.ring
    N = curve.N
    if not targets:
        return []
    nodes = [ring.elt(l, prec=N) for l, _, _ in known]
    dvals = [PMat(ring, [[ring.elt(D.res, prec=N)]]) for _, D, _ in known]
    mvals = [PMat.from_ints(ring, M.residues(), prec=N) for _, _, M in known]
    dpoly = vandermonde_solve(nodes, dvals)
    mpoly = vandermonde_solve(nodes, mvals)

    def horner(coeffs, x):
        acc = coeffs[-1]
        for c in reversed(coeffs[:-1]):
            acc = acc.scale(x) + c
        return acc

    out = []
    for l in targets:
        x = ring.elt(l, prec=N)
        Dm = horner(dpoly, x).rows[0][0]
        Mm = horner(mpoly, x)
        if not Dm.is_unit():
            raise UnexpectedZeroDenominator(
                "interpolated denominator not a unit")
        out.append((Dm, Mm))
    return out


class StripPlan:
    """Shared per-(k, j) machinery: the matrix family at t = p(kr+j) and the
    interval products (direct, interpolated, or applied stepwise)."""

    def __init__(self, curve, j, k, strategy, interpolation=True):
        self.curve = curve
        self.k = k
        self.t = curve.p * (k * curve.r + j)
        self.lmax = curve.d * k + curve.d - 2
        self.strategy = strategy
        self.lin = _h_linmat(curve, self.t)
        self.ops = None
        self.used_interpolation = False
        if strategy == "bsgs":
            self._build_interval_ops(interpolation)

    def _build_interval_ops(self, interpolation):
        curve = self.curve
        N, pW = curve.N, curve.ring.pW
        L = min(N - 1, self.lmax)
        interp = interpolation and L < self.lmax
        direct_hi = min(L + 1, self.lmax) if interp else self.lmax
        try:
            pairs = h_interval_matrices(curve, self.t, direct_hi, "bsgs")
        except PreconditionFailed as exc:
            log.info("bsgs preconditions failed (%s); intervals stepwise", exc)
            self.strategy = "naive"
            return
        ops = [(M.residues(), pow(D.res, -1, pW)) for D, M in pairs]
        if interp and self.lmax > L:
            known = [(l, pairs[l][0], pairs[l][1]) for l in range(L + 1)]
            check = h_interpolate(curve, self.t, known, [L + 1])
            ok = (check[0][0] == pairs[L + 1][0]
                  and check[0][1] == pairs[L + 1][1])
            if ok:
                rest = h_interpolate(curve, self.t, known,
                                     list(range(L + 2, self.lmax + 1)))
                self.used_interpolation = True
            else:
                log.warning("interpolation self-check failed at t=%d; "
                            "falling back to direct products", self.t)
                extra = h_interval_matrices(curve, self.t, self.lmax, "bsgs")
                rest = extra[L + 2:]
            ops.extend((M.residues(), pow(D.res, -1, pW)) for D, M in rest)
        self.ops = ops

    def single_step(self, v, s):
        return _single_step_raw(self.curve, self.t, s, v)

    def apply_interval(self, v, l):
        curve = self.curve
        p, pW, d = curve.p, curve.ring.pW, curve.d
        if self.ops is not None:
            Mraw, Dinv = self.ops[l]
            out = [sum(row[h] * v[h] for h in range(d)) % pW for row in Mraw]
            return [c * Dinv % pW for c in out]
        dacc = 1
        for s in range(p * (l + 1) - d - 1, p * l, -1):
            v = self.lin.apply_left_vec(v, s)
            dacc = dacc * (d * (self.t - curve.r) - curve.r * s) % pW
        dacc = dacc * pow(curve.f_d, p - d - 1, pW) % pW
        if dacc % p == 0:
            raise UnexpectedZeroDenominator(
                "interval denominator product not a unit")
        inv = pow(dacc, -1, pW)
        return [c * inv % pW for c in v]


def h_reduce_full(curve, i, j, k, terms, strategy="naive", plan=None):
    """Descend the level-k Frobenius terms of basis element (i, j) to
    W_{-1, t}, t = p(kr+j), injecting mu at each x^{pl-1} boundary.

    Returns the raw coordinate list; index 0 (the x^-1 slot) is exactly 0.
    """
    if plan is None:
        plan = StripPlan(curve, j, k, strategy)
    p, pW, d = curve.p, curve.ring.pW, curve.d
    mu = terms.mu[k]
    lmax = d * k + i + 1
    v = [0] * d
    v[0] = mu[d * k]
    for l in range(lmax - 1, -1, -1):
        for e in range(1, d + 1):
            v = plan.single_step(v, p * (l + 1) - e)
        v = plan.apply_interval(v, l)
        v = plan.single_step(v, p * l)
        b = l - i - 1
        if b >= 0:
            v[0] = (v[0] + mu[b]) % pW
        if v[0] % p:
            raise ConsistencyError(
                f"1-correctness violated at level l={l} (t={plan.t})")
    if v[0] != 0:
        raise ConsistencyError("x^-1 coefficient of the reduced form nonzero")
    return v


def h_reduce_poly(curve, acoeffs, t):
    """Reduce A(x) y^-t dx (arbitrary degree) to W_{-1,t} by single steps,
    absorbing each coefficient of x^s as the window reaches it.  Test-support
    path; divisions must be exact for the given input."""
    pW, d = curve.ring.pW, curve.d
    A = [c % pW for c in acoeffs]
    while A and A[-1] == 0:
        A.pop()
    if len(A) <= d - 1:
        return [0] + A + [0] * (d - 1 - len(A))
    s = len(A) - d
    v = A[s:]
    while s > -1:
        v = _single_step_raw(curve, t, s, v)
        s -= 1
        if s >= 0:
            v[0] = (v[0] + A[s]) % pW
    return v
