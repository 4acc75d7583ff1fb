"""Vertical reduction: lower the y-pole order in batches of p levels.

Vectors live in V_t = W_{-1, rt+j} ∩ W_{0, rt+j} (dimension d-1).  The step
V_t -> V_{t-1} has matrix columns built from the Bezout data
x^i = R_i F + S_i F', namely (rt - r + j) R_i + r S_i', with scalar
denominator D_V = rt - r + j.  Levels are aligned so that every length-p
batch starts at r*t1 = -j mod p, where the batch product is divisible by p
(asserted) and the batch carries exactly one p in its denominator: the
quotient matrix Y is integral and one digit of precision pays for the
division.
"""

import logging

from .errors import (
    IntegralityViolation,
    PreconditionFailed,
    UnexpectedZeroDenominator,
)
from .linrec import LinMat, eval_intervals, mat_identity_raw
from .padic import PElt, PMat, poly_xgcd_lift

log = logging.getLogger(__name__)


class VVec:
    """Differential G(x) y^-(rt+j) dx with deg G <= d-2."""

    __slots__ = ("j", "t", "coeffs")

    def __init__(self, j, t, coeffs):
        self.j = j
        self.t = t
        self.coeffs = list(coeffs)

    def residues(self, mod=None):
        m = mod if mod is not None else self.coeffs[0].ring.pW
        return [c.res % m for c in self.coeffs]


def _bezout_all(curve):
    """(R_i, S_i) raw coefficient lists with x^i = R_i F + S_i F' mod p^W,
    deg R_i < d-1, deg S_i < d.  Cached on the curve."""
    cached = getattr(curve, "_bezout", None)
    if cached is not None:
        return cached
    ring = curve.ring
    pW = ring.pW
    d = curve.d
    F = ring.poly(curve.Fcoeffs)
    Fp = F.derivative()
    R0, S0 = poly_xgcd_lift(ring, F, Fp)
    out = []
    for i in range(d - 1):
        xi = ring.poly([0] * i + [1])
        T, S = (xi * S0).divmod_unit(F)
        R = xi * R0 + T * Fp  # A = (A R0 + T F')F + S F' given A S0 = T F + S
        Rraw = [c.res for c in R.coeffs]
        Sraw = [c.res for c in S.coeffs]
        assert all(c == 0 for c in Rraw[d - 1:]), "deg R_i bound violated"
        assert all(c == 0 for c in Sraw[d:]), "deg S_i bound violated"
        Rraw = (Rraw + [0] * (d - 1))[:d - 1]
        Sraw = (Sraw + [0] * d)[:d]
        # defining identity, exact mod p^W
        lhs = [0] * (2 * d)
        for a, c in enumerate(Rraw):
            for b, f in enumerate(curve.Fcoeffs):
                lhs[a + b] = (lhs[a + b] + c * f) % pW
        for a, c in enumerate(Sraw):
            for b in range(1, d + 1):
                lhs[a + b - 1] = (lhs[a + b - 1] + c * b * curve.Fcoeffs[b]) % pW
        lhs[i] = (lhs[i] - 1) % pW
        assert all(c == 0 for c in lhs), "Bezout identity violated"
        out.append((Rraw, Sraw))
    curve._bezout = out
    return out


def bezout_RS(curve, i):
    """(R_i, S_i) as polynomials over Z/p^W."""
    Rraw, Sraw = _bezout_all(curve)[i]
    return curve.ring.poly(Rraw), curve.ring.poly(Sraw)


def _v_linmat(curve, j) -> LinMat:
    """M_V^j(t) = M0 + t*M1 acting on V-spaces of dimension d-1."""
    ring = curve.ring
    pW = ring.pW
    d1 = curve.d - 1
    bez = _bezout_all(curve)
    M0 = [[0] * d1 for _ in range(d1)]
    M1 = [[0] * d1 for _ in range(d1)]
    for i in range(d1):
        Rraw, Sraw = bez[i]
        for a in range(d1):
            M0[a][i] = ((j - curve.r) * Rraw[a]
                        + curve.r * (a + 1) * Sraw[a + 1]) % pW
            M1[a][i] = curve.r * Rraw[a] % pW
    return LinMat.from_ints(ring, M0, M1)


class VStep:
    __slots__ = ("j", "t", "D", "M")

    def __init__(self, j, t, D, M):
        self.j = j
        self.t = t
        self.D = D
        self.M = M


def v_step_matrix(curve, j, t) -> VStep:
    lin = _v_linmat(curve, j)
    D = curve.ring.elt(curve.r * t - curve.r + j)
    return VStep(j, t, D, PMat.from_ints(curve.ring, lin.eval_at(t)))


def _det_mod_p(rows, p):
    n = len(rows)
    a = [[c % p for c in row] for row in rows]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col] % p
        inv = pow(a[col][col], -1, p)
        for r in range(col + 1, n):
            f = a[r][col] * inv % p
            if f:
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[col])]
    return det % p


class VerticalFamily:
    """Per-j vertical machinery: level decomposition and batch operators."""

    def __init__(self, curve, j, strategy="naive", N=None):
        p, r = curve.p, curve.r
        self.curve = curve
        self.j = j
        self.N = curve.N if N is None else N
        self.beta = p * j % r
        alpha = p * j // r
        self.lam = (alpha - curve.eps) // p
        gamma = (alpha - curve.eps) % p
        self.delta_loc = gamma + curve.eps
        # batch-alignment invariants (integer identities)
        assert p * j == r * (p * self.lam + self.delta_loc) + self.beta
        assert (r * self.delta_loc + self.beta) % p == 0
        self.lin = _v_linmat(curve, self.beta)
        self.strategy = strategy
        self.align_op = None
        self.batch_ops = None
        if strategy == "bsgs":
            try:
                self._build_ops()
            except PreconditionFailed as exc:
                log.info("vertical bsgs preconditions failed (%s); "
                         "falling back to stepwise", exc)
                self.strategy = "naive"

    def _crossing(self, l):
        """Exact crossing data for batch l: the first factor D_V(t1+1)."""
        t1 = self.delta_loc + self.curve.p * (l - 1)
        fstar = self.curve.r * t1 + self.beta
        return t1, fstar

    def _check_crossing(self, l):
        p = self.curve.p
        t1, fstar = self._crossing(l)
        if fstar % p != 0 or (fstar // p) % p == 0:
            raise IntegralityViolation(
                f"batch denominator at t1={t1} has p-valuation != 1")
        if _det_mod_p(self.lin.eval_at(t1 + 1), p) == 0:
            raise IntegralityViolation(
                f"M_V({t1 + 1}) singular mod p despite r*t = -j alignment")
        return t1, fstar

    def _build_ops(self):
        curve = self.curve
        p, pW = curve.p, curve.ring.pW
        nb = self.lam + self.N - 1
        intervals = []
        if self.delta_loc > curve.eps:
            intervals.append((curve.eps, self.delta_loc))
        for l in range(1, nb + 1):
            intervals.append((self.delta_loc + p * (l - 1), self.delta_loc + p * l))
        K = self.delta_loc + p * nb if nb else self.delta_loc
        mats = eval_intervals(self.lin, intervals, K=max(K, 1), strategy="bsgs")
        dlin = LinMat.from_ints(curve.ring, [[(self.beta - curve.r) % pW]],
                                [[curve.r % pW]])
        dints = []
        if self.delta_loc > curve.eps:
            dints.append((curve.eps, self.delta_loc))
        for l in range(1, nb + 1):
            t1 = self.delta_loc + p * (l - 1)
            dints.append((t1 + 1, self.delta_loc + p * l))
        dens = eval_intervals(dlin, dints, K=max(K, 1), strategy="bsgs")
        off = 0
        if self.delta_loc > curve.eps:
            Dv = dens[0].rows[0][0].res
            if Dv % p == 0:
                raise UnexpectedZeroDenominator(
                    "alignment denominator product not a unit")
            self.align_op = (mats[0].residues(), pow(Dv, -1, pW))
            off = 1
        else:
            self.align_op = (mat_identity_raw(curve.d - 1), 1)
        self.batch_ops = []
        for l in range(1, nb + 1):
            t1, fstar = self._check_crossing(l)
            Mraw = mats[off + l - 1].residues()
            rest = dens[off + l - 1].rows[0][0].res
            if rest % p == 0:
                raise UnexpectedZeroDenominator(
                    "batch denominator tail not a unit")
            for row in Mraw:
                for c in row:
                    if c % p:
                        raise IntegralityViolation(
                            f"batch product at t1={t1} not zero mod p")
            dunit = (fstar // p) % pW * rest % pW
            inv = pow(dunit, -1, pW)
            Y = [[c // p * inv % pW for c in row] for row in Mraw]
            self.batch_ops.append(Y)

    def _apply_matrix(self, Mraw, v):
        pW = self.curve.ring.pW
        return [sum(x * y for x, y in zip(row, v)) % pW for row in Mraw]

    def _apply_batch(self, v, l):
        curve = self.curve
        p, pW = curve.p, curve.ring.pW
        if self.batch_ops is not None:
            return self._apply_matrix(self.batch_ops[l - 1], v)
        t1, fstar = self._check_crossing(l)
        t2 = self.delta_loc + p * l
        dacc = 1
        for t in range(t2, t1 + 1, -1):
            v = self.lin.apply_left_vec(v, t)
            dacc = dacc * (curve.r * t - curve.r + self.beta) % pW
        if dacc % p == 0:
            raise UnexpectedZeroDenominator("batch denominator tail not a unit")
        v = self.lin.apply_left_vec(v, t1 + 1)
        if any(c % p for c in v):
            raise IntegralityViolation(
                f"stepwise batch at t1={t1} not divisible by p")
        inv = pow(dacc * ((fstar // p) % pW) % pW, -1, pW)
        return [c // p * inv % pW for c in v]

    def _apply_align(self, v):
        curve = self.curve
        p, pW = curve.p, curve.ring.pW
        if self.align_op is not None:
            Mraw, inv = self.align_op
            return [c * inv % pW for c in self._apply_matrix(Mraw, v)]
        dacc = 1
        for t in range(self.delta_loc, curve.eps, -1):
            v = self.lin.apply_left_vec(v, t)
            dacc = dacc * (curve.r * t - curve.r + self.beta) % pW
        if dacc % p == 0:
            raise UnexpectedZeroDenominator("alignment denominator not a unit")
        inv = pow(dacc, -1, pW)
        return [c * inv % pW for c in v]

    def reduce(self, w_by_k):
        """Descend {k: vector at level p(k+lam)+delta_loc} to pole order
        eps*r + beta, injecting each vector at its level."""
        curve = self.curve
        pW = curve.ring.pW
        d1 = curve.d - 1
        v = [0] * d1
        Ktop = self.N - 1 + self.lam
        for K in range(Ktop, 0, -1):
            m = K - self.lam
            w = w_by_k.get(m)
            if w is not None:
                v = [(x + y) % pW for x, y in zip(v, w)]
            v = self._apply_batch(v, K)
        if self.lam == 0:
            w = w_by_k.get(0)
            if w is not None:
                v = [(x + y) % pW for x, y in zip(v, w)]
        v = self._apply_align(v)
        return v


def v_batch_matrices(curve, j, strategy="bsgs", N=None):
    """The alignment operator M(0) and the integral batch operators Y(l),
    l = 1..lam+N-1, as PMat (batches carry precision N+1)."""
    fam = VerticalFamily(curve, j, strategy="bsgs" if strategy == "bsgs" else "naive",
                         N=N)
    ring = curve.ring
    if fam.batch_ops is None:
        # build stepwise for inspection
        nb = fam.lam + fam.N - 1
        ops = []
        for l in range(1, nb + 1):
            rows = [fam._apply_batch([1 if a == b else 0 for a in range(curve.d - 1)], l)
                    for b in range(curve.d - 1)]
            ops.append([list(col) for col in zip(*rows)])
        align = [list(col) for col in zip(
            *[fam._apply_align([1 if a == b else 0 for a in range(curve.d - 1)])
              for b in range(curve.d - 1)])]
    else:
        ops = fam.batch_ops
        Mraw, inv = fam.align_op
        align = [[c * inv % ring.pW for c in row] for row in Mraw]
    out = [PMat.from_ints(ring, align, prec=ring.W)]
    out.extend(PMat.from_ints(ring, Y, prec=min(ring.W - 1, fam.N + 1)) for Y in ops)
    return out, fam


def v_reduce(curve, j, w_by_k, strategy="naive") -> VVec:
    """Reduce the map k -> W_{-1, p(kr+j)} coordinate
    vectors (x^-1 slot dropped) to the final V-vector at pole eps*r + beta."""
    fam = VerticalFamily(curve, j, strategy)
    raw = fam.reduce(w_by_k)
    prec = min(curve.N, curve.ring.W)
    return VVec(fam.beta, curve.eps,
                [PElt(curve.ring, c, prec) for c in raw])


def check_almost_integrality(curve, j, t1, t2):
    """p * D_V(t1,t2)^-1 M_V(t1,t2) has nonnegative valuations: verify
    min valuation of the matrix product plus one is at least v_p of the
    scalar product.  Naive product; intended for sampled intervals within
    a run's level range (the claim needs r*t + j < p^2 on the interval)."""
    lin = _v_linmat(curve, j)
    p, pW = curve.p, curve.ring.pW
    X = mat_identity_raw(curve.d - 1)
    vD = 0
    for t in range(t1 + 1, t2 + 1):
        X = lin.apply_right(X, t)
        f = curve.r * t - curve.r + j
        while f % p == 0:
            vD += 1
            f //= p
    vmin = min(curve.ring.val(c) for row in X for c in row)
    return vmin + 1 >= vD
