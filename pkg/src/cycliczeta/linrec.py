"""Ordered interval products of an index-affine matrix M(x) = M0 + x*M1.

``eval_intervals`` computes M(a, b) := M(a+1) M(a+2) ... M(b) for a sorted set
of disjoint intervals inside [0, K], either naively (left-to-right,
sparsity-aware) or in ~sqrt(K) matrix products: blocks
Q(x) = M(x+1)...M(x+B) with B ~ sqrt(K) are evaluated on the progression
{0, B, 2B, ...} by repeated doubling, where each doubling step extends the
current equispaced samples with Lagrange shifts computed through a single
integer-packed convolution per matrix entry.  All arithmetic is exact mod
p^W, so both strategies return bit-identical results.
"""

from .errors import PreconditionFailed
from .padic import PMat, RingCtx

try:  # GMP multiplication, if available, for the packed convolutions
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = int


def mat_mul_raw(A, B, mod):
    Bt = list(zip(*B))
    return [[sum(x * y for x, y in zip(row, col)) % mod for col in Bt] for row in A]


def mat_identity_raw(m):
    return [[1 if i == j else 0 for j in range(m)] for i in range(m)]


def _pack(seq, slot_bytes):
    buf = bytearray(slot_bytes * len(seq))
    for i, c in enumerate(seq):
        buf[i * slot_bytes:(i + 1) * slot_bytes] = c.to_bytes(slot_bytes, "little")
    return int.from_bytes(buf, "little")


def _shift_values(ring: RingCtx, vals, S, m):
    """Given a degree-<=D matrix polynomial's values at grid points 0..D,
    return its values at S..S+D (grid units).  Exact mod p^W; requires the
    window [S-D, S+D] to avoid 0 mod p, which holds when D < S and S+D < p.
    """
    D = len(vals) - 1
    p, pW = ring.p, ring.pW
    if not (S >= D + 1 and S + D < p):
        raise PreconditionFailed(
            f"shift window [{S - D}, {S + D}] not invertible for p = {p}")
    fact = [1] * (D + 1)
    for a in range(1, D + 1):
        fact[a] = fact[a - 1] * a % pW
    invfact = [0] * (D + 1)
    invfact[D] = pow(fact[D], -1, pW)
    for a in range(D, 0, -1):
        invfact[a - 1] = invfact[a] * a % pW
    wden = []
    for a in range(D + 1):
        c = invfact[a] * invfact[D - a] % pW
        wden.append((pW - c) % pW if (D - a) & 1 else c)
    z = [pow(S + e, -1, pW) for e in range(-D, D + 1)]
    # Pi(c) = prod_{b=0..D} (S + c - b), maintained by a sliding window
    pi = [0] * (D + 1)
    acc = 1
    for b in range(D + 1):
        acc = acc * (S - b) % pW
    pi[0] = acc
    for c in range(1, D + 1):
        acc = acc * (S + c) % pW
        acc = acc * z[c - 1] % pW  # z[c-1] = inv(S + c - 1 - D)
        pi[c] = acc
    bound = (D + 1) * (pW - 1) * (pW - 1) + 1
    slot_bytes = (bound.bit_length() + 8) // 8 + 1
    zpacked = _mpz(_pack(z, slot_bytes))
    out = [[[0] * m for _ in range(m)] for _ in range(D + 1)]
    for u in range(m):
        for v in range(m):
            xs = [vals[a][u][v] * wden[a] % pW for a in range(D + 1)]
            prod = int(_mpz(_pack(xs, slot_bytes)) * zpacked)
            data = prod.to_bytes(slot_bytes * (3 * D + 2), "little")
            for c in range(D + 1):
                t = c + D
                coeff = int.from_bytes(
                    data[t * slot_bytes:(t + 1) * slot_bytes], "little")
                out[c][u][v] = coeff % pW * pi[c] % pW
    return out


class LinMat:
    """M(x) = M0 + x*M1, square of size m over Z/p^W."""

    def __init__(self, M0: PMat, M1: PMat):
        if M0.nrows != M0.ncols or M1.nrows != M1.ncols or M0.nrows != M1.nrows:
            raise ValueError("LinMat requires equal square matrices")
        self.ring = M0.ring
        self.m = M0.nrows
        self.prec = min(M0.min_prec(), M1.min_prec())
        self.M0r = M0.residues()
        self.M1r = M1.residues()
        m = self.m
        self.col_support = [
            [i for i in range(m) if self.M0r[i][j] or self.M1r[i][j]]
            for j in range(m)]
        self.row_support = [
            [j for j in range(m) if self.M0r[i][j] or self.M1r[i][j]]
            for i in range(m)]

    @classmethod
    def from_ints(cls, ring, M0_rows, M1_rows):
        return cls(PMat.from_ints(ring, M0_rows), PMat.from_ints(ring, M1_rows))

    def eval_at(self, x):
        pW = self.ring.pW
        return [[(self.M0r[i][j] + x * self.M1r[i][j]) % pW for j in range(self.m)]
                for i in range(self.m)]

    def apply_right(self, X, x):
        """X @ M(x), exploiting the column sparsity of (M0, M1)."""
        pW = self.ring.pW
        m = self.m
        out = [[0] * m for _ in range(m)]
        for j in range(m):
            sup = self.col_support[j]
            if not sup:
                continue
            ent = [(i, (self.M0r[i][j] + x * self.M1r[i][j]) % pW) for i in sup]
            for r in range(m):
                Xr = X[r]
                out[r][j] = sum(Xr[i] * e for i, e in ent) % pW
        return out

    def apply_left_vec(self, v, x):
        """M(x) @ v, exploiting the row sparsity of (M0, M1)."""
        pW = self.ring.pW
        m0, m1 = self.M0r, self.M1r
        return [sum((m0[i][j] + x * m1[i][j]) * v[j] for j in self.row_support[i]) % pW
                for i in range(self.m)]


def _check_interval_set(intervals, K):
    prev_end = -1
    for a, b in intervals:
        if not (0 <= a <= b <= K):
            raise ValueError(f"interval ({a}, {b}) outside [0, {K}]")
        if a < prev_end:
            raise ValueError("intervals must be sorted and non-overlapping")
        prev_end = b


def _block_values(lin: LinMat, B, T):
    """Values of Q_B(x) = M(x+1)...M(x+B) at x = 0, B, ..., (T-1)B."""
    ring, m, pW = lin.ring, lin.m, lin.ring.pW
    vals = [lin.eval_at(1), lin.eval_at(2)]
    h = 1
    while h < B:
        w1 = _shift_values(ring, vals, h + 1, m)
        w2 = _shift_values(ring, vals, 2 * h + 2, m)
        w3 = _shift_values(ring, vals, 3 * h + 3, m)
        allv = vals + w1 + w2 + w3  # P_h at grid j*h, j = 0..4h+3
        vals = [mat_mul_raw(allv[2 * j], allv[2 * j + 1], pW) for j in range(2 * h + 1)]
        h *= 2
    # vals: Q_B at 0, B, ..., B*B (grid step B)
    if T > len(vals):
        base = vals[:B + 1]
        S = B + 1
        while len(vals) < T:
            vals.extend(_shift_values(ring, base, S, m))
            S += B + 1
    return vals[:T]


def naive_interval_product(lin: LinMat, a, b):
    X = mat_identity_raw(lin.m)
    for s in range(a + 1, b + 1):
        X = lin.apply_right(X, s)
    return X


def _eval_intervals_raw(lin: LinMat, intervals, K, strategy):
    if strategy == "naive":
        return [naive_interval_product(lin, a, b) for a, b in intervals]
    if strategy != "bsgs":
        raise ValueError(f"unknown strategy {strategy!r}")
    p = lin.ring.p
    h = len(intervals)
    if h * h >= K:
        raise PreconditionFailed(f"interval count {h} >= sqrt(K = {K})")
    if K >= (p - 1) * (p - 1):
        raise PreconditionFailed(f"sqrt(K = {K}) >= p - 1")
    B = 1 << max(1, K.bit_length() // 2)
    T = max(b // B for _, b in intervals) if intervals else 0
    # shift windows touched: doubling up to 4h+3 grid units (h = B/2), then
    # extension windows ending near T + B; all must stay below p
    if max(2 * B + 3, T + 2 * B + 3) >= p:
        raise PreconditionFailed(f"block size {B} too large for p = {p}")
    blocks = _block_values(lin, B, T) if T > 0 else []
    pW = lin.ring.pW
    out = []
    for a, b in intervals:
        X = mat_identity_raw(lin.m)
        j = -(-a // B)  # first block index with j*B >= a
        head_end = min(b, j * B)
        for s in range(a + 1, head_end + 1):
            X = lin.apply_right(X, s)
        while (j + 1) * B <= b:
            X = mat_mul_raw(X, blocks[j], pW)
            j += 1
        for s in range(max(a, j * B) + 1, b + 1):
            X = lin.apply_right(X, s)
        out.append(X)
    return out


def eval_intervals(lin: LinMat, intervals, K=None, strategy="bsgs"):
    """Products M(a+1)...M(b) for each (a, b) in the interval set.

    bsgs raises PreconditionFailed when its hypotheses fail; callers fall
    back to naive.  Both strategies agree bit-for-bit mod p^W.
    """
    intervals = list(intervals)
    if K is None:
        K = max((b for _, b in intervals), default=0)
    _check_interval_set(intervals, K)
    raw = _eval_intervals_raw(lin, intervals, K, strategy)
    return [PMat.from_ints(lin.ring, X, lin.prec) for X in raw]
