"""Brute-force point counting on the smooth model over F_{p^e}, e <= 3.

Counts, for every x in the field, the solutions of y^r = F(x): one point
when F(x) = 0, otherwise gcd(r, q-1) points exactly when F(x) is a
gcd(r, q-1)-th power, detected by an Euler-criterion power.  Points at
infinity are the solutions of z^delta = f_d.  Vectorized with numpy over
chunks of the field; extension fields use coordinate arrays modulo a
deterministically chosen irreducible.
"""

import math

import numpy as np

from .errors import TooLarge

_CHUNK = 1 << 19


def least_irreducible(p: int, deg: int):
    """Non-leading coefficients (ascending) of the lexicographically least
    monic irreducible of degree deg over F_p; degree <= 3 so irreducible
    means root-free."""
    if deg == 1:
        return [0]
    xs = np.arange(p, dtype=np.int64)
    for idx in range(p**deg):
        c = [(idx // p**t) % p for t in range(deg)]
        acc = np.ones_like(xs)
        for t in range(deg - 1, -1, -1):
            acc = (acc * xs + c[t]) % p
        if not np.any(acc == 0):
            return c
    raise AssertionError("no irreducible polynomial found")


class SmallField:
    """F_{p^e} with elements as coordinate arrays mod the modulus poly."""

    def __init__(self, p, e, modulus=None):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = least_irreducible(p, e) if modulus is None else modulus
        # reduction table: coordinates of T^(e+k) for k = 0..e-2
        red = []
        cur = [(-c) % p for c in self.modulus]
        red.append(cur[:])
        for _ in range(e - 2):
            nxt = [0] + cur[:-1]
            nxt = [(nxt[t] + cur[-1] * red[0][t]) % p for t in range(e)]
            cur = nxt
            red.append(cur[:])
        self.red = red

    def elements(self, lo, hi):
        """Coordinate arrays of field elements with index in [lo, hi)."""
        idx = np.arange(lo, hi, dtype=np.int64)
        return [(idx // self.p**t) % self.p for t in range(self.e)]

    def mul(self, a, b):
        p, e = self.p, self.e
        conv = [None] * (2 * e - 1)
        for s in range(e):
            for t in range(e):
                term = a[s] * b[t] % p
                k = s + t
                conv[k] = term if conv[k] is None else (conv[k] + term) % p
        out = [conv[t] for t in range(e)]
        for k in range(e, 2 * e - 1):
            row = self.red[k - e]
            for t in range(e):
                if row[t]:
                    out[t] = (out[t] + conv[k] * row[t]) % p
        return out

    def add_scalar(self, a, c):
        out = list(a)
        out[0] = (out[0] + c) % self.p
        return out

    def is_zero(self, a):
        nz = a[0] != 0
        for t in range(1, self.e):
            nz = nz | (a[t] != 0)
        return ~nz

    def is_one(self, a):
        ok = a[0] == 1
        for t in range(1, self.e):
            ok = ok & (a[t] == 0)
        return ok

    def pow(self, a, n):
        out = None
        base = a
        while n:
            if n & 1:
                out = base if out is None else self.mul(out, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        if out is None:
            return [np.ones_like(a[0])] + [np.zeros_like(a[0])] * (self.e - 1)
        return out


def count_points(curve, ext: int, modulus=None) -> int:
    """#C(F_{p^ext}) on the smooth model, by enumeration; needs p^ext <= 1e8."""
    p = curve.p
    q = p**ext
    if q > 10**8:
        raise TooLarge(f"p^{ext} = {q} exceeds the enumeration guard")
    field = SmallField(p, ext, modulus)
    fcoeffs = [c % p for c in curve.Fcoeffs]
    m = math.gcd(curve.r, q - 1)
    epow = (q - 1) // m
    total = 0
    for lo in range(0, q, _CHUNK):
        hi = min(q, lo + _CHUNK)
        x = field.elements(lo, hi)
        acc = [np.zeros(hi - lo, dtype=np.int64) for _ in range(ext)]
        for c in reversed(fcoeffs):
            acc = field.add_scalar(field.mul(acc, x), c)
        zero = field.is_zero(acc)
        total += int(np.count_nonzero(zero))
        powv = field.pow(acc, epow)
        is_mth = field.is_one(powv) & ~zero
        total += m * int(np.count_nonzero(is_mth))
    # points at infinity: solutions of z^delta = f_d
    minf = math.gcd(curve.delta, q - 1)
    fd = curve.f_d % p
    # f_d is an m-th power in F_q iff f_d^((q-1)/minf) = 1; f_d lives in F_p
    fdv = [np.array([fd], dtype=np.int64)] + \
        [np.zeros(1, dtype=np.int64) for _ in range(ext - 1)]
    if bool(field.is_one(field.pow(fdv, (q - 1) // minf))[0]):
        total += minf
    return total
