"""Sparse expansion of the Frobenius image of a basis differential.

For the prime-field case the Frobenius lift sends x to x^p and fixes the
coefficient ring, so sigma(F)^l is just F^l with x replaced by x^p.  The
image of x^i y^-j dx is, up to terms reducing into p^N * (basis span),

    sum_{l < N} sum_{b <= d*l}  mu[j][l][b] * x^(p(i+1)-1+pb) * y^(-p(j+lr)) dx

with mu[j][l][b] = p * D(j, l) * (F^l)_b and D(j, l) the truncated binomial
transform of binom(-j/r, k).  Every mu carries the explicit factor p.
"""

import math

from .padic import PElt, RingCtx


def binom_frac(j: int, r: int, k: int, ctx: RingCtx) -> PElt:
    """binom(-j/r, k) = prod_{m<k} (-j/r - m) / k! in Z/p^W; needs k < p."""
    pW = ctx.pW
    rinv = pow(r % pW, -1, pW)
    num = 1
    fact = 1
    for m in range(k):
        num = num * ((-j * rinv - m) % pW) % pW
        fact = fact * (m + 1) % pW
    return ctx.elt(num * pow(fact, -1, pW))


def compute_D(j: int, l: int, N: int, r: int, ctx: RingCtx) -> PElt:
    """D(j, l) = sum_{k=l}^{N-1} (-1)^(k-l) binom(-j/r, k) binom(k, l)."""
    acc = ctx.zero()
    for k in range(l, N):
        term = binom_frac(j, r, k, ctx) * math.comb(k, l)
        acc = acc + (term if (k - l) % 2 == 0 else -term)
    return acc


class FrobTerms:
    """mu table for one basis element: mu[l][b] for l < N, b <= d*l."""

    def __init__(self, i, j, mu):
        self.i = i
        self.j = j
        self.mu = mu

    def term(self, l: int, b: int):
        if b < 0 or b >= len(self.mu[l]):
            return None
        return self.mu[l][b]


class FrobTable:
    """Shared per-curve tables: powers F^l and the per-j mu tables."""

    def __init__(self, curve, N=None):
        self.curve = curve
        self.N = curve.N if N is None else N
        ring = curve.ring
        pW = ring.pW
        fpowers = [[1]]
        for _ in range(1, self.N):
            prev = fpowers[-1]
            nxt = [0] * (len(prev) + curve.d)
            for a, ca in enumerate(prev):
                if ca:
                    for b, cb in enumerate(curve.Fcoeffs):
                        nxt[a + b] = (nxt[a + b] + ca * cb) % pW
            fpowers.append(nxt)
        self.fpowers = fpowers
        self._mu = {}

    def mu_table(self, j: int):
        """mu[l][b] = p * D(j, l) * (F^l)_b as raw residues mod p^W."""
        tab = self._mu.get(j)
        if tab is None:
            curve, ring = self.curve, self.curve.ring
            p, pW = ring.p, ring.pW
            tab = []
            for l in range(self.N):
                Djl = compute_D(j, l, self.N, curve.r, ring).res
                row = [p * Djl * c % pW for c in self.fpowers[l]]
                tab.append(row)
            self._mu[j] = tab
        return tab

    def frob_terms(self, i: int, j: int) -> FrobTerms:
        return FrobTerms(i, j, self.mu_table(j))


def frob_terms(curve, i: int, j: int, N=None) -> FrobTerms:
    return FrobTable(curve, N).frob_terms(i, j)
