"""Fixed-modulus p-adic arithmetic: Z/p^W with absolute-precision tracking.

Elements carry a full residue mod p^W plus a trusted precision ``prec``;
the residue bits above p^prec are carried but never trusted.  All ring
operations follow the simple propagation rule: output precision is the
minimum of the input precisions, reduced by v for each division by p^v.
Finer precision gains (e.g. multiplying by a quantity divisible by p) are
asserted explicitly by the callers that can prove them.

Also provides dense polynomials and matrices over this ring, Bezout
lifting, a division-free characteristic polynomial, and interpolation
through a Vandermonde system.
"""

from .errors import (
    InexactDivision,
    NonUnit,
    NotCoprime,
    NotPrime,
    PrecisionExhausted,
    SingularNodes,
)

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24 with the fixed witness set."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class RingCtx:
    """The coefficient ring Z/p^W, immutable and shareable."""

    __slots__ = ("p", "W", "pW", "ppow")

    def __init__(self, p: int, W: int):
        if W < 1:
            raise ValueError("working exponent W must be >= 1")
        if p < 3 or not is_prime(p):
            raise NotPrime(f"{p} is not an odd prime")
        self.p = p
        self.W = W
        self.ppow = tuple(p**k for k in range(W + 1))
        self.pW = self.ppow[W]

    def __repr__(self):
        return f"RingCtx(p={self.p}, W={self.W})"

    def elt(self, value, prec=None) -> "PElt":
        if isinstance(value, PElt):
            return value if prec is None else PElt(self, value.res, min(prec, value.prec))
        return PElt(self, value % self.pW, self.W if prec is None else prec)

    def zero(self) -> "PElt":
        return PElt(self, 0, self.W)

    def one(self) -> "PElt":
        return PElt(self, 1, self.W)

    def poly(self, coeffs, prec=None) -> "PPoly":
        return PPoly(self, [self.elt(c, prec) for c in coeffs])

    def val(self, residue: int) -> int:
        """p-adic valuation of an integer residue, capped at W (0 maps to W)."""
        if residue % self.pW == 0:
            return self.W
        v = 0
        while residue % self.p == 0:
            residue //= self.p
            v += 1
        return v


class PElt:
    """A residue mod p^W trusted to absolute precision ``prec`` digits."""

    __slots__ = ("ring", "res", "prec")

    def __init__(self, ring: RingCtx, res: int, prec: int):
        if prec < 0 or prec > ring.W:
            raise PrecisionExhausted(f"precision {prec} outside [0, {ring.W}]")
        self.ring = ring
        self.res = res % ring.pW
        self.prec = prec

    def _coerce(self, other):
        if isinstance(other, PElt):
            return other
        if isinstance(other, int):
            return PElt(self.ring, other, self.ring.W)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PElt(self.ring, self.res + o.res, min(self.prec, o.prec))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PElt(self.ring, self.res - o.res, min(self.prec, o.prec))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return PElt(self.ring, -self.res, self.prec)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PElt(self.ring, self.res * o.res, min(self.prec, o.prec))

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        m = self.ring.ppow[min(self.prec, o.prec)]
        return (self.res - o.res) % m == 0

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __repr__(self):
        return f"{self.res} (mod {self.ring.p}^{self.prec})"

    def is_zero(self) -> bool:
        return self.res % self.ring.ppow[self.prec] == 0

    def val(self) -> int:
        """Valuation of the trusted part: v_p(res) capped at prec."""
        return min(self.ring.val(self.res), self.prec)

    def is_unit(self) -> bool:
        return self.res % self.ring.p != 0

    def inv(self) -> "PElt":
        if self.res % self.ring.p == 0:
            raise NonUnit(f"{self.res} is divisible by p = {self.ring.p}")
        return PElt(self.ring, pow(self.res, -1, self.ring.pW), self.prec)

    def div_p(self, v: int = 1) -> "PElt":
        """Exact division by p^v; reduces prec by exactly v."""
        if v > self.prec:
            raise PrecisionExhausted(f"cannot divide by p^{v} at precision {self.prec}")
        pv = self.ring.ppow[v]
        if self.res % pv != 0:
            raise InexactDivision(f"p^{v} does not divide residue {self.res}")
        return PElt(self.ring, self.res // pv, self.prec - v)


def elt_inv(ctx: RingCtx, a: PElt) -> PElt:
    return ctx.elt(a).inv()


def elt_div_p(a: PElt, v: int) -> PElt:
    return a.div_p(v)


# ---------------------------------------------------------------------------
# F_p[x] helpers on plain int coefficient lists (ascending), used for gcds,
# squarefreeness tests, distinct-degree factorization and Hensel seeds.

def fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def fp_divmod(a, b, p):
    a = [c % p for c in a]
    b = [c % p for c in b]
    fp_trim(a)
    fp_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    r = a[:]
    while len(r) >= len(b):
        c = r[-1] * inv_lead % p
        k = len(r) - len(b)
        q[k] = c
        for i, bc in enumerate(b):
            r[i + k] = (r[i + k] - c * bc) % p
        fp_trim(r)
        if not r:
            break
    return fp_trim(q), r


def fp_gcd(a, b, p):
    a = fp_trim([c % p for c in a])
    b = fp_trim([c % p for c in b])
    while b:
        _, r = fp_divmod(a, b, p)
        a, b = b, r
    if a:
        inv_lead = pow(a[-1], -1, p)
        a = [c * inv_lead % p for c in a]
    return a


def fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return fp_trim(out)


def fp_sub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return fp_trim([c % p for c in out])


def fp_xgcd(a, b, p):
    """Return (g, u, v) monic g with u*a + v*b = g in F_p[x]."""
    r0, r1 = fp_trim([c % p for c in a]), fp_trim([c % p for c in b])
    u0, u1 = [1], []
    v0, v1 = [], [1]
    while r1:
        q, r = fp_divmod(r0, r1, p)
        r0, r1 = r1, r
        u0, u1 = u1, fp_sub(u0, fp_mul(q, u1, p), p)
        v0, v1 = v1, fp_sub(v0, fp_mul(q, v1, p), p)
    if r0:
        il = pow(r0[-1], -1, p)
        r0 = [c * il % p for c in r0]
        u0 = [c * il % p for c in u0]
        v0 = [c * il % p for c in v0]
    return r0, u0, v0


def fp_powmod(a, e, mod, p):
    """a^e mod (mod) in F_p[x] by square and multiply."""
    result = [1]
    base = fp_divmod(a, mod, p)[1]
    while e:
        if e & 1:
            result = fp_divmod(fp_mul(result, base, p), mod, p)[1]
        base = fp_divmod(fp_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


# ---------------------------------------------------------------------------

_KARATSUBA_CUTOFF = 32


def _int_poly_mul(a, b, mod):
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        return []
    if min(na, nb) < _KARATSUBA_CUTOFF:
        out = [0] * (na + nb - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return [c % mod for c in out]
    h = min(na, nb) // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    z0 = _int_poly_mul(a0, b0, mod)
    z2 = _int_poly_mul(a1, b1, mod)
    sa = [x + y for x, y in zip(a0, a1)] + list(a1[len(a0):]) + list(a0[len(a1):])
    sb = [x + y for x, y in zip(b0, b1)] + list(b1[len(b0):]) + list(b0[len(b1):])
    z1 = _int_poly_mul(sa, sb, mod)
    out = [0] * (na + nb - 1)
    for i, c in enumerate(z0):
        out[i] += c
        out[i + h] -= c
    for i, c in enumerate(z1):
        out[i + h] += c
    for i, c in enumerate(z2):
        out[i + h] -= c
        out[i + 2 * h] += c
    return [c % mod for c in out]


class PPoly:
    """Dense polynomial over Z/p^W, ascending coefficients."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: RingCtx, coeffs):
        self.ring = ring
        self.coeffs = list(coeffs)

    def min_prec(self) -> int:
        return min((c.prec for c in self.coeffs), default=self.ring.W)

    def degree(self) -> int:
        """Index of the last coefficient nonzero modulo p^{min prec}; -1 if none."""
        m = self.ring.ppow[self.min_prec()]
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i].res % m != 0:
                return i
        return -1

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.zero()

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return PPoly(self.ring, [self[i] + other[i] for i in range(n)])

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return PPoly(self.ring, [self[i] - other[i] for i in range(n)])

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return PPoly(self.ring, [])
        prec = min(self.min_prec(), other.min_prec())
        raw = _int_poly_mul([c.res for c in self.coeffs],
                            [c.res for c in other.coeffs], self.ring.pW)
        return PPoly(self.ring, [PElt(self.ring, c, prec) for c in raw])

    def scale(self, a: PElt):
        return PPoly(self.ring, [c * a for c in self.coeffs])

    def __call__(self, x):
        x = self.ring.elt(x)
        acc = self.ring.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return PPoly(self.ring, [self.coeffs[i] * i for i in range(1, len(self.coeffs))])

    def divmod_unit(self, other):
        """Division with remainder; the divisor's leading coefficient must be a unit."""
        dther = other.degree()
        if dther < 0:
            raise ZeroDivisionError("polynomial division by zero")
        lead = other.coeffs[dther]
        inv_lead = lead.inv()
        r = list(self.coeffs)
        dq = len(r) - 1 - dther
        if dq < 0:
            return PPoly(self.ring, []), PPoly(self.ring, r)
        q = [self.ring.zero()] * (dq + 1)
        for k in range(dq, -1, -1):
            c = r[k + dther] * inv_lead
            q[k] = c
            for i in range(dther + 1):
                r[k + i] = r[k + i] - c * other[i]
        return PPoly(self.ring, q), PPoly(self.ring, r[:dther])

    def residues(self, mod=None):
        m = mod if mod is not None else self.ring.pW
        return [c.res % m for c in self.coeffs]

    def __eq__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self[i] == other[i] for i in range(n))

    def __repr__(self):
        return f"PPoly({[c.res for c in self.coeffs]})"


def poly_xgcd_lift(ctx: RingCtx, F: PPoly, G: PPoly):
    """(R0, S0) with R0*F + S0*G = 1 mod p^W, deg R0 < deg G, deg S0 < deg F.

    Computed by the extended Euclidean algorithm mod p, then lifted one digit
    at a time; raises NotCoprime when gcd(F, G) mod p is nonconstant.
    """
    p, W, pW = ctx.p, ctx.W, ctx.pW
    f = [c.res % p for c in F.coeffs]
    g = [c.res % p for c in G.coeffs]
    gcd, u, v = fp_xgcd(f, g, p)
    if len(gcd) != 1:
        raise NotCoprime("inputs share a factor mod p")
    fint = [c.res for c in F.coeffs]
    gint = [c.res for c in G.coeffs]
    lenF = len(fp_trim(f[:]))  # degrees mod p pin the Bezout degree bounds
    lenG = len(fp_trim(g[:]))
    r = u[:]
    s = v[:]

    def conv(a, b):
        out = [0] * (len(a) + len(b) - 1 if a and b else 0)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return out

    for k in range(1, W):
        pk = ctx.ppow[k]
        err = conv(r, fint)
        for i, c in enumerate(conv(s, gint)):
            if i < len(err):
                err[i] += c
            else:
                err.append(c)
        if err:
            err[0] -= 1
        else:
            err = [-1]
        e = [(-c // pk) % p if c % pk == 0 else None for c in err]
        if any(c is None for c in e):
            raise InexactDivision("Hensel residual not divisible by p^k")
        e = fp_trim(e)
        if not e:
            continue
        dr = fp_divmod(fp_mul(u, e, p), g, p)[1] if len(g) > 1 else []
        num = fp_sub(e, fp_mul(dr, f, p), p)
        ds, rem = fp_divmod(num, g, p)
        if rem:
            raise InexactDivision("Hensel correction failed to divide")
        for i, c in enumerate(dr):
            while len(r) <= i:
                r.append(0)
            r[i] = (r[i] + pk * c) % pW
        for i, c in enumerate(ds):
            while len(s) <= i:
                s.append(0)
            s[i] = (s[i] + pk * c) % pW
    R0 = ctx.poly(r + [0] * max(0, lenG - 1 - len(r)))
    S0 = ctx.poly(s + [0] * max(0, lenF - 1 - len(s)))
    return R0, S0


class PMat:
    """Rectangular matrix of PElt; product precision is the min of operands."""

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: RingCtx, rows):
        self.ring = ring
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def from_ints(cls, ring, rows, prec=None):
        return cls(ring, [[ring.elt(c, prec) for c in row] for row in rows])

    @classmethod
    def identity(cls, ring, n, prec=None):
        return cls.from_ints(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)], prec)

    def min_prec(self):
        return min((c.prec for row in self.rows for c in row), default=self.ring.W)

    def __mul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        prec = min(self.min_prec(), other.min_prec())
        pW = self.ring.pW
        a = [[c.res for c in row] for row in self.rows]
        b = [[c.res for c in row] for row in other.rows]
        bt = list(zip(*b))
        out = [[PElt(self.ring, sum(x * y for x, y in zip(ra, cb)) % pW, prec)
                for cb in bt] for ra in a]
        return PMat(self.ring, out)

    def __add__(self, other):
        return PMat(self.ring, [[x + y for x, y in zip(ra, rb)]
                                for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return PMat(self.ring, [[x - y for x, y in zip(ra, rb)]
                                for ra, rb in zip(self.rows, other.rows)])

    def scale(self, a):
        a = self.ring.elt(a)
        return PMat(self.ring, [[x * a for x in row] for row in self.rows])

    def apply(self, vec):
        return [sum((x * v for x, v in zip(row, vec)), self.ring.zero()) for row in self.rows]

    def trace(self):
        return sum((self.rows[i][i] for i in range(self.nrows)), self.ring.zero())

    def residues(self, mod=None):
        m = mod if mod is not None else self.ring.pW
        return [[c.res % m for c in row] for row in self.rows]

    def __eq__(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            return False
        return all(x == y for ra, rb in zip(self.rows, other.rows) for x, y in zip(ra, rb))

    def __repr__(self):
        return f"PMat({self.residues()})"


def mat_charpoly(M: PMat) -> PPoly:
    """Monic char poly det(tI - M) by the division-free Berkowitz algorithm."""
    if M.nrows != M.ncols:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = M.nrows
    ring = M.ring
    if n == 0:
        return ring.poly([1])
    prec = M.min_prec()
    pW = ring.pW
    a = M.residues()
    # c holds descending coefficients of the charpoly of the trailing k x k block
    c = [1, -a[n - 1][n - 1] % pW]
    for k in range(2, n + 1):
        top = n - k
        row = a[top][top + 1:]
        col = [a[i][top] for i in range(top + 1, n)]
        sub = [r[top + 1:] for r in a[top + 1:]]
        toep = [1, -a[top][top] % pW]
        v = col[:]
        for _ in range(k - 1):
            toep.append(-sum(x * y for x, y in zip(row, v)) % pW)
            v = [sum(x * y for x, y in zip(r, v)) % pW for r in sub]
        newc = [0] * (k + 1)
        for i in range(k + 1):
            acc = 0
            for j in range(len(c)):
                d = i - j
                if 0 <= d <= k:
                    acc += toep[d] * c[j]
            newc[i] = acc % pW
        c = newc
    return ring.poly(list(reversed(c)), prec)


def vandermonde_solve(nodes, values):
    """Matrix-coefficient polynomial Q of degree < len(nodes) with Q(node_i) = value_i.

    Newton's divided differences; every pair of nodes must differ by a unit
    mod p (each pair appears once in the difference triangle).
    """
    if not nodes:
        return []
    if len(nodes) != len(values):
        raise ValueError("node/value count mismatch")
    ring = nodes[0].ring
    n = len(nodes)
    dd = list(values)
    newton = [dd[0]]
    for level in range(1, n):
        nxt = []
        for i in range(n - level):
            den = nodes[i + level] - nodes[i]
            if not den.is_unit():
                raise SingularNodes("interpolation nodes coincide mod p")
            nxt.append((dd[i + 1] - dd[i]).scale(den.inv()))
        dd = nxt
        newton.append(dd[0])
    # expand sum_k newton[k] * prod_{i<k} (x - node_i) into monomial coefficients
    zero = values[0].scale(ring.elt(0))
    acc = [newton[-1]]
    for k in range(n - 2, -1, -1):
        # acc <- acc * (x - node_k) + newton[k]
        nk = nodes[k]
        new_acc = [zero] * (len(acc) + 1)
        for i, m in enumerate(acc):
            new_acc[i + 1] = new_acc[i + 1] + m
            new_acc[i] = new_acc[i] - m.scale(nk)
        new_acc[0] = new_acc[0] + newton[k]
        acc = new_acc
    return acc
