"""Shared test utilities: exact rational reduction oracles (independent of
the library's matrix machinery), random curve generation, small primes."""

from fractions import Fraction

from cycliczeta.curve import choose_precision, curve_new, genus
from cycliczeta.padic import fp_gcd, fp_trim, is_prime


def next_prime(n):
    n += 1
    while not is_prime(n):
        n += 1
    return n


def least_valid_prime(r, d, p_floor=3):
    """Least prime p with p > d(N+eps)r where N is the precision the library
    itself would pick at that p (iterated to the fixpoint)."""
    import math
    delta = math.gcd(r, d)
    eps = 0 if delta == 1 else 1
    g = genus(d, r)
    p = max(p_floor, 3)
    while True:
        p = next_prime(p)
        N = choose_precision(g, p)
        if p > d * (N + eps) * r:
            return p


def random_curve(rng, rmax=6, dmax=6, p_floor=3, pmax=4000):
    """A random validated curve with r, d <= 6 and p the least prime
    exceeding the hypothesis bound (skipping non-squarefree draws)."""
    while True:
        r = rng.randint(2, rmax)
        d = rng.randint(max(1, 5 - r), dmax)
        if r + d < 5:
            continue
        coeffs = [rng.randint(-9, 9) for _ in range(d)] + [rng.randint(1, 9)]
        p = least_valid_prime(r, d, p_floor)
        if p > pmax:
            continue
        fbar = [c % p for c in coeffs]
        if fbar[-1] == 0:
            continue
        fprime = fp_trim([(i * fbar[i]) % p for i in range(1, d + 1)])
        if len(fp_gcd(fbar, fprime, p)) != 1:
            continue
        return curve_new(p, r, coeffs)


# -- exact rational reduction oracles ---------------------------------------

def frac_poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def frac_poly_divmod(a, b):
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    frac_poly_trim(a)
    frac_poly_trim(b)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for i, bc in enumerate(b):
            a[i + k] -= c * bc
        frac_poly_trim(a)
    return q, a


def frac_poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def frac_poly_sub(a, b):
    out = [Fraction(c) for c in a] + [Fraction(0)] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return frac_poly_trim(out)


def frac_xgcd(a, b):
    """(g, u, v) with u a + v b = g over Q[x], g monic."""
    r0, r1 = ([Fraction(c) for c in a], [Fraction(c) for c in b])
    frac_poly_trim(r0)
    frac_poly_trim(r1)
    u0, u1 = [Fraction(1)], []
    v0, v1 = [], [Fraction(1)]
    while r1:
        q, rem = frac_poly_divmod(r0, r1)
        r0, r1 = r1, rem
        u0, u1 = u1, frac_poly_sub(u0, frac_poly_mul(q, u1))
        v0, v1 = v1, frac_poly_sub(v0, frac_poly_mul(q, v1))
    lead = r0[-1]
    return ([c / lead for c in r0], [c / lead for c in u0],
            [c / lead for c in v0])


def frac_reduce_horizontal(curve, acoeffs, t):
    """Reduce A(x) y^-t dx into W_{-1,t} over Q by eliminating the top term
    with the exact differential r * d(x^a y^{r-t}); fully independent of the
    library's reduction matrices.  Returns d Fractions (index 0 = x^-1)."""
    r, d = curve.r, curve.d
    F = [Fraction(c) for c in curve.Fcoeffs]
    A = [Fraction(c) for c in acoeffs]
    frac_poly_trim(A)
    while len(A) - 1 >= d - 1:
        m = len(A) - 1
        a = m - d + 1
        den = F[d] * (r * a + (r - t) * d)
        assert den != 0
        scale = A[m] / den
        # r*d(x^a y^{r-t}) = sum_i F_i (r a + (r-t) i) x^{a+i-1} y^{-t} dx
        for i in range(d + 1):
            coef = F[i] * (r * a + (r - t) * i)
            if coef and a + i - 1 >= 0:
                A[a + i - 1] -= scale * coef
        assert A[m] == 0
        frac_poly_trim(A)
    out = [Fraction(0)] * d
    for h, c in enumerate(A):
        out[h + 1] = c
    return out


def frac_bezout(curve, i):
    """R_i, S_i over Q with x^i = R_i F + S_i F', independent xgcd route."""
    F = [Fraction(c) for c in curve.Fcoeffs]
    Fp = [i_ * F[i_] for i_ in range(1, len(F))]
    g, u, v = frac_xgcd(F, Fp)
    assert len(g) == 1 and g[0] == 1
    xi = [Fraction(0)] * i + [Fraction(1)]
    T, S = frac_poly_divmod(frac_poly_mul(xi, v), F)
    R = frac_poly_sub(frac_poly_mul(xi, u),
                      [-c for c in frac_poly_mul(T, Fp)])
    return R, S


def frac_to_residue(x: Fraction, pW: int, p: int):
    assert x.denominator % p != 0, "oracle value has a p in the denominator"
    return x.numerator * pow(x.denominator, -1, pW) % pW


def exact_differential_coeffs(curve, a, t):
    """Coefficients of r * d(x^a y^{r-t}) as integers (polynomial in x,
    times y^-t dx)."""
    r, d = curve.r, curve.d
    out = [0] * (a + d)
    for i in range(d + 1):
        c = curve.Fcoeffs[i] * (r * a + (r - t) * i)
        if a + i - 1 >= 0:
            out[a + i - 1] += c
    return out
