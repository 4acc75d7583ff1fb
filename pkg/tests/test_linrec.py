import random

import pytest

from cycliczeta.errors import PreconditionFailed
from cycliczeta.linrec import LinMat, eval_intervals
from cycliczeta.padic import PMat, RingCtx


def _random_linmat(ring, m, rng):
    M0 = [[rng.randrange(ring.pW) for _ in range(m)] for _ in range(m)]
    M1 = [[rng.randrange(ring.pW) for _ in range(m)] for _ in range(m)]
    return LinMat.from_ints(ring, M0, M1)


def test_empty_interval_is_identity():
    ring = RingCtx(1009, 2)
    lin = _random_linmat(ring, 3, random.Random(0))
    out = eval_intervals(lin, [(5, 5)], strategy="naive")
    assert out[0] == PMat.identity(ring, 3)


def test_scalar_factorial():
    ring = RingCtx(1009, 2)
    lin = LinMat.from_ints(ring, [[0]], [[1]])  # M(x) = [x]
    out = eval_intervals(lin, [(0, 3)], strategy="naive")
    assert out[0].rows[0][0].res == 6


def test_single_step_interval():
    ring = RingCtx(1009, 2)
    rng = random.Random(2)
    lin = _random_linmat(ring, 3, rng)
    out = eval_intervals(lin, [(7, 8)], strategy="naive")
    assert out[0].residues() == lin.eval_at(8)


def test_bsgs_matches_naive_random():
    rng = random.Random(42)
    ring = RingCtx(40009, 2)
    for trial in range(100):
        m = rng.randint(1, 4)
        lin = _random_linmat(ring, m, rng)
        K = rng.randint(200, 10000)
        h = rng.randint(1, min(10, int(K**0.5) - 1))
        cuts = sorted(rng.sample(range(K + 1), 2 * h))
        intervals = [(cuts[2 * i], cuts[2 * i + 1]) for i in range(h)]
        fast = eval_intervals(lin, intervals, K=K, strategy="bsgs")
        slow = eval_intervals(lin, intervals, K=K, strategy="naive")
        for a, b in zip(fast, slow):
            assert a.residues() == b.residues()


def test_multiplicativity_over_splits():
    rng = random.Random(9)
    ring = RingCtx(40009, 3)
    lin = _random_linmat(ring, 3, rng)
    for _ in range(20):
        a = rng.randint(0, 500)
        b = rng.randint(a, a + 400)
        c = rng.randint(b, b + 400)
        left, right, whole = eval_intervals(
            lin, [(a, b), (b, c)], K=c, strategy="naive") + \
            eval_intervals(lin, [(a, c)], K=c, strategy="naive")
        assert (left * right).residues() == whole.residues()


def test_precondition_failures():
    ring = RingCtx(1009, 2)
    lin = _random_linmat(ring, 2, random.Random(1))
    with pytest.raises(PreconditionFailed):
        # too many intervals for K
        eval_intervals(lin, [(i, i + 1) for i in range(0, 20, 2)],
                       K=25, strategy="bsgs")
    small = RingCtx(5, 2)
    lin2 = _random_linmat(small, 2, random.Random(1))
    with pytest.raises(PreconditionFailed):
        eval_intervals(lin2, [(0, 24)], K=24, strategy="bsgs")


def test_plain_int_convolution_fallback_identical():
    """The packed convolutions give the same bits with or without gmpy2."""
    import cycliczeta.linrec as lr
    ring = RingCtx(40009, 3)
    lin = _random_linmat(ring, 3, random.Random(0))
    ivs = [(0, 900), (1000, 2200), (4000, 4001)]
    fast = [m.residues() for m in eval_intervals(lin, ivs, K=5000, strategy="bsgs")]
    saved = lr._mpz
    lr._mpz = int
    try:
        plain = [m.residues() for m in eval_intervals(lin, ivs, K=5000,
                                                      strategy="bsgs")]
    finally:
        lr._mpz = saved
    assert fast == plain


def test_output_precision_is_min_of_inputs():
    ring = RingCtx(1009, 3)
    M0 = PMat.from_ints(ring, [[1, 2], [3, 4]], prec=2)
    M1 = PMat.from_ints(ring, [[5, 6], [7, 8]], prec=3)
    lin = LinMat(M0, M1)
    out = eval_intervals(lin, [(0, 5)], strategy="naive")
    assert out[0].min_prec() == 2
