from fractions import Fraction

import pytest
from helpers import fm_feasible
from hypothesis import given, settings, strategies as st

from zkmc.benchmarks import handshake_symbolic
from zkmc.lp import BoundExceeded, NoWitness, Sat, Unsat, farkas_witness, farkas_witness_raw, feasible, scale_ray
from zkmc.obligations import generate


def systems(max_vars=4, max_rows=6, coef=4):
    return st.integers(1, max_vars).flatmap(lambda n: st.lists(
        st.tuples(st.lists(st.integers(-coef, coef), min_size=n, max_size=n), st.integers(-coef * 2, coef * 2)),
        min_size=1, max_size=max_rows))


@given(systems())
@settings(max_examples=200, deadline=None)
def test_feasible_agrees_with_fourier_motzkin(rows):
    A = [r for r, _ in rows]
    b = [c for _, c in rows]
    res = feasible((A, b))
    assert isinstance(res, Sat) == fm_feasible(A, b)
    if isinstance(res, Sat):
        assert all(sum(a * x for a, x in zip(r, res.point)) <= c for r, c in zip(A, b))
    else:
        y = res.ray
        assert all(v >= 0 for v in y)
        assert all(sum(y[i] * A[i][j] for i in range(len(A))) == 0 for j in range(len(A[0])))
        assert sum(yi * bi for yi, bi in zip(y, b)) < 0


def test_textbook_cases():
    assert isinstance(feasible(([[1], [-1]], [0, -1])), Unsat)      # x <= 0, x >= 1
    assert isinstance(feasible(([[1, 1], [-1, 0]], [2, 0])), Sat)
    assert isinstance(feasible(([[Fraction(1, 2)], [-1]], [Fraction(1, 3), -1])), Unsat)


def test_scale_ray():
    assert scale_ray([Fraction(1, 2), Fraction(3, 4), 0]) == [2, 3, 0]
    assert scale_ray([4, 6]) == [2, 3]


def test_witness_split_and_bounds():
    # secret: x <= 0 ; public: -x <= -1  (x >= 1)
    w = farkas_witness_raw([[1]], [0], [[-1]], [-1])
    assert (w.lam, w.mu, w.slack) == ((1,), (1,), 0)
    assert w.check([[1]], [0], [[-1]], [-1])
    with pytest.raises(NoWitness):
        farkas_witness_raw([[1]], [5], [[-1]], [-1])
    with pytest.raises(BoundExceeded):
        farkas_witness_raw([[1]], [0], [[-1]], [-1000], M=100)


def test_handshake_witnesses_reverify():
    sys_, spec, rk = handshake_symbolic()
    for ob in generate(sys_, spec, rk):
        w = farkas_witness(ob)
        assert w.check(ob.A_s, ob.b_s, ob.G_p, ob.h_p)
