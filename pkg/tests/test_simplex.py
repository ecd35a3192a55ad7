from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from lpdendro.simplex import (
    IterationLimitError,
    RevisedSimplex,
    SimplexError,
    SimplexOptions,
)


def slack_form(G, g):
    """min over A x = b, x >= 0 for G x <= g with g >= 0 and slacks last."""
    m, n = G.shape
    A = np.hstack([G, np.eye(m)])
    return A, g, np.arange(n, n + m)


def test_beale_cycling_example():
    # the classic instance on which textbook Dantzig pivoting cycles
    G = np.array([[0.25, -8, -1, 9], [0.5, -12, -0.5, 3], [0, 0, 1, 0]])
    g = np.array([0.0, 0.0, 1.0])
    c = np.array([-0.75, 20, -0.5, 6, 0, 0, 0])
    A, b, basis = slack_form(G, g)
    res = RevisedSimplex(A, b).solve(c, basis)
    ref = linprog(c[:4], A_ub=G, b_ub=g, method="highs")
    assert res.objective == pytest.approx(ref.fun, abs=1e-12)
    assert np.allclose(A @ res.x, b)


def test_random_lps_match_highs():
    rng = np.random.default_rng(4)
    for _ in range(40):
        m, n = rng.integers(2, 8), rng.integers(2, 10)
        G = rng.integers(-3, 4, size=(m, n)).astype(float)
        g = rng.integers(0, 5, size=m).astype(float)
        # a box row keeps the problem bounded
        G = np.vstack([G, np.ones(n)])
        g = np.append(g, 10.0)
        c = np.concatenate([rng.normal(size=n), np.zeros(len(g))])
        A, b, basis = slack_form(G, g)
        res = RevisedSimplex(A, b).solve(c, basis)
        ref = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
        assert ref.status == 0
        assert res.objective == pytest.approx(ref.fun, abs=1e-8)
        # a vertex: basic columns independent, nonbasics at zero
        nonbasic = np.setdiff1d(np.arange(A.shape[1]), res.basis)
        assert np.all(res.x[nonbasic] == 0)
        assert res.x.min() >= 0


def test_degenerate_start_with_artificial():
    # x0 + x1 = 1, x1 - x2 = 0; start with x0 basic and an artificial on row 1
    A = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, -1.0]])
    b = np.array([1.0, 0.0])
    res = RevisedSimplex(A, b).solve(np.array([1.0, -1.0, 0.0]), [0, 3 + 1])
    assert res.objective == pytest.approx(-1.0)
    assert np.allclose(res.x, [0, 1, 1])


def test_rational_vertex():
    A = np.array([[2.0, 1.0, 1.0, 0.0], [1.0, 3.0, 0.0, 1.0]])
    b = np.array([4.0, 6.0])
    res = RevisedSimplex(A, b).solve(np.array([-1.0, -1.0, 0, 0]), [2, 3])
    assert [Fraction(v).limit_denominator(100) for v in res.x[:2]] == [Fraction(6, 5), Fraction(8, 5)]


def test_iteration_limit_is_reported():
    A = np.array([[1.0, 1.0, 1.0, 0.0], [1.0, -1.0, 0.0, 1.0]])
    b = np.array([4.0, 1.0])
    solver = RevisedSimplex(A, b, SimplexOptions(max_iterations=1))
    with pytest.raises(IterationLimitError):
        solver.solve(np.array([-2.0, -1.0, 0, 0]), [2, 3])


def test_unbounded_and_infeasible_start():
    A = np.array([[1.0, -1.0, 1.0]])
    b = np.array([1.0])
    with pytest.raises(SimplexError, match="unbounded"):
        RevisedSimplex(A, b).solve(np.array([0.0, -1.0, 0.0]), [2])
    with pytest.raises(SimplexError, match="feasible"):
        RevisedSimplex(np.array([[1.0, 1.0]]), np.array([-1.0])).solve(np.zeros(2), [0])
