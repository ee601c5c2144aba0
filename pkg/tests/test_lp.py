"""The in-repo simplex against scipy's HiGHS on random small LPs."""
import numpy as np
import pytest
from scipy.optimize import linprog

from xprob import LPFailure
from xprob.lp import solve


def _random_lp(rng):
    n = int(rng.integers(1, 7))
    m_ub = int(rng.integers(1, 9))
    m_eq = int(rng.integers(0, 3))
    c = rng.uniform(-1, 1, n)
    a_ub = rng.uniform(-1, 1, (m_ub, n))
    b_ub = rng.uniform(-0.5, 1, m_ub)
    a_eq = rng.uniform(-1, 1, (m_eq, n)) if m_eq else None
    b_eq = rng.uniform(-0.5, 0.5, m_eq) if m_eq else None
    free = rng.random(n) < 0.3
    # box every variable so the LP is bounded
    box = np.vstack([np.eye(n), -np.eye(n)])
    a_ub = np.vstack([a_ub, box])
    b_ub = np.concatenate([b_ub, np.full(2 * n, 3.0)])
    return c, a_ub, b_ub, a_eq, b_eq, free


class TestAgainstScipy:
    @pytest.mark.parametrize("seed", range(60))
    def test_random(self, seed):
        rng = np.random.default_rng(seed)
        c, a_ub, b_ub, a_eq, b_eq, free = _random_lp(rng)
        ours = solve(c, a_ub, b_ub, a_eq, b_eq, free=free)
        bounds = [(None, None) if f else (0, None) for f in free]
        ref = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
        if ref.status == 2:
            assert ours.status == "infeasible"
            return
        assert ref.status == 0 and ours.success
        assert ours.fun == pytest.approx(ref.fun, abs=1e-8)
        assert np.all(a_ub @ ours.x <= b_ub + 1e-8)
        # strong duality: c.x = b_ub.y_ub + b_eq.y_eq
        dual_obj = b_ub @ ours.duals_ub + (b_eq @ ours.duals_eq if a_eq is not None else 0.0)
        assert dual_obj == pytest.approx(ours.fun, abs=1e-8)


class TestStatuses:
    def test_infeasible(self):
        res = solve([1.0], A_ub=[[1.0]], b_ub=[-1.0])
        assert res.status == "infeasible"

    def test_unbounded(self):
        res = solve([-1.0], A_ub=[[-1.0]], b_ub=[0.0])
        assert res.status == "unbounded"

    def test_degenerate_cycle_prone(self):
        # Beale's example cycles under the textbook rule; Bland's rule terminates
        c = [-0.75, 150, -0.02, 6]
        a = [[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]]
        res = solve(c, a, [0, 0, 1])
        assert res.success and res.fun == pytest.approx(-0.05)

    def test_iteration_budget(self):
        with pytest.raises(LPFailure):
            solve([-1.0, -1.0], A_ub=[[1.0, 0.0], [0.0, 1.0]], b_ub=[1.0, 1.0], max_iter=1)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            solve([1.0, 1.0], A_ub=[[1.0]], b_ub=[1.0])
