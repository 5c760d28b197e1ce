"""Block semidefinite solves with verified certificates."""

import numpy as np
import pytest

from passive_isac.errors import DimensionMismatch
from passive_isac.sdp import GAP_TOL, SdpConstraint, SdpProblem, solve_sdp


def _random_hermitian(rng, n, scale=1.0):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (z + z.conj().T) / 2.0


def test_trace_budget_saturates():
    n = 3
    prob = SdpProblem(
        objective=[np.eye(n)],
        constraints=[SdpConstraint([np.eye(n)], "<=", 1.0)],
    )
    sol = solve_sdp(prob)
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(1.0, abs=1e-7)
    assert sol.gap <= GAP_TOL
    x = sol.x_blocks[0]
    assert np.real(np.trace(x)) <= 1.0 + 1e-6
    assert np.min(np.linalg.eigvalsh((x + x.conj().T) / 2)) >= -1e-7


def test_top_eigenvalue_oracle():
    rng = np.random.default_rng(0)
    for k in range(10):
        n = int(rng.integers(2, 7))
        a = _random_hermitian(rng, n, scale=10.0 ** rng.uniform(-1, 2))
        want = float(np.max(np.linalg.eigvalsh(a)))
        prob = SdpProblem(
            objective=[a],
            constraints=[SdpConstraint([np.eye(n)], "==", 1.0)],
        )
        sol = solve_sdp(prob)
        assert sol.status == "optimal"
        assert sol.objective_value == pytest.approx(want, rel=1e-6, abs=1e-8)


def test_blocks_share_one_budget():
    n = 2
    prob = SdpProblem(
        objective=[np.eye(n), 2.0 * np.eye(n)],
        constraints=[SdpConstraint([np.eye(n), np.eye(n)], "<=", 1.0)],
    )
    sol = solve_sdp(prob)
    assert sol.status == "optimal"
    assert sol.objective_value == pytest.approx(2.0, abs=1e-6)
    # the budget migrates entirely to the better-paying block
    assert np.real(np.trace(sol.x_blocks[0])) == pytest.approx(0.0, abs=1e-6)
    assert np.real(np.trace(sol.x_blocks[1])) == pytest.approx(1.0, abs=1e-6)


def test_infeasible_budget_is_flagged():
    n = 2
    prob = SdpProblem(
        objective=[np.eye(n)],
        constraints=[SdpConstraint([np.eye(n)], "<=", -1.0)],
    )
    sol = solve_sdp(prob)
    assert sol.status == "infeasible"
    assert sol.x_blocks is None


def test_solution_is_deterministic():
    rng = np.random.default_rng(1)
    a = _random_hermitian(rng, 4)
    b = _random_hermitian(rng, 4)
    b = b @ b.conj().T + np.eye(4)  # PSD, keeps the feasible set bounded
    prob_args = dict(
        objective=[a],
        constraints=[SdpConstraint([b], "<=", 3.0)],
    )
    s1 = solve_sdp(SdpProblem(**prob_args))
    s2 = solve_sdp(SdpProblem(**prob_args))
    assert s1.status == s2.status == "optimal"
    assert abs(s1.objective_value - s2.objective_value) < 1e-9
    assert np.max(np.abs(s1.x_blocks[0] - s2.x_blocks[0])) < 1e-7


def test_mixed_senses_and_certificate():
    rng = np.random.default_rng(2)
    n = 3
    a = _random_hermitian(rng, n)
    lo = _random_hermitian(rng, n)
    lo = lo @ lo.conj().T
    prob = SdpProblem(
        objective=[a],
        constraints=[
            SdpConstraint([np.eye(n)], "<=", 2.0),
            SdpConstraint([lo], ">=", 0.1),
        ],
    )
    sol = solve_sdp(prob)
    assert sol.status == "optimal"
    x = sol.x_blocks[0]
    assert np.real(np.trace(x)) <= 2.0 + 1e-6
    assert np.real(np.sum(lo.conj() * x)) >= 0.1 - 1e-6
    assert sol.gap <= GAP_TOL
    # reported objective matches the returned iterate
    assert np.real(np.sum(a.conj() * x)) == pytest.approx(sol.objective_value, abs=1e-6)


def test_iteration_cap_returns_unverified_iterate():
    rng = np.random.default_rng(3)
    a = _random_hermitian(rng, 4)
    prob = SdpProblem(
        objective=[a],
        constraints=[SdpConstraint([np.eye(4)], "==", 1.0)],
    )
    sol = solve_sdp(prob, max_iter=1)
    assert sol.status == "max_iter"
    assert sol.x_blocks is not None


def test_problem_validation():
    with pytest.raises(DimensionMismatch):
        SdpProblem(objective=[np.array([[0.0, 1.0], [0.0, 0.0]])])  # not Hermitian
    with pytest.raises(DimensionMismatch):
        SdpConstraint([np.eye(2)], "<", 1.0)
    with pytest.raises(DimensionMismatch):
        SdpProblem(
            objective=[np.eye(2), np.eye(2)],
            constraints=[SdpConstraint([np.eye(2)], "<=", 1.0)],
        )
    with pytest.raises(DimensionMismatch):
        SdpProblem(objective=[])
