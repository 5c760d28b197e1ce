"""Small dense complex semidefinite programs over block variables.

Problems have C Hermitian PSD blocks X_1..X_C of a common size n and are
always phrased as maximization of sum_k tr(A_k X_k) subject to linear trace
constraints sum_k tr(B_{m,k} X_k) {<=, ==, >=} c_m. That covers every
transmit-design program in this package (SINR-constrained power shaping,
target-energy maximization, the alternating surrogate step) as well as
generic eigenvalue test problems.

The heavy lifting is delegated to conic solvers through cvxpy; this module
owns problem validation, equilibration (a variable substitution X = t X'
plus per-row and objective normalization so the solver works on O(1) data),
and an independent verification layer that recomputes the primal objective,
the dual bound from the returned multipliers, block PSD-ness, and
constraint violations before a solution is labeled "optimal". A solution
verifies when the relative duality gap is at most 1e-6, every block's
minimum eigenvalue is at least -1e-8 times the trace scale, every
constraint holds within 1e-7 in normalized units, and weak duality (primal
objective never above the dual bound) holds. Solvers are tried in a fixed
ladder (Clarabel, then CVXOPT, then SCS at tight tolerance) until one
produces a verified solution; the ladder exists because first-choice
interior-point runs occasionally stall a hair short of the gap target on
marginally conditioned surrogate steps.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import cvxpy as cp

from .errors import DimensionMismatch, IllConditioned, MaxIterations

HERMITIAN_TOL = 1e-12
GAP_TOL = 1e-6
VIOLATION_TOL = 1e-7
PSD_TRACE_TOL = 1e-8
ITERATION_CAP = 200
_SENSES = ("<=", ">=", "==")


@dataclass
class SdpConstraint:
    """One linear trace constraint sum_k tr(matrices[k] X_k) sense rhs."""

    matrices: list
    sense: str
    rhs: float

    def __post_init__(self):
        if self.sense not in _SENSES:
            raise DimensionMismatch(f"constraint sense must be one of {_SENSES}")
        self.matrices = [np.asarray(m, dtype=complex) for m in self.matrices]
        self.rhs = float(self.rhs)


@dataclass
class SdpProblem:
    """maximize sum_k tr(objective[k] X_k) over PSD Hermitian blocks X_k."""

    objective: list
    constraints: list = field(default_factory=list)

    def __post_init__(self):
        self.objective = [np.asarray(a, dtype=complex) for a in self.objective]
        if not self.objective:
            raise DimensionMismatch("need at least one block")
        n = self.objective[0].shape[0]
        for a in self.objective:
            _check_hermitian(a, n, "objective")
        for con in self.constraints:
            if len(con.matrices) != len(self.objective):
                raise DimensionMismatch("constraint must supply one matrix per block")
            for b in con.matrices:
                _check_hermitian(b, n, "constraint")

    @property
    def n_blocks(self) -> int:
        return len(self.objective)

    @property
    def block_size(self) -> int:
        return self.objective[0].shape[0]


@dataclass
class SdpSolution:
    x_blocks: list | None
    objective_value: float
    status: str
    gap: float


def _check_hermitian(mat: np.ndarray, n: int, label: str):
    if mat.shape != (n, n):
        raise DimensionMismatch(f"{label} matrix has shape {mat.shape}, expected {(n, n)}")
    scale = max(1.0, float(np.abs(mat).max()))
    if np.abs(mat - mat.conj().T).max() > HERMITIAN_TOL * scale:
        raise DimensionMismatch(f"{label} matrix is not Hermitian within {HERMITIAN_TOL}")


def _trace_real(a: np.ndarray, x: np.ndarray) -> float:
    return float(np.real(np.sum(a.conj() * x)))


def solve_sdp(problem: SdpProblem, max_iter: int = ITERATION_CAP) -> SdpSolution:
    """Solve one block SDP and verify the result before reporting it optimal.

    Returns status "optimal" (verified), "infeasible" (solver certificate),
    or "max_iter" (iteration cap hit with a usable but unverified iterate).
    Raises MaxIterations when the cap is hit with nothing usable and
    IllConditioned when the solver stalls or errors out.
    """
    n = problem.block_size
    blocks = [cp.Variable((n, n), hermitian=True) for _ in range(problem.n_blocks)]
    cvx_cons = [x >> 0 for x in blocks]

    # Substitute X = t X' with t chosen so the solver sees O(1) iterates;
    # physical problems here mix milliwatt powers with 1e3-scale channel
    # outer products, and absolute solver tolerances need the rescale.
    ratios = []
    for con in problem.constraints:
        entry = max(float(np.abs(m).max()) for m in con.matrices)
        if con.rhs != 0 and entry > 0:
            ratios.append(abs(con.rhs) / entry)
    t_var = float(np.median(ratios)) if ratios else 1.0
    if not np.isfinite(t_var) or t_var <= 0:
        t_var = 1.0

    # canonicalize to <= / == and scale each row to unit magnitude
    rows = []
    for con in problem.constraints:
        mats, rhs, sense = [m * t_var for m in con.matrices], con.rhs, con.sense
        if sense == ">=":
            mats = [-m for m in mats]
            rhs = -rhs
            sense = "<="
        scale = max(abs(rhs), max(float(np.abs(m).max()) for m in mats), 1e-300)
        mats = [m / scale for m in mats]
        rhs = rhs / scale
        expr = sum(cp.real(cp.trace(m @ x)) for m, x in zip(mats, blocks)
                   if np.abs(m).max() > 0)
        if isinstance(expr, int):
            expr = cp.Constant(0.0)
        cvx_con = (expr == rhs) if sense == "==" else (expr <= rhs)
        cvx_cons.append(cvx_con)
        rows.append((mats, rhs, sense, cvx_con))

    # The objective absorbs t as well, then is normalized to unit entry
    # magnitude; scaling the objective moves no optimizer, but it puts the
    # solver's relative-gap test in meaningful units.
    obj_scale = max((float(np.abs(a).max()) * t_var for a in problem.objective),
                    default=0.0)
    if obj_scale <= 0 or not np.isfinite(obj_scale):
        obj_scale = 1.0
    objective = cp.Maximize(
        sum(cp.real(cp.trace((a * (t_var / obj_scale)) @ x))
            for a, x in zip(problem.objective, blocks)))
    prob = cp.Problem(objective, cvx_cons)

    # A solver budget set explicitly by the caller is an iteration contract,
    # so no fallback runs then; the default budget enables the full ladder.
    ladder = [(cp.CLARABEL, {"max_iter": max_iter})]
    if max_iter == ITERATION_CAP:
        ladder += [(cp.CVXOPT, {}), (cp.SCS, {"eps": 1e-9, "max_iters": 200000})]

    last_error = None
    last_diag = None
    limit_iterate = None
    infeasible_hint = False
    empty_limit = False
    for solver, opts in ladder:
        try:
            # the inaccurate-solution warning is handled here by the
            # verification pass and the fallback rungs, so keep it quiet
            with warnings.catch_warnings():
                warnings.filterwarnings("ignore", message="Solution may be inaccurate")
                prob.solve(solver=solver, **opts)
        except cp.error.SolverError as exc:
            last_error = exc
            continue

        status = prob.status
        if status == cp.INFEASIBLE:
            return SdpSolution(x_blocks=None, objective_value=float("nan"),
                               status="infeasible", gap=float("nan"))
        if status == cp.INFEASIBLE_INACCURATE:
            infeasible_hint = True
            continue
        if status in (cp.UNBOUNDED, cp.UNBOUNDED_INACCURATE):
            raise IllConditioned("problem is unbounded; check the constraint set")
        if any(x.value is None for x in blocks):
            if status == cp.USER_LIMIT:
                empty_limit = True
            last_diag = f"status {status} without a solution"
            continue

        # verification runs on the rescaled iterates X', the units the
        # solver actually worked in; the caller gets X = t X' back
        x_scaled = [np.asarray(x.value, dtype=complex) for x in blocks]
        x_scaled = [(x + x.conj().T) / 2.0 for x in x_scaled]
        x_vals = [x * t_var for x in x_scaled]
        primal = sum(_trace_real(a, x) for a, x in zip(problem.objective, x_vals))
        primal_solver = primal / obj_scale

        trace_scale = max((abs(float(np.real(np.trace(x)))) for x in x_scaled),
                          default=0.0)
        eig_floor = -(PSD_TRACE_TOL * trace_scale + 1e-12)
        min_eig_ok = all(np.linalg.eigvalsh(x).min() >= eig_floor for x in x_scaled)

        # dual bound sum lambda_m c_m from the returned multipliers, checked
        # in the solver's normalized units
        dual_ok = all(r[3].dual_value is not None for r in rows)
        if dual_ok:
            dual_bound = 0.0
            for mats, rhs, sense, cvx_con in rows:
                dual_bound += float(np.real(cvx_con.dual_value)) * rhs
            # PSD cone multipliers contribute zero to the bound at rhs 0
            gap = abs(dual_bound - primal_solver) / max(
                1.0, abs(primal_solver), abs(dual_bound))
            weak_duality = primal_solver <= dual_bound + GAP_TOL * max(1.0, abs(dual_bound))
        else:
            gap = float("nan")
            weak_duality = False

        feas_ok = True
        for mats, rhs, sense, _ in rows:
            lhs = sum(_trace_real(m, x) for m, x in zip(mats, x_scaled))
            viol = abs(lhs - rhs) if sense == "==" else max(0.0, lhs - rhs)
            if viol > VIOLATION_TOL:
                feas_ok = False
                break

        verified = dual_ok and weak_duality and min_eig_ok and feas_ok and gap <= GAP_TOL
        if verified:
            return SdpSolution(x_blocks=x_vals, objective_value=primal,
                               status="optimal", gap=gap)
        if status == cp.USER_LIMIT and limit_iterate is None:
            limit_iterate = SdpSolution(x_blocks=x_vals, objective_value=primal,
                                        status="max_iter", gap=gap)
        last_diag = (f"status {status} failed verification "
                     f"(gap={gap:.3g}, psd={min_eig_ok}, feasible={feas_ok})")

    if limit_iterate is not None:
        return limit_iterate
    if infeasible_hint:
        return SdpSolution(x_blocks=None, objective_value=float("nan"),
                           status="infeasible", gap=float("nan"))
    if empty_limit:
        raise MaxIterations(f"no usable iterate within {max_iter} iterations")
    if last_diag is not None:
        raise IllConditioned(f"no solver produced a verifiable solution; last: {last_diag}")
    raise IllConditioned(f"every solver errored out; last: {last_error}")
