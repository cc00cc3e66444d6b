"""Desk-scale spectral oracle: exact ground energies, operator norms, and
promise-problem decisions.

Three paths, picked automatically: a closed-form minimum for diagonal
operators, dense Hermitian diagonalization up to dimension 2**12, and a
restarted Krylov iteration with full reorthogonalization above that
(matrix-free for Pauli sums, up to dimension 2**24).  The iterative
start vector comes from a fixed seed, so results are deterministic.

Certified error bounds fold the Ritz residual together with an absolute
1e-8 floor for the double-precision paths; the diagonal path is exact
up to input rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg as sla

from .instances import ProblemInstance, build_operator
from .pauli import CapacityError, SparseOperator

__all__ = [
    "SpectralResult",
    "ConvergenceError",
    "ground_energy",
    "operator_norm",
    "full_spectrum",
    "weyl_check",
    "WeylReport",
    "decide_promise",
    "PromiseDecision",
    "YES",
    "NO",
    "PROMISE_VIOLATED",
]

DENSE_MAX_DIM = 1 << 12
ITERATIVE_MAX_DIM = 1 << 24
ABS_ERROR_FLOOR = 1e-8
DEFAULT_SEED = 7

YES = "Yes"
NO = "No"
PROMISE_VIOLATED = "PromiseViolated"


class ConvergenceError(RuntimeError):
    """The Krylov iteration hit its restart cap before converging."""


@dataclass(frozen=True)
class SpectralResult:
    value: float
    residual: float
    method: str
    error_bound: float
    iterations: int = 0


def _dense_min(op: SparseOperator) -> SpectralResult:
    a = op.dense(max_dim=DENSE_MAX_DIM)
    vals, vecs = sla.eigh(a, subset_by_index=[0, 0])
    lam = float(vals[0])
    v = vecs[:, 0]
    residual = float(np.linalg.norm(a @ v - lam * v))
    return SpectralResult(lam, residual, "dense", residual + ABS_ERROR_FLOOR)


def _diagonal_min(op: SparseOperator) -> SpectralResult:
    diag = op.diagonal_vector()
    lam = float(diag.min()) if diag.size else 0.0
    scale = float(np.abs(diag).max()) if diag.size else 0.0
    return SpectralResult(lam, 0.0, "diagonal", 1e-12 * max(1.0, scale))


def _lanczos_min(matvec, dim: int, *, seed: int, res_tol: float = 1e-9,
                 ritz_tol: float = 1e-12, block: int = 32,
                 max_restarts: int = 400) -> tuple[float, float, int]:
    """Restarted Lanczos with full reorthogonalization; returns the
    minimum Ritz value, its residual norm, and the matvec count."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    theta_prev = None
    scale = 1e-300
    n_matvec = 0
    for _ in range(max_restarts):
        basis = np.empty((block, dim))
        alphas = np.empty(block)
        betas = np.empty(max(block - 1, 1))
        basis[0] = v
        w = matvec(v)
        n_matvec += 1
        alphas[0] = v @ w
        w = w - alphas[0] * v
        m = 1
        for j in range(1, block):
            for _ in range(2):  # full reorthogonalization, repeated once
                w -= basis[:j].T @ (basis[:j] @ w)
            b = float(np.linalg.norm(w))
            if b <= 1e-14 * max(scale, 1.0):
                break
            betas[j - 1] = b
            vj = w / b
            basis[j] = vj
            w = matvec(vj)
            n_matvec += 1
            alphas[j] = vj @ w
            w = w - alphas[j] * vj - b * basis[j - 1]
            m = j + 1
        if m == 1:
            evals = alphas[:1]
            y = np.ones(1)
        else:
            evals, evecs = sla.eigh_tridiagonal(alphas[:m], betas[:m - 1])
            y = evecs[:, 0]
        scale = max(scale, float(abs(evals[0])), float(abs(evals[-1])))
        theta = float(evals[0])
        v = basis[:m].T @ y
        v /= np.linalg.norm(v)
        r = matvec(v) - theta * v
        n_matvec += 1
        residual = float(np.linalg.norm(r))
        if (theta_prev is not None
                and abs(theta - theta_prev) <= ritz_tol * max(scale, 1.0)
                and residual <= res_tol * max(scale, 1.0)):
            return theta, residual, n_matvec
        theta_prev = theta
    raise ConvergenceError(
        f"no convergence after {max_restarts} restarts (last residual {residual:.3e})")


def _iterative_min(op: SparseOperator, seed: int,
                   res_tol: float = 1e-9) -> SpectralResult:
    if op.dim > ITERATIVE_MAX_DIM:
        raise CapacityError(f"dim {op.dim} exceeds iterative cap {ITERATIVE_MAX_DIM}")
    theta, residual, n_matvec = _lanczos_min(op.matvec, op.dim, seed=seed,
                                             res_tol=res_tol)
    return SpectralResult(theta, residual, "iterative",
                          residual + ABS_ERROR_FLOOR, iterations=n_matvec)


def ground_energy(op: SparseOperator, method: str = "auto", *,
                  seed: int = DEFAULT_SEED,
                  res_tol: float = 1e-9) -> SpectralResult:
    """Minimum eigenvalue with a certified error bound.

    Raises :class:`ConvergenceError` rather than returning an
    unconverged value, and :class:`CapacityError` above the method caps.
    """
    if method == "auto":
        if op.diagonal:
            method = "diagonal"
        elif op.dim <= DENSE_MAX_DIM:
            method = "dense"
        else:
            method = "iterative"
    if method == "diagonal":
        return _diagonal_min(op)
    if method == "dense":
        return _dense_min(op)
    if method == "iterative":
        return _iterative_min(op, seed, res_tol)
    raise ValueError(f"unknown method {method!r}")


def operator_norm(op: SparseOperator, method: str = "auto", *,
                  seed: int = DEFAULT_SEED) -> float:
    """Largest absolute eigenvalue."""
    if method == "auto":
        if op.diagonal:
            method = "diagonal"
        elif op.dim <= DENSE_MAX_DIM:
            method = "dense"
        else:
            method = "iterative"
    if method == "diagonal":
        diag = op.diagonal_vector()
        return float(np.abs(diag).max()) if diag.size else 0.0
    if method == "dense":
        vals = sla.eigvalsh(op.dense(max_dim=DENSE_MAX_DIM))
        return float(np.abs(vals).max()) if vals.size else 0.0
    low = _iterative_min(op, seed).value
    high = -_lanczos_min(lambda x: -op.matvec(x), op.dim, seed=seed)[0]
    return max(abs(low), abs(high))


def full_spectrum(op: SparseOperator, max_dim: int = DENSE_MAX_DIM) -> np.ndarray:
    """All eigenvalues, ascending (dense only)."""
    return np.asarray(sla.eigvalsh(op.dense(max_dim=max_dim)))


@dataclass(frozen=True)
class WeylReport:
    delta_lambda: float
    norm_difference: float
    allowance: float
    ok: bool


def weyl_check(op_a: SparseOperator, op_b: SparseOperator,
               method: str = "auto", *, seed: int = DEFAULT_SEED,
               allowance: float = ABS_ERROR_FLOOR) -> WeylReport:
    """Eigenvalue-perturbation check: |lambda(A) - lambda(B)| must not
    exceed ||A - B|| (plus the numerical allowance).  Returns both sides."""
    if op_a.dim != op_b.dim:
        raise ValueError("operators live on different dimensions")
    la = ground_energy(op_a, method, seed=seed).value
    lb = ground_energy(op_b, method, seed=seed).value
    diff_norm = operator_norm(op_a - op_b, method, seed=seed)
    delta = abs(la - lb)
    return WeylReport(delta, diff_norm, allowance, delta <= diff_norm + allowance)


@dataclass(frozen=True)
class PromiseDecision:
    verdict: str
    value: float | None
    error_bound: float | None
    diagnostic: str = ""


def decide_promise(inst: ProblemInstance, method: str = "auto", *,
                   seed: int = DEFAULT_SEED,
                   res_tol: float = 1e-9) -> PromiseDecision:
    """Decide Yes (lambda < alpha) vs No (lambda > beta) via the oracle.

    Instances decidable from the a-priori norm bound alone skip the
    diagonalization.  When lambda falls between the thresholds, or within
    the certified error of one, the verdict is PromiseViolated with a
    diagnostic.
    """
    bound = inst.norm_bound()
    alpha, beta = inst.alpha.value(), inst.beta.value()
    if alpha > bound:
        return PromiseDecision(YES, None, None, "norm-bound fast path: |lambda| <= bound < alpha")
    if beta < -bound:
        return PromiseDecision(NO, None, None, "norm-bound fast path: |lambda| >= -bound > beta")
    op = build_operator(inst)
    res = ground_energy(op, method, seed=seed, res_tol=res_tol)
    lam = Fraction(res.value)
    err = Fraction(res.error_bound)
    if lam + err < alpha:
        return PromiseDecision(YES, res.value, res.error_bound)
    if lam - err > beta:
        return PromiseDecision(NO, res.value, res.error_bound)
    if lam - err >= alpha and lam + err <= beta:
        msg = "lambda lies between the thresholds"
    else:
        msg = "lambda within the certified error bound of a threshold"
    return PromiseDecision(PROMISE_VIOLATED, res.value, res.error_bound, msg)
