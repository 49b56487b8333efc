"""Zeroth-order estimators built from paired oracle queries: the sketched
gradient, its Hessian-aware preconditioned variant, the full
central-difference gradient (Kiefer-Wolfowitz baseline), and the
second-difference trace estimate, with a fused gradient+trace path that
reuses one set of evaluations."""

from dataclasses import dataclass

import numpy as np

from .errors import ConstructionError, DimensionError, NumericError
from .sketch import SketchMatrix

_FD_CHUNK = 256  # coordinate-block width for the full finite-difference path


@dataclass(frozen=True)
class GradientEstimate:
    """A descent direction plus its query cost and smoothing radius."""

    direction: np.ndarray
    queries_used: int
    alpha: float


class Preconditioner:
    """The H_t abstraction: supplies H^{-1/2} applications for
    Hessian-aware descent. Either the identity or a spectral factorization
    U diag(evals) U^T with positive eigenvalues.

    ``rho`` records an estimate with rho * H <= A when known (1.0 for the
    exact Hessian)."""

    def __init__(self, kind: str, U=None, evals=None, rho: float | None = None):
        if kind not in ("identity", "spectral"):
            raise ConstructionError(f"unknown preconditioner kind {kind!r}")
        self.kind = kind
        self.rho = rho
        if kind == "spectral":
            U = np.asarray(U, dtype=np.float64)
            evals = np.asarray(evals, dtype=np.float64)
            if evals.ndim != 1 or U.shape != (evals.size, evals.size):
                raise DimensionError("U and evals have inconsistent shapes")
            if np.any(evals <= 0):
                raise ConstructionError("preconditioner eigenvalues must be positive")
            self.U = U
            self.evals = evals
        else:
            self.U = None
            self.evals = None

    @classmethod
    def identity(cls) -> "Preconditioner":
        return cls("identity", rho=None)

    @classmethod
    def spectral(cls, U, evals, rho: float | None = None) -> "Preconditioner":
        return cls("spectral", U=U, evals=evals, rho=rho)

    @classmethod
    def from_quadratic(cls, quad, rho: float = 1.0) -> "Preconditioner":
        """Exact-Hessian preconditioner of a quadratic objective."""
        return cls.spectral(quad.U, quad.hess_eigs, rho=rho)

    @property
    def is_identity(self) -> bool:
        return self.kind == "identity"

    def inv_sqrt_apply(self, V: np.ndarray) -> np.ndarray:
        """H^{-1/2} V for a vector or a d x m block of directions."""
        if self.is_identity:
            return V
        W = self.U.T @ V
        scale = 1.0 / np.sqrt(self.evals)
        W = W * (scale if V.ndim == 1 else scale[:, None])
        return self.U @ W


def _paired_evals(oracle, x, dirs, alpha):
    """f at x + alpha*dirs and x - alpha*dirs (2m queries), checked finite."""
    pts_plus = x[None, :] + alpha * dirs.T
    pts_minus = x[None, :] - alpha * dirs.T
    fp = oracle.eval_many(pts_plus)
    fm = oracle.eval_many(pts_minus)
    if not (np.all(np.isfinite(fp)) and np.all(np.isfinite(fm))):
        raise NumericError("oracle returned non-finite values")
    return fp, fm


def zo_gradient(oracle, x: np.ndarray, S: SketchMatrix, alpha: float) -> GradientEstimate:
    """Sketched gradient estimate from central differences along the
    columns of S: g = sum_i [f(x+a s_i) - f(x-a s_i)]/(2a) * s_i. 2*ell queries."""
    if alpha <= 0:
        raise ConstructionError(f"alpha must be > 0, got {alpha}")
    fp, fm = _paired_evals(oracle, x, S.to_dense(), alpha)
    coef = (fp - fm) / (2.0 * alpha)
    return GradientEstimate(S.apply(coef), 2 * S.ell, alpha)


def zo_gradient_precond(oracle, x: np.ndarray, S: SketchMatrix, alpha: float,
                        P: Preconditioner) -> GradientEstimate:
    """Hessian-aware direction: central differences along H^{-1/2} s_i,
    recombined with the same transformed directions. 2*ell queries.

    With the identity preconditioner this is exactly the plain sketched
    gradient (and shares its code path bit for bit)."""
    if P.is_identity:
        return zo_gradient(oracle, x, S, alpha)
    if alpha <= 0:
        raise ConstructionError(f"alpha must be > 0, got {alpha}")
    dirs = P.inv_sqrt_apply(S.to_dense())
    fp, fm = _paired_evals(oracle, x, dirs, alpha)
    coef = (fp - fm) / (2.0 * alpha)
    return GradientEstimate(dirs @ coef, 2 * S.ell, alpha)


def zo_full_fd(oracle, x: np.ndarray, alpha: float) -> GradientEstimate:
    """Full central-difference gradient along all d coordinates. 2*d queries."""
    if alpha <= 0:
        raise ConstructionError(f"alpha must be > 0, got {alpha}")
    d = x.shape[0]
    g = np.empty(d)
    for lo in range(0, d, _FD_CHUNK):
        idx = np.arange(lo, min(lo + _FD_CHUNK, d))
        rows = np.arange(idx.size)
        block = np.repeat(x[None, :], idx.size, axis=0)
        block[rows, idx] = x[idx] + alpha
        fp = oracle.eval_many(block)
        block[rows, idx] = x[idx] - alpha
        fm = oracle.eval_many(block)
        if not (np.all(np.isfinite(fp)) and np.all(np.isfinite(fm))):
            raise NumericError("oracle returned non-finite values")
        g[idx] = (fp - fm) / (2.0 * alpha)
    return GradientEstimate(g, 2 * d, alpha)


def trace_estimate(oracle, x: np.ndarray, S: SketchMatrix, alpha: float) -> float:
    """Second-difference Hessian-trace estimate
    tau = sum_i [f(x+a s_i) + f(x-a s_i) - 2 f(x)] / a^2. 2*ell+1 queries
    (the center value is evaluated once and shared)."""
    if alpha <= 0:
        raise ConstructionError(f"alpha must be > 0, got {alpha}")
    f0 = oracle.eval(x)
    fp, fm = _paired_evals(oracle, x, S.to_dense(), alpha)
    return float(np.sum(fp + fm - 2.0 * f0)) / alpha ** 2


def zo_grad_and_trace(oracle, x: np.ndarray, S: SketchMatrix,
                      alpha: float) -> tuple[GradientEstimate, float]:
    """Gradient estimate and trace estimate from one shared set of
    evaluations: 2*ell+1 queries total."""
    if alpha <= 0:
        raise ConstructionError(f"alpha must be > 0, got {alpha}")
    f0 = oracle.eval(x)
    fp, fm = _paired_evals(oracle, x, S.to_dense(), alpha)
    coef = (fp - fm) / (2.0 * alpha)
    tau = float(np.sum(fp + fm - 2.0 * f0)) / alpha ** 2
    return GradientEstimate(S.apply(coef), 2 * S.ell + 1, alpha), tau
