"""Iteration loops for sketched zeroth-order descent, its Hessian-aware
variant, and the full finite-difference baseline, with pluggable step-size
policies (fixed, known-trace, trace-adaptive, inverse-lmax), stopping
criteria, and per-iteration telemetry."""

import dataclasses
from dataclasses import dataclass

import numpy as np

from .core import power_iteration_sym, RngStream
from .errors import CapabilityError, ConfigError, NumericError, StateError
from .estimator import (Preconditioner, zo_full_fd, zo_grad_and_trace,
                        zo_gradient, zo_gradient_precond)
from .oracles import QuadraticObjective
from .sketch import SketchSpec, sample_sketch

_DIVERGENCE_MARGIN = 1e12
METHODS = ("zo_sketch", "zo_hessian_aware", "zo_gd")


@dataclass(frozen=True)
class FixedStep:
    """Constant step size."""

    eta: float

    def __post_init__(self):
        if self.eta < 0:
            raise ConfigError(f"step size must be >= 0, got {self.eta}")

    def bind(self, objective, cfg, x0):
        return _Bound(eta_const=self.eta)


@dataclass(frozen=True)
class KnownTraceStep:
    """eta = ell / tr(Hessian), the practical known-trace step for
    sketched methods (requires white-box trace access at x0)."""

    def bind(self, objective, cfg, x0):
        if cfg.sketch is None:
            raise ConfigError("known_trace policy needs a sketch spec for ell")
        tr = objective.hessian_trace(x0)
        if tr <= 0:
            raise ConfigError(f"known_trace needs positive Hessian trace, got {tr}")
        return _Bound(eta_const=cfg.sketch.ell / tr)


@dataclass(frozen=True)
class AdaptiveTraceStep:
    """eta_t = 1 / (c * max(tau_t, floor)) from the per-iteration trace
    estimate. The floor (default 1e-12 * max(1, |tau_0|)) guards against
    non-positive trace estimates under noise."""

    c: float = 4.0
    floor: float | None = None

    def __post_init__(self):
        if self.c <= 0:
            raise ConfigError(f"c must be > 0, got {self.c}")
        if self.floor is not None and self.floor <= 0:
            raise ConfigError(f"floor must be > 0, got {self.floor}")

    def bind(self, objective, cfg, x0):
        return _Bound(adaptive_c=self.c, adaptive_floor=self.floor)


@dataclass(frozen=True)
class InverseLmaxStep:
    """eta = 1 / lmax, the classical gradient-descent step for the full
    finite-difference baseline. ``lmax`` is resolved from the objective's
    spectral data when available, else must be supplied (e.g. from power
    iteration in the harness)."""

    lmax: float | None = None

    def bind(self, objective, cfg, x0):
        lmax = self.lmax
        if lmax is None:
            if isinstance(objective, QuadraticObjective):
                lmax = float(objective.hess_eigs[0])
            else:
                raise ConfigError("inverse_lmax needs an explicit lmax for this objective")
        if lmax <= 0:
            raise ConfigError(f"lmax must be > 0, got {lmax}")
        return _Bound(eta_const=1.0 / lmax)


class _Bound:
    """Per-run policy state: either a constant step or the adaptive rule."""

    def __init__(self, eta_const=None, adaptive_c=None, adaptive_floor=None):
        self.eta_const = eta_const
        self.adaptive_c = adaptive_c
        self.floor = adaptive_floor

    @property
    def needs_trace(self) -> bool:
        return self.adaptive_c is not None

    def eta(self, tau: float | None = None) -> float:
        if self.adaptive_c is None:
            return self.eta_const
        if self.floor is None:
            self.floor = 1e-12 * max(1.0, abs(tau))
        return 1.0 / (self.adaptive_c * max(tau, self.floor))


@dataclass
class RunConfig:
    """One method's run parameters. ``gap_target`` is relative to the
    initial gap. At least one stopping criterion must be set."""

    method: str
    sketch: SketchSpec | None = None
    alpha: float = 0.1
    policy: object | None = None
    max_queries: int | None = None
    max_iters: int | None = None
    gap_target: float | None = None
    record_every: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.policy is None:
            self.policy = InverseLmaxStep() if self.method == "zo_gd" else KnownTraceStep()
        if self.method != "zo_gd" and self.sketch is None:
            raise ConfigError(f"{self.method} requires a sketch spec")
        if self.max_queries is None and self.max_iters is None and self.gap_target is None:
            raise ConfigError("set at least one stopping criterion")
        if self.alpha <= 0:
            raise ConfigError(f"alpha must be > 0, got {self.alpha}")
        if self.record_every < 1:
            raise ConfigError(f"record_every must be >= 1, got {self.record_every}")


@dataclass
class IterRecord:
    iter: int
    queries: int
    f_value: float
    gap: float | None
    eta: float | None = None
    tau: float | None = None


@dataclass
class RunResult:
    records: list
    final_x: np.ndarray
    total_queries: int
    termination_reason: str


def _gap_or_none(objective, x):
    if not np.all(np.isfinite(x)):
        return None
    try:
        return objective.gap(x)
    except (AttributeError, StateError):
        return None


def _run_loop(oracle, x0, cfg, iter_cost, estimate):
    """Shared driver: stopping checks, telemetry, update, divergence guard.

    ``estimate(x, t, bound)`` returns (direction, eta, tau_or_none) and is
    responsible for the oracle queries of one iteration.
    """
    objective = oracle.objective
    x = np.array(x0, dtype=np.float64)
    bound = cfg.policy.bind(objective, cfg, x)
    f_start = oracle.peek(x)
    gap = _gap_or_none(objective, x)
    gap0 = gap
    records = []
    t = 0
    while True:
        if cfg.max_iters is not None and t >= cfg.max_iters:
            reason = "iters"
            break
        if cfg.max_queries is not None and oracle.queries + iter_cost > cfg.max_queries:
            reason = "budget"
            break
        if cfg.gap_target is not None and gap is not None and gap <= cfg.gap_target * gap0:
            reason = "gap_target"
            break
        rec = None
        if t % cfg.record_every == 0:
            rec = IterRecord(t, oracle.queries, oracle.peek(x), gap)
            records.append(rec)
        try:
            g, eta, tau = estimate(x, t, bound)
        except NumericError:
            reason = "numeric"
            break
        if rec is not None:
            rec.eta = eta
            rec.tau = tau
        x = x - eta * g
        t += 1
        if np.all(np.isfinite(x)):
            gap = _gap_or_none(objective, x)
            f_now = oracle.peek(x)
        else:
            gap = None
            f_now = float("nan")
        if not np.isfinite(f_now) or f_now > f_start + _DIVERGENCE_MARGIN:
            reason = "numeric"
            break
    if not records or records[-1].iter != t:
        f_final = oracle.peek(x) if np.all(np.isfinite(x)) else float("nan")
        records.append(IterRecord(t, oracle.queries, f_final, gap))
    return RunResult(records, x, oracle.queries, reason)


def run_zo_sketch(oracle, x0, cfg: RunConfig) -> RunResult:
    """Sketched zeroth-order descent: a fresh sketch per iteration (stream
    derived from the sketch seed and the iteration index), the sketched
    gradient estimate, and x <- x - eta_t g. With the adaptive-trace policy
    the gradient and trace come from one fused set of queries."""
    if cfg.method != "zo_sketch":
        raise ConfigError(f"config method is {cfg.method!r}, expected 'zo_sketch'")
    base = cfg.sketch
    adaptive = isinstance(cfg.policy, AdaptiveTraceStep)
    iter_cost = 2 * base.ell + 1 if adaptive else 2 * base.ell

    def estimate(x, t, bound):
        S = sample_sketch(dataclasses.replace(base, seed=base.seed.derive(t)))
        if bound.needs_trace:
            est, tau = zo_grad_and_trace(oracle, x, S, cfg.alpha)
            return est.direction, bound.eta(tau), tau
        est = zo_gradient(oracle, x, S, cfg.alpha)
        return est.direction, bound.eta(), None

    return _run_loop(oracle, x0, cfg, iter_cost, estimate)


def run_zo_hessian_aware(oracle, x0, P: Preconditioner, cfg: RunConfig) -> RunResult:
    """Hessian-aware descent along H^{-1/2}-transformed sketch directions.
    With the identity preconditioner the trajectory coincides with
    run_zo_sketch under the same seeds."""
    if cfg.method != "zo_hessian_aware":
        raise ConfigError(f"config method is {cfg.method!r}, expected 'zo_hessian_aware'")
    if isinstance(cfg.policy, AdaptiveTraceStep):
        raise ConfigError("adaptive_trace is not supported with zo_hessian_aware")
    base = cfg.sketch

    def estimate(x, t, bound):
        S = sample_sketch(dataclasses.replace(base, seed=base.seed.derive(t)))
        est = zo_gradient_precond(oracle, x, S, cfg.alpha, P)
        return est.direction, bound.eta(), None

    return _run_loop(oracle, x0, cfg, 2 * base.ell, estimate)


def run_zo_gd(oracle, x0, cfg: RunConfig) -> RunResult:
    """Full central-difference baseline: 2d queries per iteration and the
    classical step."""
    if cfg.method != "zo_gd":
        raise ConfigError(f"config method is {cfg.method!r}, expected 'zo_gd'")
    if isinstance(cfg.policy, AdaptiveTraceStep):
        raise ConfigError("adaptive_trace is not supported with zo_gd")
    d = oracle.objective.dim

    def estimate(x, t, bound):
        est = zo_full_fd(oracle, x, cfg.alpha)
        return est.direction, bound.eta(), None

    return _run_loop(oracle, x0, cfg, 2 * d, estimate)


def theorem1_step(objective, k: int, x=None) -> float:
    """Fixed step (5 ||H||_2 + tr(H)/k)^(-1) from the full Hessian's
    spectral norm and trace (white-box)."""
    if isinstance(objective, QuadraticObjective):
        lmax = float(objective.hess_eigs[0])
        tr = objective.hessian_trace(None)
    else:
        if x is None:
            x = np.zeros(objective.dim)
        lmax = power_iteration_sym(lambda v: objective.hessian_matvec(x, v),
                                   objective.dim, iters=200, tol=1e-12,
                                   rng=RngStream(23))
        tr = objective.hessian_trace(x)
    return 1.0 / (5.0 * lmax + tr / k)


def theorem2_step(objective, P: Preconditioner, k: int, x=None,
                  iters: int = 100, dense_cap: int = 512) -> float:
    """Fixed step (5 ||H^{-1/2} A H^{-1/2}||_2 + tr(H^{-1} A)/k)^(-1) for the
    Hessian-aware method (white-box). The trace is accumulated over basis
    vectors, so the dimension is capped at ``dense_cap``."""
    d = objective.dim
    if x is None:
        x = np.zeros(d)
    if P.is_identity:
        return theorem1_step(objective, k, x=x)

    def whitened(v):
        return P.inv_sqrt_apply(objective.hessian_matvec(x, P.inv_sqrt_apply(v)))

    norm = power_iteration_sym(whitened, d, iters=iters, tol=1e-12, rng=RngStream(29))
    if d > dense_cap:
        raise CapabilityError(f"trace of the whitened Hessian needs d <= {dense_cap}, got {d}")
    V = P.inv_sqrt_apply(np.eye(d))
    tr = 0.0
    for i in range(d):
        tr += float(V[:, i] @ objective.hessian_matvec(x, V[:, i]))
    return 1.0 / (5.0 * norm + tr / k)
