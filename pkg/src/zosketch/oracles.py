"""Objective oracles: synthetic convex quadratics with controlled spectra,
L2-regularized logistic regression on LIBSVM data, bounded deterministic
pseudo-noise, and the query-counting wrapper that the zeroth-order path is
restricted to.

White-box quantities (gradients, Hessian matvecs, Hessian traces, optima)
live on the objective objects and never touch the query counter; the
counting oracle exposes function values only.
"""

import hashlib
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy import sparse
from scipy.special import expit

from .core import RngStream, power_iteration_sym, random_orthogonal
from .errors import (ConstructionError, DimensionError, NumericError,
                     ParseError, StateError)

_EVAL_CHUNK = 64  # point-batch width for logistic value_many


@dataclass(frozen=True)
class Decay:
    """Eigenvalue decay profile for synthetic quadratics.

    ``exp`` uses rate**i (rate in (0,1)); ``poly_inv`` uses 1/i and
    ``poly_inv_sqrt`` uses 1/sqrt(i), all with the largest eigenvalue 1.
    """

    kind: str
    rate: float | None = None

    def __post_init__(self):
        if self.kind not in ("exp", "poly_inv", "poly_inv_sqrt"):
            raise ConstructionError(f"unknown decay kind {self.kind!r}")
        if self.kind == "exp":
            if self.rate is None or not (0.0 < self.rate < 1.0):
                raise ConstructionError(f"exp decay rate must be in (0,1), got {self.rate}")
        elif self.rate is not None:
            raise ConstructionError(f"{self.kind} takes no rate parameter")

    @classmethod
    def exp(cls, rate: float) -> "Decay":
        return cls("exp", rate)

    @classmethod
    def poly_inv(cls) -> "Decay":
        return cls("poly_inv")

    @classmethod
    def poly_inv_sqrt(cls) -> "Decay":
        return cls("poly_inv_sqrt")

    def eigenvalues(self, d: int) -> np.ndarray:
        if d < 1:
            raise DimensionError(f"dimension must be >= 1, got {d}")
        i = np.arange(d, dtype=np.float64)
        if self.kind == "exp":
            return self.rate ** i
        if self.kind == "poly_inv":
            return 1.0 / (i + 1.0)
        return 1.0 / np.sqrt(i + 1.0)


@dataclass(frozen=True)
class ObjectiveMeta:
    """Optional analytic constants of an objective, for policies and tests."""

    L: float | None = None
    mu: float | None = None
    hessian_lipschitz: float | None = None
    known_trace: float | None = None

    def __post_init__(self):
        for name in ("L", "mu", "hessian_lipschitz", "known_trace"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ConstructionError(f"{name} must be non-negative, got {v}")


class QuadraticObjective:
    """phi(x) = 1/2 x^T A x + ridge/2 ||x||^2 - <x, a> with A = U diag(lambdas) U^T.

    Stores the spectral factorization, so evaluation, gradients, Hessian
    matvecs, the exact optimum, and the optimality gap are all available in
    closed form.
    """

    def __init__(self, U: np.ndarray, lambdas: np.ndarray, ridge: float, a: np.ndarray):
        U = np.asarray(U, dtype=np.float64)
        lambdas = np.asarray(lambdas, dtype=np.float64)
        a = np.asarray(a, dtype=np.float64)
        d = lambdas.shape[0]
        if U.shape != (d, d) or a.shape != (d,):
            raise DimensionError("U, lambdas, a have inconsistent shapes")
        if np.any(lambdas <= 0):
            raise ConstructionError("eigenvalues must be positive")
        if np.any(np.diff(lambdas) > 0):
            raise ConstructionError("eigenvalues must be sorted non-increasing")
        if ridge < 0:
            raise ConstructionError(f"ridge must be >= 0, got {ridge}")
        self.U = U
        self.lambdas = lambdas
        self.ridge = float(ridge)
        self.a = a
        self.d = d

    @property
    def dim(self) -> int:
        return self.d

    @cached_property
    def hess_eigs(self) -> np.ndarray:
        """Eigenvalues of the full Hessian A + ridge*I."""
        return self.lambdas + self.ridge

    @cached_property
    def xstar(self) -> np.ndarray:
        """Exact minimizer (A + ridge I)^{-1} a via the factorization."""
        return self.U @ ((self.U.T @ self.a) / self.hess_eigs)

    @cached_property
    def f_star(self) -> float:
        return float(self.value(self.xstar))

    @property
    def meta(self) -> ObjectiveMeta:
        return ObjectiveMeta(L=float(self.hess_eigs[0]),
                             mu=float(self.hess_eigs[-1]),
                             hessian_lipschitz=0.0,
                             known_trace=self.hessian_trace(None))

    def value(self, x: np.ndarray) -> float:
        z = self.U.T @ x
        quad = 0.5 * float(z * z @ self.lambdas)
        return quad + 0.5 * self.ridge * float(x @ x) - float(x @ self.a)

    def value_many(self, X: np.ndarray) -> np.ndarray:
        Z = X @ self.U
        quad = 0.5 * (Z * Z @ self.lambdas)
        return quad + 0.5 * self.ridge * (X * X).sum(axis=1) - X @ self.a

    def gradient(self, x: np.ndarray) -> np.ndarray:
        z = self.U.T @ x
        return self.U @ (self.lambdas * z) + self.ridge * x - self.a

    def hessian_matvec(self, x, v: np.ndarray) -> np.ndarray:
        if v.shape != (self.d,):
            raise DimensionError(f"expected shape ({self.d},), got {v.shape}")
        z = self.U.T @ v
        return self.U @ (self.lambdas * z) + self.ridge * v

    def hessian_trace(self, x) -> float:
        return float(self.lambdas.sum() + self.d * self.ridge)

    def gap(self, x: np.ndarray) -> float:
        """phi(x) - phi(x*), evaluated spectrally so it never cancels."""
        z = self.U.T @ (x - self.xstar)
        return 0.5 * float(z * z @ self.hess_eigs)


def make_quadratic(d: int, decay: Decay, ridge: float, rng: RngStream) -> QuadraticObjective:
    """Random quadratic with the given spectrum: A = U diag(lambdas) U^T,
    Haar-like U and standard-Gaussian linear term, all derived from ``rng``."""
    lambdas = decay.eigenvalues(d)
    U = random_orthogonal(d, rng.derive(0))
    a = rng.derive(1).generator().standard_normal(d)
    return QuadraticObjective(U, lambdas, ridge, a)


@dataclass
class LogisticDataset:
    """Sparse binary-classification data with labels in {-1, +1}."""

    X: sparse.csr_matrix
    y: np.ndarray
    n: int
    d: int
    ridge: float = 1e-4
    source_path: str | None = None
    content_hash: str | None = None


def load_libsvm(path, d_hint: int | None = None, ridge: float = 1e-4) -> LogisticDataset:
    """Parse a LIBSVM-format text file (1-based indices, labels {-1,+1} or {0,1})."""
    path = Path(path)
    raw = path.read_bytes()
    content_hash = hashlib.blake2b(raw, digest_size=16).hexdigest()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"file is not UTF-8 text: {e}") from None
    labels = []
    data, indices, indptr = [], [], [0]
    max_idx = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        tokens = line.split()
        try:
            labels.append(float(tokens[0]))
        except ValueError:
            raise ParseError(f"bad label {tokens[0]!r}", lineno) from None
        seen = set()
        for tok in tokens[1:]:
            idx_s, _, val_s = tok.partition(":")
            if not val_s:
                raise ParseError(f"feature {tok!r} is not in index:value form", lineno)
            try:
                idx = int(idx_s)
                val = float(val_s)
            except ValueError:
                raise ParseError(f"feature {tok!r} is not in index:value form", lineno) from None
            if idx < 1:
                raise ParseError(f"feature index {idx} must be >= 1", lineno)
            if idx in seen:
                raise ParseError(f"duplicate feature index {idx}", lineno)
            seen.add(idx)
            indices.append(idx - 1)
            data.append(val)
            max_idx = max(max_idx, idx)
        indptr.append(len(indices))
    if not labels:
        raise ParseError("empty dataset")
    uniq = set(labels)
    if uniq <= {-1.0, 1.0}:
        y = np.asarray(labels)
    elif uniq <= {0.0, 1.0}:
        y = np.asarray(labels) * 2.0 - 1.0
    else:
        raise ParseError(f"labels must be in {{-1,+1}} or {{0,1}}, found {sorted(uniq)[:5]}")
    d = max(max_idx, d_hint or 0)
    if d == 0:
        raise ParseError("dataset has no features")
    X = sparse.csr_matrix((np.asarray(data), np.asarray(indices, dtype=np.int64),
                           np.asarray(indptr, dtype=np.int64)), shape=(len(labels), d))
    X.sort_indices()
    return LogisticDataset(X=X, y=y, n=len(labels), d=d, ridge=ridge,
                           source_path=str(path), content_hash=content_hash)


class LogisticObjective:
    """phi(x) = (1/n) sum log(1 + exp(-y_i <a_i, x>)) + ridge/2 ||x||^2."""

    def __init__(self, dataset: LogisticDataset, ridge: float | None = None):
        self.data = dataset
        self.ridge = float(dataset.ridge if ridge is None else ridge)
        if self.ridge <= 0:
            raise ConstructionError(f"logistic ridge must be > 0, got {self.ridge}")
        self.d = dataset.d
        self.n = dataset.n
        self._reference: tuple[float, np.ndarray] | None = None

    @property
    def dim(self) -> int:
        return self.d

    @cached_property
    def row_norms2(self) -> np.ndarray:
        return np.asarray(self.data.X.multiply(self.data.X).sum(axis=1)).ravel()

    @property
    def meta(self) -> ObjectiveMeta:
        return ObjectiveMeta(mu=self.ridge)

    def _margins(self, x: np.ndarray) -> np.ndarray:
        return self.data.y * (self.data.X @ x)

    def value(self, x: np.ndarray) -> float:
        m = self._margins(x)
        return float(np.logaddexp(0.0, -m).mean()) + 0.5 * self.ridge * float(x @ x)

    def value_many(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0])
        for lo in range(0, X.shape[0], _EVAL_CHUNK):
            P = X[lo:lo + _EVAL_CHUNK]
            M = self.data.y[:, None] * (self.data.X @ P.T)
            out[lo:lo + _EVAL_CHUNK] = (np.logaddexp(0.0, -M).mean(axis=0)
                                        + 0.5 * self.ridge * (P * P).sum(axis=1))
        return out

    def gradient(self, x: np.ndarray) -> np.ndarray:
        m = self._margins(x)
        p = expit(-m)
        return -(self.data.X.T @ (self.data.y * p)) / self.n + self.ridge * x

    def hessian_matvec(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        if v.shape != (self.d,):
            raise DimensionError(f"expected shape ({self.d},), got {v.shape}")
        m = self._margins(x)
        w = expit(m) * expit(-m)
        return (self.data.X.T @ (w * (self.data.X @ v))) / self.n + self.ridge * v

    def hessian_trace(self, x: np.ndarray) -> float:
        m = self._margins(x)
        w = expit(m) * expit(-m)
        return float(w @ self.row_norms2) / self.n + self.ridge * self.d

    def set_reference(self, f_star: float, x_star: np.ndarray) -> None:
        self._reference = (float(f_star), np.asarray(x_star, dtype=np.float64))

    @property
    def f_star(self) -> float:
        if self._reference is None:
            raise StateError("reference optimum not computed; call reference_optimum first")
        return self._reference[0]

    @property
    def x_star(self) -> np.ndarray:
        if self._reference is None:
            raise StateError("reference optimum not computed; call reference_optimum first")
        return self._reference[1]

    def gap(self, x: np.ndarray) -> float:
        """phi(x) - phi(x*) against the cached reference, clamped at 0."""
        return max(self.value(x) - self.f_star, 0.0)


def reference_optimum(obj: LogisticObjective, cache_dir=None, grad_tol: float = 1e-10,
                      max_iters: int = 200_000) -> tuple[float, np.ndarray]:
    """High-accuracy reference solution for a logistic objective.

    Runs strongly convex Nesterov iterations (mu = ridge, L from power
    iteration on the Hessian at 0) from x0 = 0 until the gradient norm
    drops below ``grad_tol`` or stops improving. The result is cached as
    JSON beside the dataset (or under ``cache_dir``) keyed by the dataset
    content hash and ridge value, and installed on the objective.
    """
    cache_file = _reference_cache_path(obj, cache_dir)
    if cache_file is not None and cache_file.exists():
        blob = json.loads(cache_file.read_text())
        if (blob.get("dataset_hash") == obj.data.content_hash
                and blob.get("lambda") == obj.ridge):
            x_star = np.asarray(blob["x_star"], dtype=np.float64)
            obj.set_reference(blob["f_star"], x_star)
            return blob["f_star"], x_star

    x0 = np.zeros(obj.d)
    L = power_iteration_sym(lambda v: obj.hessian_matvec(x0, v), obj.d,
                            iters=200, tol=1e-12, rng=RngStream(17))
    L = max(L * 1.01, obj.ridge)
    mu = obj.ridge
    q = mu / L
    beta = (1.0 - math.sqrt(q)) / (1.0 + math.sqrt(q))
    x = x0
    y = x0.copy()
    best = math.inf
    stale = 0
    for _ in range(max_iters):
        g = obj.gradient(y)
        x_new = y - g / L
        y = x_new + beta * (x_new - x)
        x = x_new
        gnorm = float(np.linalg.norm(obj.gradient(x)))
        if gnorm <= grad_tol:
            break
        if gnorm < 0.9 * best:
            best = gnorm
            stale = 0
        else:
            stale += 1
            if stale > 2000:  # at the floating-point floor
                break
    f_star = obj.value(x)
    obj.set_reference(f_star, x)
    if cache_file is not None:
        blob = {"schema_version": 1, "dataset_hash": obj.data.content_hash,
                "lambda": obj.ridge, "f_star": f_star, "x_star": x.tolist()}
        cache_file.write_text(json.dumps(blob))
    return f_star, x


def _reference_cache_path(obj: LogisticObjective, cache_dir) -> Path | None:
    if obj.data.content_hash is None:
        return None
    name = f"refopt-{obj.data.content_hash[:16]}-lam{obj.ridge:g}.json"
    if cache_dir is not None:
        return Path(cache_dir) / name
    if obj.data.source_path is not None:
        return Path(obj.data.source_path).parent / name
    return None


@dataclass(frozen=True)
class NoiseSpec:
    """Bounded deterministic pseudo-noise zeta with |zeta(x)| <= sigma.

    ``uniform_hash`` derives zeta(x) from a hash of x's IEEE-754 bytes and
    the noise seed, so identical x always sees identical noise.
    """

    sigma: float = 0.0
    mode: str = "none"
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ConstructionError(f"sigma must be >= 0, got {self.sigma}")
        if self.mode not in ("none", "uniform_hash"):
            raise ConstructionError(f"unknown noise mode {self.mode!r}")

    def zeta(self, x: np.ndarray) -> float:
        if self.mode == "none" or self.sigma == 0.0:
            return 0.0
        payload = np.ascontiguousarray(x, dtype=np.float64).tobytes()
        h = hashlib.blake2b(payload, digest_size=8,
                            key=(self.seed & (2 ** 64 - 1)).to_bytes(8, "little")).digest()
        u = int.from_bytes(h, "little") / 2.0 ** 64
        return self.sigma * (2.0 * u - 1.0)

    def zeta_many(self, X: np.ndarray) -> np.ndarray:
        if self.mode == "none" or self.sigma == 0.0:
            return np.zeros(X.shape[0])
        return np.array([self.zeta(row) for row in X])


class CountingOracle:
    """Noisy function-value access f(x) = phi(x) + zeta(x) with a monotone
    query counter. This is the only surface the zeroth-order path may use;
    white-box quantities stay on the objective."""

    def __init__(self, objective, noise: NoiseSpec = NoiseSpec()):
        self.objective = objective
        self.noise = noise
        self.queries = 0

    def _check(self, x: np.ndarray, ndim: int) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        want = (self.objective.dim,) if ndim == 1 else (x.shape[0], self.objective.dim)
        if x.ndim != ndim or x.shape != want:
            raise DimensionError(f"expected shape {want}, got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise NumericError("query point has non-finite entries")
        return x

    def eval(self, x: np.ndarray) -> float:
        x = self._check(x, 1)
        val = float(self.objective.value(x)) + self.noise.zeta(x)
        self.queries += 1
        return val

    def eval_many(self, X: np.ndarray) -> np.ndarray:
        X = self._check(X, 2)
        vals = self.objective.value_many(X) + self.noise.zeta_many(X)
        self.queries += X.shape[0]
        return vals

    def peek(self, x: np.ndarray) -> float:
        """f(x) for telemetry; does not count as a query."""
        x = self._check(x, 1)
        return float(self.objective.value(x)) + self.noise.zeta(x)
