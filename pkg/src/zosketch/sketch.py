"""Oblivious sketching matrices whose columns serve as search directions.

Four families are provided: dense Gaussian (i.i.d. entries of variance
1/ell), Rademacher (+-1/sqrt(ell) entries), SRHT (signed, Hadamard-mixed,
uniformly sampled columns applied via the fast transform), and an
OSNAP-style sparse embedding (each input coordinate carries ``sparsity``
signed nonzeros of magnitude 1/sqrt(sparsity) spread over the ell
directions). All satisfy E[S S^T] = I_d.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .core import RngStream, fwht, spectral_norm_sym
from .errors import ConstructionError, DimensionError

KINDS = ("gaussian", "rademacher", "srht", "sparse")
_SPEC_KINDS = KINDS + ("custom",)


@dataclass(frozen=True)
class SketchSpec:
    """Parameters of one sketching matrix draw.

    ``k`` is the target-rank parameter used for matrix-product bound
    bookkeeping only; it defaults to ``max(1, ell // 4)`` and does not
    affect sampling.
    """

    kind: str
    d: int
    ell: int
    seed: RngStream = field(default_factory=lambda: RngStream(0))
    sparsity: int = 1
    k: int | None = None

    def __post_init__(self):
        if self.kind not in _SPEC_KINDS:
            raise ConstructionError(f"unknown sketch kind {self.kind!r}")
        if self.d < 1:
            raise ConstructionError(f"d must be >= 1, got {self.d}")
        if self.ell < 1:
            raise ConstructionError(f"ell must be >= 1, got {self.ell}")
        if self.kind == "sparse" and not (1 <= self.sparsity <= self.ell):
            raise ConstructionError(
                f"sparsity must be in [1, ell], got {self.sparsity} with ell={self.ell}")
        if self.k is None:
            object.__setattr__(self, "k", max(1, self.ell // 4))
        elif self.k < 1:
            raise ConstructionError(f"k must be >= 1, got {self.k}")

    @property
    def padded_dim(self) -> int:
        """Internal Hadamard dimension for srht: next power of two >= d."""
        return 1 << max(0, (self.d - 1).bit_length())


class SketchMatrix:
    """A sampled d x ell sketch; immutable after construction.

    Columns are exposed as search directions. ``apply`` computes ``S y``,
    ``apply_transpose`` computes ``S^T x``; for the srht kind both use one
    Walsh-Hadamard pass over the padded dimension instead of materialized
    columns.
    """

    def __init__(self, spec: SketchSpec, payload: dict):
        self.spec = spec
        self._p = payload

    @classmethod
    def from_dense(cls, mat: np.ndarray) -> "SketchMatrix":
        """Wrap an explicit d x ell direction matrix (testing/baselines)."""
        mat = np.asarray(mat, dtype=np.float64)
        if mat.ndim != 2:
            raise DimensionError("dense sketch payload must be 2-d")
        d, ell = mat.shape
        return cls(SketchSpec("custom", d, ell), {"mat": np.asfortranarray(mat)})

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def ell(self) -> int:
        return self.spec.ell

    def _is_dense(self) -> bool:
        return "mat" in self._p

    def column(self, i: int) -> np.ndarray:
        """The i-th search direction as a dense d-vector."""
        if not 0 <= i < self.ell:
            raise DimensionError(f"column index {i} out of range [0, {self.ell})")
        if self._is_dense():
            return self._p["mat"][:, i].copy()
        if self.spec.kind == "srht":
            e = np.zeros(self.spec.padded_dim)
            e[self._p["cols"][i]] = 1.0
            col = fwht(e) * self._p["signs"]
            return col[: self.d] * self._p["scale"]
        # sparse: each coordinate's slots hold at most one hit for column i
        hits = self._p["rows"] == i
        vals = np.where(hits, self._p["signs"], 0).sum(axis=1)
        return vals * self._p["scale"]

    def to_dense(self) -> np.ndarray:
        """All columns as a d x ell array (column-major)."""
        if self._is_dense():
            return self._p["mat"]
        if self.spec.kind == "srht":
            D = self.spec.padded_dim
            w = np.zeros((D, self.ell))
            w[self._p["cols"], np.arange(self.ell)] = 1.0
            mat = fwht(w) * self._p["signs"][:, None]
            return np.asfortranarray(mat[: self.d] * self._p["scale"])
        mat = np.zeros((self.d, self.ell))
        np.put_along_axis(mat, self._p["rows"], self._p["signs"] * self._p["scale"], axis=1)
        return np.asfortranarray(mat)

    def apply(self, y: np.ndarray) -> np.ndarray:
        """S y = sum_i y_i s^(i)."""
        y = np.asarray(y, dtype=np.float64)
        if y.shape != (self.ell,):
            raise DimensionError(f"expected shape ({self.ell},), got {y.shape}")
        if self._is_dense():
            return self._p["mat"] @ y
        if self.spec.kind == "srht":
            D = self.spec.padded_dim
            w = np.zeros(D)
            np.add.at(w, self._p["cols"], y)
            out = fwht(w) * self._p["signs"]
            return out[: self.d] * self._p["scale"]
        return (self._p["signs"] * y[self._p["rows"]]).sum(axis=1) * self._p["scale"]

    def apply_transpose(self, x: np.ndarray) -> np.ndarray:
        """S^T x, the ell inner products with the search directions."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.d,):
            raise DimensionError(f"expected shape ({self.d},), got {x.shape}")
        if self._is_dense():
            return self._p["mat"].T @ x
        if self.spec.kind == "srht":
            D = self.spec.padded_dim
            xp = np.zeros(D)
            xp[: self.d] = x
            mixed = fwht(self._p["signs"] * xp)
            return mixed[self._p["cols"]] * self._p["scale"]
        out = np.zeros(self.ell)
        np.add.at(out, self._p["rows"].ravel(),
                  (self._p["signs"] * x[:, None]).ravel())
        return out * self._p["scale"]


def sample_sketch(spec: SketchSpec) -> SketchMatrix:
    """Draw the sketch named by ``spec``; deterministic given its seed."""
    if spec.kind not in KINDS:
        raise ConstructionError(f"cannot sample sketch kind {spec.kind!r}")
    rng = spec.seed.generator()
    d, ell = spec.d, spec.ell
    if spec.kind == "gaussian":
        mat = rng.standard_normal((d, ell)) / math.sqrt(ell)
        return SketchMatrix(spec, {"mat": np.asfortranarray(mat)})
    if spec.kind == "rademacher":
        mat = (2.0 * rng.integers(0, 2, size=(d, ell)) - 1.0) / math.sqrt(ell)
        return SketchMatrix(spec, {"mat": np.asfortranarray(mat)})
    if spec.kind == "srht":
        D = spec.padded_dim
        signs = 2.0 * rng.integers(0, 2, size=D) - 1.0
        cols = rng.integers(0, D, size=ell)  # uniform with replacement
        return SketchMatrix(spec, {"signs": signs, "cols": cols,
                                   "scale": 1.0 / math.sqrt(ell)})
    # sparse: coordinate j hits `sparsity` distinct directions with +-1 signs
    s = spec.sparsity
    slots = rng.permuted(np.tile(np.arange(ell), (d, 1)), axis=1)[:, :s]
    signs = 2.0 * rng.integers(0, 2, size=(d, s)) - 1.0
    return SketchMatrix(spec, {"rows": slots, "signs": signs,
                               "scale": 1.0 / math.sqrt(s)})


def product_approx_error(S, b_matvec, b_norm2: float, b_fro: float, k: int,
                         rng: RngStream = RngStream(0), iters: int = 100) -> float:
    """Measured matrix-product approximation ratio of a sketch against B.

    Returns ``||B S S^T B - B^2||_2 / (||B||_2^2 + ||B||_F^2 / k)`` for a
    symmetric PSD operator ``b_matvec`` with known spectral and Frobenius
    norms. The numerator is evaluated by power iteration on the squared
    difference operator, so only operator access to B is required.
    """
    if isinstance(S, np.ndarray):
        S = SketchMatrix.from_dense(S)
    d = S.d

    def diff(v):
        u = b_matvec(v)
        return b_matvec(S.apply(S.apply_transpose(u)) - u)

    num = spectral_norm_sym(diff, d, iters=iters, rng=rng)
    return num / (b_norm2 ** 2 + b_fro ** 2 / k)
