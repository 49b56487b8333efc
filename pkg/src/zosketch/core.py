"""Deterministic numerical primitives: seeded RNG streams, the fast
Walsh-Hadamard transform, Haar-like random orthogonal matrices, and power
iteration for symmetric operators."""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NumericError

_MASK64 = (1 << 64) - 1


def _mix64(a: int, b: int) -> int:
    # splitmix64 finalizer over the combined words; stable pure-int arithmetic
    x = (a * 0x9E3779B97F4A7C15 + b) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


@dataclass(frozen=True)
class RngStream:
    """A (seed, stream_id) pair naming one reproducible random stream.

    The same pair yields a bit-identical stream on every run of the same
    build. Streams are cheap value objects; derive independent substreams
    with :meth:`derive` instead of sharing one generator across consumers.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        """A fresh counter-based generator positioned at the stream start."""
        ss = np.random.SeedSequence([self.seed & _MASK64, self.stream_id & _MASK64])
        return np.random.Generator(np.random.Philox(ss))

    def derive(self, index: int) -> "RngStream":
        """Substream ``index`` of this stream (e.g. one per iteration)."""
        return RngStream(self.seed, _mix64(self.stream_id & _MASK64, index & _MASK64))


def fwht(v):
    """Unnormalized Walsh-Hadamard transform ``H_n v`` along axis 0.

    ``v`` must have power-of-two length n; 2-d inputs are transformed
    column-wise. Applying the transform twice returns ``n * v``;
    normalization is the caller's concern.
    """
    a = np.array(v, dtype=np.float64, copy=True)
    n = a.shape[0]
    if n == 0 or (n & (n - 1)) != 0:
        raise DimensionError(f"fwht requires power-of-two length, got {n}")
    flat = a.ndim == 1
    if flat:
        a = a[:, None]
    h = 1
    while h < n:
        a = a.reshape(n // (2 * h), 2, h, -1)
        top = a[:, 0, :, :] + a[:, 1, :, :]
        bot = a[:, 0, :, :] - a[:, 1, :, :]
        a = np.stack([top, bot], axis=1)
        h *= 2
    a = a.reshape(n, -1)
    return a[:, 0] if flat else a


def random_orthogonal(d: int, rng: RngStream) -> np.ndarray:
    """Haar-like random d x d orthogonal matrix, deterministic given ``rng``.

    QR factorization of a standard Gaussian matrix with the sign of each R
    diagonal folded into Q, which removes the QR sign ambiguity.
    """
    if d < 1:
        raise DimensionError(f"dimension must be >= 1, got {d}")
    g = rng.generator().standard_normal((d, d))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs[None, :]


def power_iteration_sym(matvec, d: int, iters: int = 100, tol: float = 0.0,
                        rng: RngStream = RngStream(0)) -> float:
    """Largest-eigenvalue estimate of a symmetric PSD operator on d-vectors.

    Returns a Rayleigh-quotient estimate that approaches the top eigenvalue
    from below. With ``tol > 0``, stops early once successive estimates agree
    to that relative tolerance. Deterministic given ``rng``.
    """
    if d < 1:
        raise DimensionError(f"dimension must be >= 1, got {d}")
    if iters < 1:
        raise ValueError(f"iters must be >= 1, got {iters}")
    v = rng.generator().standard_normal(d)
    v /= np.linalg.norm(v)
    lam_prev = None
    lam = 0.0
    for _ in range(iters):
        w = matvec(v)
        if not np.all(np.isfinite(w)):
            raise NumericError("operator produced non-finite output")
        lam = float(v @ w)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if tol > 0.0 and lam_prev is not None and abs(lam - lam_prev) <= tol * abs(lam):
            break
        lam_prev = lam
    return lam


def spectral_norm_sym(matvec, d: int, iters: int = 100,
                      rng: RngStream = RngStream(0)) -> float:
    """Spectral norm of a symmetric (possibly indefinite) operator.

    Runs power iteration on the squared operator, which is always PSD, and
    returns the square root of its top eigenvalue.
    """
    lam2 = power_iteration_sym(lambda v: matvec(matvec(v)), d, iters=iters, rng=rng)
    return float(np.sqrt(max(lam2, 0.0)))
