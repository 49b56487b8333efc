import os
from pathlib import Path

import numpy as np
import pytest
from scipy import sparse

from zosketch import (LogisticDataset, LogisticObjective, QuadraticObjective,
                      RngStream, random_orthogonal)


def dataset_path(name: str) -> Path | None:
    """Locate a LIBSVM dataset under $ZOSKETCH_DATA or the repo data/ dir."""
    root = os.environ.get("ZOSKETCH_DATA",
                          str(Path(__file__).resolve().parent.parent / "data"))
    p = Path(root) / name
    return p if p.exists() else None


def require_dataset(name: str) -> Path:
    p = dataset_path(name)
    if p is None:
        pytest.skip(f"dataset {name!r} not present (set ZOSKETCH_DATA or add data/{name})")
    return p


def simple_quadratic(d: int, lambdas=None, ridge: float = 0.0, a=None,
                     identity_basis: bool = True, seed: int = 0) -> QuadraticObjective:
    """Hand-built quadratic with explicit spectrum for unit tests."""
    lambdas = np.ones(d) if lambdas is None else np.asarray(lambdas, dtype=float)
    U = np.eye(d) if identity_basis else random_orthogonal(d, RngStream(seed))
    a = np.zeros(d) if a is None else np.asarray(a, dtype=float)
    return QuadraticObjective(U, lambdas, ridge, a)


def synth_logistic(n: int, d: int, seed: int = 0, ridge: float = 1e-4,
                   density: float = 0.5) -> LogisticObjective:
    """Random sparse logistic instance for unit tests."""
    g = RngStream(seed, 555).generator()
    dense = g.standard_normal((n, d)) / np.sqrt(d)
    dense[g.random((n, d)) >= density] = 0.0
    y = 2.0 * g.integers(0, 2, size=n) - 1.0
    ds = LogisticDataset(X=sparse.csr_matrix(dense), y=y, n=n, d=d, ridge=ridge)
    return LogisticObjective(ds)


@pytest.fixture
def toy_libsvm(tmp_path) -> Path:
    p = tmp_path / "toy.libsvm"
    p.write_text("+1 1:1.0\n-1 2:0.5\n")
    return p
