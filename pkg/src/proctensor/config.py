"""Numerical tolerances and global limits."""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Tolerance bundle used across the package.

    All values are overridable; the defaults are comfortable for
    double-precision eigensolvers at the supported dense dimensions.
    """

    herm: float = 1e-10     # Hermiticity residual
    tr: float = 1e-10       # trace deviation from 1
    psd: float = 1e-10      # allowed negative eigenvalue magnitude
    eig: float = 1e-9       # eigensolver / reconstruction residual
    supp: float = 1e-10     # support-leakage threshold for relative entropy
    xcheck: float = 1e-8    # cross-checks between independent formulas
    causal: float = 1e-9    # trace distance per causality hierarchy level


DEFAULT_TOL = Tolerances()

# Hard cap on any dense matrix dimension produced by tensor products.
_DEFAULT_MAX_DIM = 2**20


def max_dense_dim() -> int:
    """Largest allowed dense dimension; overridable via PROCTENSOR_MAX_DIM."""
    return int(os.environ.get("PROCTENSOR_MAX_DIM", _DEFAULT_MAX_DIM))
