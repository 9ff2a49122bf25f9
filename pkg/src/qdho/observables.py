"""Scalar diagnostics for density-matrix time series."""

from dataclasses import dataclass

import numpy as np

from . import linalg


@dataclass(frozen=True)
class ObservableRecord:
    t: float
    trace_re: float
    trace_drift: float
    purity: float
    mean_n: float
    mean_a: complex
    min_eig: float
    frob_dist_to_reference: float | None = None

    def __post_init__(self):
        if not 0.0 < self.purity <= 1.0 + 1e-9:
            raise ValueError(f"purity {self.purity} outside (0, 1]")
        if self.mean_n < -1e-8:
            raise ValueError(f"mean occupation {self.mean_n} is negative")


def observe(rho, reference=None, t=0.0):
    """Collect every diagnostic of one state: trace and its drift from
    unity, purity tr(rho^2), occupation <N>, amplitude <a>, smallest
    eigenvalue, and (when a reference is given) the Frobenius distance to
    it."""
    m = rho.matrix
    space = rho.space
    if reference is not None and reference.space != space:
        raise ValueError("reference lives on a different space")
    tr = complex(np.trace(m))
    purity = float(np.real(np.trace(m @ m)))
    diag = np.real(np.diagonal(m))
    mean_n = float(np.sum(np.arange(space.dim) * diag))
    # tr(a rho) picks up the first subdiagonal with sqrt weights
    mean_a = complex(np.sum(np.sqrt(np.arange(1.0, space.dim))
                            * np.diagonal(m, -1)))
    min_eig = float(linalg.hermitian_eigenvalues((m + m.conj().T) / 2.0)[0])
    dist = None if reference is None else \
        float(np.linalg.norm(m - reference.matrix))
    return ObservableRecord(
        t=float(t), trace_re=float(tr.real),
        trace_drift=float(abs(tr - 1.0)), purity=purity, mean_n=mean_n,
        mean_a=mean_a, min_eig=min_eig, frob_dist_to_reference=dist)
