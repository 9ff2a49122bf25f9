"""Dense complex matrix kernel.

Plain numpy arrays in, plain numpy arrays out; complex128 everywhere.
Vectorization is row-major (C order) throughout the package: for matrices
on a D-level space, vec(A X B) = kron(A, B.T) @ vec(X) and
vec(A X + X B) = (kron(A, I) + kron(I, B.T)) @ vec(X).  That convention is
the single source of truth and every superoperator in the package is built
against it.
"""

import numpy as np

from . import _backend
from .tolerances import DEFAULT as TOL

# Guard on kron output size: D=64 superoperators are 4096^2, well inside;
# anything past ~2e9 entries is a config error, not a workload.
_MAX_ENTRIES = 2**31


def _as_matrix(x):
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {a.shape}")
    return a


def kron(a, b):
    """Kronecker product with block (i, j) equal to a[i, j] * b."""
    a = _as_matrix(a)
    b = _as_matrix(b)
    if (a.shape[0] * b.shape[0]) * (a.shape[1] * b.shape[1]) > _MAX_ENTRIES:
        raise ValueError("kron result too large")
    return np.kron(a, b)


def vectorize(x):
    """Row-major flattening: (x00, x01, ..., x10, ...)."""
    return _as_matrix(x).reshape(-1).copy()


def devectorize(v, rows, cols):
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if v.size != rows * cols:
        raise ValueError(f"cannot reshape {v.size} entries to "
                         f"({rows}, {cols})")
    return v.reshape(rows, cols).copy()


def matmul(a, b):
    return _as_matrix(a) @ _as_matrix(b)


def add(a, b):
    return _as_matrix(a) + _as_matrix(b)


def scale(c, a):
    return complex(c) * _as_matrix(a)


def adjoint(a):
    return _as_matrix(a).conj().T.copy()


# the ubiquitous shorthand
dag = adjoint


def transpose(a):
    return _as_matrix(a).T.copy()


def trace(a):
    return complex(np.trace(_as_matrix(a)))


def frobenius_norm(a):
    return float(np.linalg.norm(_as_matrix(a)))


def expm(x):
    """Matrix exponential (scaling-and-squaring Pade, backend kernel)."""
    a = _as_matrix(x)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"expm needs a square matrix, got {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("expm input has non-finite entries")
    return _backend.expm(a)


def hermitian_eig(x, herm_tol=TOL.herm_input):
    """Eigenvalues (ascending) and eigenvector columns of a Hermitian matrix.

    Rejects input whose Hermiticity defect max|x - x^dag| exceeds herm_tol.
    The defective upper/lower disagreement is averaged away before the
    Jacobi sweeps so both triangles contribute.
    """
    a = _as_matrix(x)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square matrix, got {a.shape}")
    defect = np.max(np.abs(a - a.conj().T))
    if defect > herm_tol:
        raise ValueError(
            f"matrix is not Hermitian: defect {defect:.3e} > {herm_tol:.1e}")
    sym = (a + a.conj().T) / 2.0  # exactly Hermitian in floating point
    return _backend.hermitian_eig(sym, off_tol=TOL.jacobi_off)


def hermitian_eigenvalues(x, herm_tol=TOL.herm_input):
    """Real spectrum of a Hermitian matrix, ascending."""
    w, _ = hermitian_eig(x, herm_tol=herm_tol)
    return w
