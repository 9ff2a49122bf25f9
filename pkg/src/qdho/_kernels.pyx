# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: dense matrix exponential (BLAS zgemm + LAPACK zgesv)
and a complex Hermitian Jacobi eigensolver with typed loops.

Same contract as the pure numpy fallback in `_pure`; `_backend` picks one
of the two at import time.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt, hypot
from scipy.linalg.cython_blas cimport zgemm
from scipy.linalg.cython_lapack cimport zgesv

cnp.import_array()

NAME = "compiled"

_THETA = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}

_B = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0,
        1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0, 960960.0,
         16380.0, 182.0, 1.0),
}


cdef _mm(object a, object b):
    """Product of two (n, n) complex128 Fortran-order arrays via zgemm."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="fortran"] A = a
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="fortran"] B = b
    cdef int n = A.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="fortran"] C = \
        np.empty((n, n), dtype=np.complex128, order="F")
    cdef double complex one = 1.0
    cdef double complex zero = 0.0
    zgemm("N", "N", &n, &n, &n, &one, &A[0, 0], &n, &B[0, 0], &n,
          &zero, &C[0, 0], &n)
    return C


cdef _solve(object a, object b):
    """Solve A X = B (both square, Fortran order) via zgesv."""
    # zgesv clobbers both operands, so copy
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="fortran"] A = \
        np.array(a, dtype=np.complex128, order="F")
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="fortran"] B = \
        np.array(b, dtype=np.complex128, order="F")
    cdef int n = A.shape[0]
    cdef int nrhs = B.shape[1]
    cdef int info = 0
    cdef cnp.ndarray[int, ndim=1] piv = np.empty(n, dtype=np.intc)
    zgesv(&n, &nrhs, &A[0, 0], &n, &piv[0], &B[0, 0], &n, &info)
    if info != 0:
        raise np.linalg.LinAlgError(f"zgesv failed with info={info}")
    return B


def _pade_uv(a, int m):
    n = a.shape[0]
    ident = np.asfortranarray(np.eye(n, dtype=np.complex128))
    b = _B[m]
    ff = np.asfortranarray
    a2 = _mm(a, a)
    if m == 3:
        return _mm(a, ff(b[3] * a2 + b[1] * ident)), b[2] * a2 + b[0] * ident
    a4 = _mm(a2, a2)
    if m == 5:
        return (_mm(a, ff(b[5] * a4 + b[3] * a2 + b[1] * ident)),
                b[4] * a4 + b[2] * a2 + b[0] * ident)
    a6 = _mm(a2, a4)
    if m == 7:
        return (_mm(a, ff(b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)),
                b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    if m == 9:
        a8 = _mm(a4, a4)
        return (_mm(a, ff(b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2
                          + b[1] * ident)),
                b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    u = _mm(a, ff(_mm(a6, ff(b[13] * a6 + b[11] * a4 + b[9] * a2))
                  + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident))
    v = (_mm(a6, ff(b[12] * a6 + b[10] * a4 + b[8] * a2))
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    return u, v


def expm(a):
    """e^A by scaling and squaring, degree from the standard theta ladder."""
    a = np.array(a, dtype=np.complex128, order="F")
    eta = np.linalg.norm(a, 1)
    cdef int s = 0
    cdef int m
    if eta <= _THETA[13]:
        for m in (3, 5, 7, 9, 13):
            if eta <= _THETA[m]:
                break
    else:
        m = 13
        s = int(np.ceil(np.log2(eta / _THETA[13])))
        a *= 0.5 ** s
    u, v = _pade_uv(a, m)
    x = _solve(np.asfortranarray(v - u), np.asfortranarray(v + u))
    cdef int k
    for k in range(s):
        x = _mm(x, x)
    return np.ascontiguousarray(x)


def hermitian_eig(a_in, double off_tol=1e-14, int max_sweeps=60):
    """Cyclic Jacobi eigendecomposition, eigenvalues ascending.

    Trusts the upper triangle and the real diagonal; symmetrize noisy
    input first.
    """
    a_arr = np.array(a_in, dtype=np.complex128, order="C")
    cdef int n = a_arr.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    if n == 1:
        return np.array([a_arr[0, 0].real]), v_arr
    cdef double complex[:, ::1] A = a_arr
    cdef double complex[:, ::1] V = v_arr
    cdef double norm2 = 0.0, off2, app, aqq, tau, t, c, sn, r
    cdef double complex apq, ph, phc, cp, cq
    cdef int i, j, p, q, sweep
    cdef bint converged = False
    for i in range(n):
        for j in range(n):
            apq = A[i, j]
            norm2 += apq.real * apq.real + apq.imag * apq.imag
    if norm2 == 0.0:
        return np.zeros(n), v_arr
    for sweep in range(max_sweeps):
        off2 = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    apq = A[i, j]
                    off2 += apq.real * apq.real + apq.imag * apq.imag
        if sqrt(off2) <= off_tol * sqrt(norm2):
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if r == 0.0:
                    continue
                ph = apq / r
                phc = ph.conjugate()
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (aqq - app) / (2.0 * r)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau)
                                                     + hypot(1.0, tau))
                c = 1.0 / sqrt(1.0 + t * t)
                sn = t * c
                for i in range(n):
                    cp = A[i, p]
                    cq = A[i, q]
                    A[i, p] = c * cp - sn * phc * cq
                    A[i, q] = sn * cp + c * phc * cq
                for j in range(n):
                    cp = A[p, j]
                    cq = A[q, j]
                    A[p, j] = c * cp - sn * ph * cq
                    A[q, j] = sn * cp + c * ph * cq
                A[p, p] = app - t * r
                A[q, q] = aqq + t * r
                A[p, q] = 0.0
                A[q, p] = 0.0
                for i in range(n):
                    cp = V[i, p]
                    cq = V[i, q]
                    V[i, p] = c * cp - sn * phc * cq
                    V[i, q] = sn * cp + c * phc * cq
    if not converged:
        raise RuntimeError("jacobi sweep limit reached without convergence")
    w = np.diagonal(a_arr).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v_arr[:, order])
