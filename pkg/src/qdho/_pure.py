"""Pure numpy fallback kernels: dense matrix exponential and a complex
Hermitian eigensolver.

Same contract as the compiled `_kernels` extension; `_backend` picks one of
the two at import time.  Everything here works on C-contiguous complex128
arrays and returns fresh arrays.
"""

import numpy as np

NAME = "pure"

# Degree -> theta threshold for the scaling-and-squaring Pade ladder
# (standard double precision values, Higham 2005).
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


def _pade_uv(a, m):
    """U (odd part) and V (even part) of the degree-m Pade numerator."""
    n = a.shape[0]
    ident = np.eye(n, dtype=np.complex128)
    b = _B[m]
    a2 = a @ a
    if m == 3:
        return a @ (b[3] * a2 + b[1] * ident), b[2] * a2 + b[0] * ident
    a4 = a2 @ a2
    if m == 5:
        return (a @ (b[5] * a4 + b[3] * a2 + b[1] * ident),
                b[4] * a4 + b[2] * a2 + b[0] * ident)
    a6 = a2 @ a4
    if m == 7:
        return (a @ (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident),
                b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    if m == 9:
        a8 = a4 @ a4
        return (a @ (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2
                     + b[1] * ident),
                b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    # m == 13, evaluated economically: p(A) = A6*(b13 A6 + ...) + lower order
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    return u, v


def expm(a):
    """e^A by scaling and squaring with diagonal Pade approximants.

    The squaring count comes from the 1-norm of A; degree picked as the
    smallest of {3,5,7,9,13} whose theta bound admits the (scaled) norm.
    """
    a = np.array(a, dtype=np.complex128, order="C")
    eta = np.linalg.norm(a, 1)
    s = 0
    if eta <= _THETA[13]:
        for m in (3, 5, 7, 9, 13):
            if eta <= _THETA[m]:
                break
    else:
        m = 13
        s = int(np.ceil(np.log2(eta / _THETA[13])))
        a *= 0.5 ** s
    u, v = _pade_uv(a, m)
    x = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        x = x @ x
    return x


def hermitian_eig(a, off_tol=1e-14, max_sweeps=60):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns (w, v): eigenvalues ascending and the unitary of column
    eigenvectors.  Only the upper triangle and the real diagonal are
    trusted; symmetrize first if the input carries Hermiticity noise.
    Sweeps run until the off-diagonal Frobenius mass falls below
    off_tol * ||A||_F.
    """
    a = np.array(a, dtype=np.complex128, order="C")
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return np.array([a[0, 0].real]), v
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        off = a.copy()
        np.fill_diagonal(off, 0.0)
        if np.linalg.norm(off) <= off_tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                ph = apq / r  # e^{i arg(apq)}; diag(1, conj(ph)) makes it real
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau)
                                                     + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                sn = t * c
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - sn * np.conj(ph) * colq
                a[:, q] = sn * colp + c * np.conj(ph) * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp - sn * ph * rowq
                a[q, :] = sn * rowp + c * ph * rowq
                # closed-form results of the rotation, kept exact
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - sn * np.conj(ph) * vq
                v[:, q] = sn * vp + c * np.conj(ph) * vq
    else:
        raise RuntimeError("jacobi sweep limit reached without convergence")
    w = np.diagonal(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order])
