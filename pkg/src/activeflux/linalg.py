"""Self-contained dense complex linear algebra helpers.

Eigenvalues are computed with an in-house Hessenberg reduction followed by a
shifted QR iteration (Wilkinson shift, complex arithmetic throughout), and
determinants with an in-house LU factorization with partial pivoting.  Both
accept real or complex square matrices.
"""

import numpy as np


def _hessenberg(A):
    """Reduce to upper Hessenberg form by complex Householder reflections."""
    H = np.array(A, dtype=complex)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k]
        nx = np.linalg.norm(x)
        if nx == 0.0:
            continue
        v = x.copy()
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v[0] += phase * nx
        nv = np.linalg.norm(v)
        if nv == 0.0:
            continue
        v /= nv
        # H <- (I - 2 v v*) H (I - 2 v v*) applied to the trailing block
        H[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
    return H


def _wilkinson_shift(H, hi):
    a = H[hi - 1, hi - 1]
    b = H[hi - 1, hi]
    c = H[hi, hi - 1]
    d = H[hi, hi]
    tr = a + d
    det = a * d - b * c
    disc = np.sqrt(tr * tr / 4.0 - det + 0j)
    mu1 = tr / 2.0 + disc
    mu2 = tr / 2.0 - disc
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def eigvals(A, tol=1e-13, maxiter=3000):
    """Eigenvalues of a square matrix (unsorted), as a complex array."""
    A = np.asarray(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 0:
        return np.zeros(0, dtype=complex)
    if n == 1:
        return np.array([complex(A[0, 0])])
    H = _hessenberg(A)
    scale = max(np.abs(H).max(), 1.0)
    eigs = []
    hi = n - 1
    it = 0
    while hi > 0:
        if it > maxiter:
            raise RuntimeError("QR iteration failed to converge")
        # deflate tiny subdiagonal entries
        k = hi
        while k > 0 and abs(H[k, k - 1]) > tol * (
                abs(H[k, k]) + abs(H[k - 1, k - 1]) + tol * scale):
            k -= 1
        if k == hi:
            eigs.append(H[hi, hi])
            hi -= 1
            it = 0
            continue
        lo = k
        if it % 12 == 11:
            # exceptional shift to break symmetric stalls (e.g. cyclic matrices)
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1])
        else:
            mu = _wilkinson_shift(H, hi)
        # explicit single-shift QR sweep on the decoupled active block
        B = H[lo:hi + 1, lo:hi + 1]
        nb = hi + 1 - lo
        B -= mu * np.eye(nb)
        rots = []
        for k in range(nb - 1):
            x, y = B[k, k], B[k + 1, k]
            r = np.hypot(abs(x), abs(y))
            if r == 0.0:
                c, s = 1.0, 0.0 + 0j
            else:
                c, s = x / r, y / r
            rots.append((c, s))
            rk = B[k, k:].copy()
            rk1 = B[k + 1, k:].copy()
            B[k, k:] = np.conj(c) * rk + np.conj(s) * rk1
            B[k + 1, k:] = -s * rk + c * rk1
        for k, (c, s) in enumerate(rots):
            ck = B[:k + 2, k].copy()
            ck1 = B[:k + 2, k + 1].copy()
            B[:k + 2, k] = ck * c + ck1 * s
            B[:k + 2, k + 1] = -ck * np.conj(s) + ck1 * np.conj(c)
        B += mu * np.eye(nb)
        it += 1
    eigs.append(H[0, 0])
    return np.array(eigs[::-1])


def lu_det(A):
    """Determinant via LU with partial pivoting (complex safe)."""
    U = np.array(A, dtype=complex)
    n = U.shape[0]
    if U.shape != (n, n):
        raise ValueError("matrix must be square")
    sign = 1.0 + 0j
    for k in range(n):
        p = k + int(np.argmax(np.abs(U[k:, k])))
        if U[p, k] == 0.0:
            return 0.0 + 0j
        if p != k:
            U[[k, p], :] = U[[p, k], :]
            sign = -sign
        U[k + 1:, k] /= U[k, k]
        U[k + 1:, k + 1:] -= np.outer(U[k + 1:, k], U[k, k + 1:])
    return sign * np.prod(np.diag(U))


def spectral_radius(A):
    return float(np.abs(eigvals(A)).max()) if len(A) else 0.0
