"""Discrete-Fourier analysis of the semi-discrete scheme.

Inserting a discrete plane wave q_I = q̂ Π_a t_a^{I_a} with translation
factors t_a = exp(i k_a h_a) into the update turns the stencil term table
into the evolution matrix E(k) with d/dt q̂ + E q̂ = 0.  This module builds
E either directly from the term table or by probing the sparse grid operator
with plane-wave data (two independent routes that must agree), and provides
kernel analysis, amplification matrices, eigenvalue-modulus scans, CFL
bisection and determinant checks on top of it.
"""

import numpy as np

from .basis import kinds_for_dim
from .grid import PERIODIC
from .linalg import eigvals, lu_det
from .scheme import build_operator, build_terms


def translation_factors(k, h):
    """t_a = exp(i k_a h_a) for a real wave vector."""
    return tuple(complex(np.exp(1j * ka * ha)) for ka, ha in zip(k, h))


def assemble_E(model, h, t, splitting="upwind", rusanov_literal=False):
    """Evolution matrix from the stencil term table.

    Rows/columns are ordered by dof kind block (the frozen kind order), each
    block ordered by variable.
    """
    terms = build_terms(model, h, splitting, rusanov_literal)
    kinds = kinds_for_dim(model.dim)
    m = model.m
    E = np.zeros((len(kinds) * m, len(kinds) * m), dtype=complex)
    for (X, Y), blk in terms.items():
        bx = kinds.index(X) * m
        by = kinds.index(Y) * m
        for off, mat in blk.items():
            phase = 1.0 + 0j
            for ta, o in zip(t, off):
                phase *= ta ** o
            E[bx:bx + m, by:by + m] += mat * phase
    return E


def assemble_E_from_grid(model, grid, wave_index, splitting="upwind",
                         rusanov_literal=False):
    """Evolution matrix read off the sparse grid operator.

    Each column is obtained by applying the operator to a plane wave carried
    by a single (kind, variable) dof lattice; the wave index must be integer
    so the wave is commensurate with the periodic grid.
    """
    if grid.boundary != PERIODIC:
        raise ValueError("plane-wave probing needs a periodic grid")
    wave_index = tuple(int(w) for w in wave_index)
    if len(wave_index) != grid.dim:
        raise ValueError("wave index has wrong dimension")
    kinds = grid.kinds
    m = model.m
    nc = grid.ncells
    L = build_operator(grid, model, splitting, rusanov_literal)
    # phase field Π_a t_a^{i_a} over the cells
    phase = np.ones(grid.n, dtype=complex)
    for a, (w, n) in enumerate(zip(wave_index, grid.n)):
        shape = [1] * grid.dim
        shape[a] = n
        phase = phase * np.exp(2j * np.pi * w * np.arange(n) / n).reshape(shape)
    pflat = phase.reshape(-1)
    nblk = len(kinds) * m
    E = np.zeros((nblk, nblk), dtype=complex)
    for j in range(nblk):
        x = np.zeros(nblk * nc, dtype=complex)
        x[j * nc:(j + 1) * nc] = pflat
        y = L @ x        # d/dt x = -L x  and  d/dt q̂ = -E q̂
        E[:, j] = y.reshape(nblk, nc)[:, 0] / pflat[0]
    return E


def kernel_dim(E, tol=1e-10):
    """Numerical nullity by singular-value thresholding (tol relative)."""
    s = np.linalg.svd(E, compute_uv=False)
    if s[0] == 0.0:
        return E.shape[0]
    return int(np.sum(s < tol * s[0]))


def kernel_basis(E, tol=1e-10):
    """Orthonormal basis of the numerical null space (rows of V^H)."""
    _, s, vh = np.linalg.svd(E)
    cutoff = tol * (s[0] if s[0] > 0 else 1.0)
    vecs = [vh[i].conj() for i in range(E.shape[0]) if i >= len(s) or s[i] < cutoff]
    return vecs


def _check_generic(t, eps=1e-12):
    for ta in t:
        if abs(ta) < eps or abs(ta - 1) < eps or abs(ta + 1) < eps:
            raise ValueError("degenerate translation factor, kernel closed "
                             "form has a vanishing denominator")


def kernel_vector_closed_form(model, t, h):
    """Closed-form null vectors of the upwind acoustics evolution matrix.

    2-d returns one 12-vector, 3-d returns five 32-vectors, in the same
    block/variable ordering as assemble_E.
    """
    _check_generic(t)
    if model.dim == 2:
        tx, ty = t
        dx, dy = h
        Q = [
            # averages (u, v, p)
            -dx * (1 + tx * (4 + tx)) * (ty - 1) / (6 * dy * (tx - 1) * tx * ty),
            (1 + tx) * (1 + ty * (4 + ty)) / (6 * tx * ty * (1 + ty)),
            0,
            # horizontal-edge points
            -dx * (1 + tx * (6 + tx)) * (ty - 1) / (4 * dy * (tx - 1) * tx * (1 + ty)),
            (1 + tx) / (2 * tx),
            0,
            # vertical-edge points
            -dx * (1 + tx) * (ty - 1) / (2 * dy * (tx - 1) * ty),
            (1 + 6 * ty + ty ** 2) / (4 * ty * (1 + ty)),
            0,
            # nodes
            -dx * (1 + tx) * (ty - 1) / (dy * (tx - 1) * (1 + ty)),
            1,
            0,
        ]
        return [np.array(Q, dtype=complex)]
    if model.dim == 3:
        return [np.array(q, dtype=complex) for q in _kernel3d(t, h)]
    raise ValueError("closed-form kernels exist for 2-d and 3-d acoustics")


def _kernel3d(t, h):
    tx, ty, tz = t
    dx, dy, dz = h
    q1 = [
        -dx * (1 + tx * (4 + tx)) * (ty - 1) * (tz ** 2 + 4 * tx * tz ** 2 + tx ** 2 * (2 + tz * (8 + 3 * tz))) / (54 * dy * tx ** 2 * (tx ** 2 - 1) * ty * tz ** 2),
        (1 + ty * (4 + ty)) * (tz ** 2 + 4 * tx * tz ** 2 + tx ** 2 * (2 + tz * (8 + 3 * tz))) / (54 * tx ** 2 * ty * (1 + ty) * tz ** 2),
        0, 0,
        -dx * (1 + tx * (6 + tx)) * (ty - 1) / (4 * dy * (tx - 1) * tx * (1 + ty)),
        0,
        dz * (1 + tx) * (ty - 1) * (1 + tz) / (2 * dy * tx * (1 + ty) * (tz - 1)),
        0,
        0,
        0.25 + 1 / (4 * ty) + 1 / (1 + ty),
        -dz * (ty - 1) * (1 + tz) / (2 * dy * ty * (tz - 1)),
        0,
        -dx * (ty - 1) * (4 * tx ** 2 + tx * (3 + 19 * tx) * tz + (1 + tx) * (2 + 9 * tx) * tz ** 2) / (12 * dy * (tx - 1) * tx * (1 + ty) * tz ** 2),
        (4 * tx ** 2 + tx * (3 + 19 * tx) * tz + (1 + tx) * (2 + 9 * tx) * tz ** 2) / (12 * tx * (1 + tx) * tz ** 2),
        0, 0,
        -dx * (ty - 1) * (2 * tz ** 2 + tx ** 2 * (4 + tz) * (1 + 3 * tz) + tx * tz * (-3 + 5 * tz)) / (24 * dy * (tx - 1) * tx * ty * tz ** 2),
        (1 + ty * (6 + ty)) * (4 * tx ** 2 + tx * (3 + 19 * tx) * tz + (1 + tx) * (2 + 9 * tx) * tz ** 2) / (48 * tx * (1 + tx) * ty * (1 + ty) * tz ** 2),
        -dz * (ty - 1) * (1 + tz * (6 + tz)) / (8 * dy * ty * (tz - 1) * tz),
        0,
        -dx * (1 + tx * (6 + tx)) * (ty - 1) * (4 * tx ** 2 + tx * (3 + 19 * tx) * tz + (1 + tx) * (2 + 9 * tx) * tz ** 2) / (48 * dy * tx ** 2 * (tx ** 2 - 1) * (1 + ty) * tz ** 2),
        (2 * tz ** 2 + tx ** 2 * (4 + tz) * (1 + 3 * tz) + tx * tz * (-3 + 5 * tz)) / (24 * tx ** 2 * tz ** 2),
        dz * (1 + tx) * (ty - 1) * (1 + tz * (6 + tz)) / (8 * dy * tx * (1 + ty) * (tz - 1) * tz),
        0,
        0, 0, 0, 0,
        -dx * (1 + tx) * (ty - 1) / (dy * (tx - 1) * (1 + ty)),
        1, 0, 0,
    ]
    q2 = [
        -dx * (1 + tx * (4 + tx)) * (1 + ty) * (tz - 1) * (2 * tz ** 2 + tx ** 2 * (tz - 2) * (1 + 3 * tz) + tx * tz * (3 + 11 * tz)) / (108 * dz * tx ** 2 * (tx ** 2 - 1) * ty * tz ** 2 * (1 + tz)),
        -dy * (1 + ty * (4 + ty)) * (tx - tz) * (tz - 1) * (tx + tz + 4 * tx * tz) / (54 * dz * tx ** 2 * (ty - 1) * ty * tz ** 2 * (1 + tz)),
        (1 + tx) * (1 + ty) * (1 + tz * (4 + tz)) / (36 * tx * ty * tz * (1 + tz)),
        0,
        -dx * (1 + tx * (6 + tx)) * (tz - 1) / (4 * dz * (tx - 1) * tx * (1 + tz)),
        0,
        (1 + tx) / (2 * tx),
        0,
        0, 0, 0, 0,
        -dx * (tz - 1) * (tz ** 2 + tx * tz * (3 + 7 * tz) + tx ** 2 * (-1 + tz * (-1 + 3 * tz))) / (6 * dz * (tx - 1) * tx * tz ** 2 * (1 + tz)),
        -dy * (1 + ty) * (tx - tz) * (tz - 1) * (tx + tz + 4 * tx * tz) / (6 * dz * tx * (1 + tx) * (ty - 1) * tz ** 2 * (1 + tz)),
        0.25 + 1 / (4 * tz) + 1 / (1 + tz),
        0,
        dx * (1 + ty) * (tx - tz) * (tz - 1) * (tx + tz + 4 * tx * tz) / (12 * dz * (tx - 1) * tx * ty * tz ** 2 * (1 + tz)),
        -dy * (1 + ty * (6 + ty)) * (tx - tz) * (tz - 1) * (tx + tz + 4 * tx * tz) / (24 * dz * tx * (1 + tx) * (ty - 1) * ty * tz ** 2 * (1 + tz)),
        0, 0,
        -dx * (1 + tx * (6 + tx)) * (tz - 1) * (tz ** 2 + tx * tz * (3 + 7 * tz) + tx ** 2 * (-1 + tz * (-1 + 3 * tz))) / (24 * dz * tx ** 2 * (tx ** 2 - 1) * tz ** 2 * (1 + tz)),
        -dy * (1 + ty) * (tx - tz) * (tz - 1) * (tx + tz + 4 * tx * tz) / (12 * dz * tx ** 2 * (ty - 1) * tz ** 2 * (1 + tz)),
        (1 + tx) * (1 + tz * (6 + tz)) / (8 * tx * tz * (1 + tz)),
        0,
        0, 0, 0, 0,
        -dx * (1 + tx) * (tz - 1) / (dz * (tx - 1) * (1 + tz)),
        0, 1, 0,
    ]
    q3 = [
        -2 * dx * (1 + tx * (4 + tx)) * (tz - 1) / (9 * dz * (tx ** 2 - 1) * tz),
        0,
        2 * (1 + tz * (4 + tz)) / (9 * tz * (1 + tz)),
        0,
        0,
        -2 * dy * ty * (tz - 1) / (dz * (ty - 1) * (1 + tz)),
        2 * ty / (1 + ty),
        0,
        0, 0, 0, 0,
        -2 * dx * tx * ty * (tz - 1) / (dz * (tx - 1) * (1 + ty) * tz),
        2 * dy * tx * ty * (tz - 1) / (dz * (1 + tx) * (ty - 1) * tz),
        0, 0,
        -dx * tx * (tz - 1) / (dz * (tx - 1) * tz),
        dy * tx * (1 + ty * (6 + ty)) * (tz - 1) / (2 * dz * (1 + tx) * (ty ** 2 - 1) * tz),
        0, 0,
        -dx * (1 + tx * (6 + tx)) * ty * (tz - 1) / (2 * dz * (tx ** 2 - 1) * (1 + ty) * tz),
        0,
        ty * (1 + tz * (6 + tz)) / (2 * (1 + ty) * tz * (1 + tz)),
        0,
        0,
        -dy * (1 + ty * (6 + ty)) * (tz - 1) / (2 * dz * (ty ** 2 - 1) * (1 + tz)),
        1, 0,
        0, 0, 0, 0,
    ]
    q4 = [
        8 * dx * (1 + tx * (4 + tx)) * (ty ** 2 - 1) * (tx - tz) * (tx + tz + 4 * tx * tz) / (27 * dy * (tx - 1) * tx * (1 + tx) ** 2 * (1 + ty * (6 + ty)) * tz ** 2),
        -8 * (1 + ty * (4 + ty)) * (tx - tz) * (tx + tz + 4 * tx * tz) / (27 * tx * (1 + tx) * (1 + ty * (6 + ty)) * tz ** 2),
        0, 0,
        0,
        4 * ty * (1 + ty) / (1 + ty * (6 + ty)),
        -4 * dz * (ty - 1) * ty * (1 + tz) / (dy * (1 + ty * (6 + ty)) * (tz - 1)),
        0,
        -4 * dx * tx * (ty ** 2 - 1) / (dy * (tx - 1) * (1 + ty * (6 + ty))),
        0,
        4 * dz * tx * (ty ** 2 - 1) * (1 + tz) / (dy * (1 + tx) * (1 + ty * (6 + ty)) * (tz - 1)),
        0,
        4 * dx * (ty - 1) * ty * (2 * tx ** 2 + tx * (3 + 11 * tx) * tz + (-2 + tx) * (1 + 3 * tx) * tz ** 2) / (3 * dy * (tx ** 2 - 1) * (1 + ty * (6 + ty)) * tz ** 2),
        -4 * ty * (1 + ty) * (2 * tx ** 2 + tx * (3 + 11 * tx) * tz + (-2 + tx) * (1 + 3 * tx) * tz ** 2) / (3 * (1 + tx) ** 2 * (1 + ty * (6 + ty)) * tz ** 2),
        0, 0,
        4 * dx * (ty ** 2 - 1) * (tx - tz) * (tx + tz + 4 * tx * tz) / (3 * dy * (tx ** 2 - 1) * (1 + ty * (6 + ty)) * tz ** 2),
        -(2 * tx ** 2 + tx * (3 + 11 * tx) * tz + (-2 + tx) * (1 + 3 * tx) * tz ** 2) / (3 * (1 + tx) ** 2 * tz ** 2),
        dz * tx * (ty ** 2 - 1) * (1 + tz * (6 + tz)) / (dy * (1 + tx) * (1 + ty * (6 + ty)) * (tz - 1) * tz),
        0,
        dx * (1 + tx * (6 + tx)) * (ty - 1) * ty * (2 * tx ** 2 + tx * (3 + 11 * tx) * tz + (-2 + tx) * (1 + 3 * tx) * tz ** 2) / (3 * dy * (tx - 1) * tx * (1 + tx) ** 2 * (1 + ty * (6 + ty)) * tz ** 2),
        -4 * ty * (1 + ty) * (tx - tz) * (tx + tz + 4 * tx * tz) / (3 * tx * (1 + tx) * (1 + ty * (6 + ty)) * tz ** 2),
        -dz * (ty - 1) * ty * (1 + tz * (6 + tz)) / (dy * (1 + ty * (6 + ty)) * (tz - 1) * tz),
        0,
        -dx * (1 + tx * (6 + tx)) * (ty ** 2 - 1) / (dy * (tx ** 2 - 1) * (1 + ty * (6 + ty))),
        1, 0, 0,
        0, 0, 0, 0,
    ]
    q5 = [
        0, 0, 0, 0,
        0, 0, 0, 0,
        4 * tx * (1 + tx) / (1 + tx * (6 + tx)),
        -4 * dy * tx * (tx ** 2 - 1) * (1 + ty * (6 + ty)) / (dx * (1 + tx) * (1 + tx * (6 + tx)) * (ty ** 2 - 1)),
        4 * dz * tx * (tx ** 2 - 1) * (1 + tz) / (dx * (1 + tx) * (1 + tx * (6 + tx)) * (tz - 1)),
        0,
        -4 * tx * (1 + tx) * (ty - 1) * ty * (1 + tz) / ((1 + tx * (6 + tx)) * (ty ** 2 - 1) * tz),
        -4 * dy * tx * (tx ** 2 - 1) * ty * (1 + ty) * (1 + tz) / (dx * (1 + tx) * (1 + tx * (6 + tx)) * (ty ** 2 - 1) * tz),
        4 * dz * tx * (tx ** 2 - 1) * (ty - 1) * ty * (1 + tz * (6 + tz)) / (dx * (1 + tx) * (1 + tx * (6 + tx)) * (ty ** 2 - 1) * (tz - 1) * tz),
        0,
        0,
        -dy * tx * (tx ** 2 - 1) * (1 + ty * (6 + ty)) * (1 + tz) / (dx * (1 + tx) * (1 + tx * (6 + tx)) * (ty ** 2 - 1) * tz),
        dz * tx * (tx ** 2 - 1) * (1 + tz * (6 + tz)) / (dx * (1 + tx) * (1 + tx * (6 + tx)) * (tz - 1) * tz),
        0,
        -(ty - 1) * ty * (1 + tz) / ((ty ** 2 - 1) * tz),
        2 * dy * (tx - 1) * (1 + tx) * ty * (1 + ty) * (1 + tz) / (dx * (1 + tx * (6 + tx)) * (ty ** 2 - 1) * tz),
        0, 0,
        1, 0,
        -2 * dz * (tx - 1) * (1 + tx) * (1 + tz) / (dx * (1 + tx * (6 + tx)) * (tz - 1)),
        0,
        0,
        -16 * dy * tx * (tx ** 2 - 1) * ty * (1 + ty) / (dx * (1 + tx) * (1 + tx * (6 + tx)) * (ty ** 2 - 1)),
        16 * dz * tx * (tx ** 2 - 1) * (ty - 1) * ty * (1 + tz) / (dx * (1 + tx) * (1 + tx * (6 + tx)) * (ty ** 2 - 1) * (tz - 1)),
        0,
    ]
    return [q1, q2, q3, q4, q5]


def kernel_mode_coefficients_3d(t, h):
    """Combination weights a_1..a_5 of the closed-form 3-d null vectors used
    to build a single real stationary mode."""
    _check_generic(t)
    tx, ty, tz = t
    dx, dy, dz = h
    den = tz ** 2 + 4 * tx * tz ** 2 + tx ** 2 * (2 + tz * (8 + 3 * tz))
    a1 = ((tx - 1) * (2 * dy * (1 + ty + 8 * tx * ty) * (tx - tz) * (tz - 1) * (tx + tz + 4 * tx * tz)
          + tx * (ty ** 2 - 1) * (-32 * tx ** 2 * ty - 3 * (1 + tx + 32 * tx ** 2 * ty) * tz
          + 8 * (4 * ty + tx * (1 + tx) * (3 * dz + 16 * ty)) * tz ** 2
          + (3 * (1 + tx) - 32 * (1 + 4 * tx) * ty) * tz ** 3))) / (2 * dx * dz * (ty - 1) * den)
    a2 = -((tx - 1) * (1 + tz) * (-2 * (1 + ty) * (-1 + 2 * dy + ty) * (tz - 1) * tz ** 2
          - tx * (tz - 1) * tz * (3 - 3 * ty ** 2 + 16 * dy * (1 + 2 * ty) * tz + (ty - 1) * (1 + ty) * (5 + 32 * ty) * tz)
          + 8 * tx ** 3 * (-3 * dz * tz ** 2 + 3 * dz * ty ** 2 * tz ** 2 + 2 * (-2 + dy) * ty * (tz - 1) * (1 + 4 * tz) + 4 * ty ** 3 * (tz - 1) * (1 + 4 * tz))
          + tx ** 2 * (-2 * dy * (tz - 1) * (1 + ty + 4 * (1 + ty) * tz + (3 + 35 * ty) * tz ** 2)
          - (ty ** 2 - 1) * (-4 + tz * (-9 + tz * (10 - 24 * dz + 128 * ty * (tz - 1) + 3 * tz)))))) / (2 * dx * dy * (1 + ty) * (tz - 1) * den)
    a3 = ((tx ** 2 - 1) * (1 + tz) * (-2 * (1 + ty) * (-1 + dy + ty) * (tz - 1) * tz ** 2
          - tx * (1 + ty) * (tz - 1) * tz * (3 + (-5 + 8 * dy) * tz + ty * (-3 + (-27 + 32 * ty) * tz))
          + 8 * tx ** 3 * (-3 * dz * tz ** 2 + 3 * dz * ty ** 2 * tz ** 2 + 4 * ty ** 3 * (tz - 1) * (1 + 4 * tz) + 2 * ty * (tz - 1) * (-2 - 8 * tz + 3 * dy * (1 + tz * (4 + tz))))
          + tx ** 2 * (1 + ty) * (2 * dy * (tz - 1) * (1 + 4 * tz) - (ty - 1) * (-4 + tz * (-9 + tz * (10 - 24 * dz + 128 * ty * (tz - 1) + 3 * tz)))))) / (16 * dx * dy * tx * ty * (tz - 1) * den)
    a4 = ((tx - 1) * (1 + tx) * (1 + ty * (6 + ty)) * (-2 * (1 + ty) * (-1 + dy + ty) * (tz - 1) * tz ** 2
          - tx * (1 + ty) * (tz - 1) * tz * (3 - 5 * tz + 8 * dy * tz + ty * (-3 + 5 * tz))
          + 24 * tx ** 3 * (-dz * tz ** 2 + dz * ty ** 2 * tz ** 2 + 2 * (-2 + dy) * ty * (tz - 1) * (1 + tz * (4 + tz)) + 4 * ty ** 3 * (tz - 1) * (1 + tz * (4 + tz)))
          + tx ** 2 * (1 + ty) * (2 * dy * (tz - 1) * (1 + 4 * tz) - (ty - 1) * (-4 + tz * (-9 + tz * (10 - 24 * dz + 3 * tz)))))) / (32 * dx * dz * tx * (ty - 1) * ty * (1 + ty) * den)
    a5 = ((1 + tx * (6 + tx)) * (-2 * (1 + ty) * (-1 + dy + ty) * (tz - 1) * tz ** 2
          - tx * (tz - 1) * tz * (3 - 3 * ty ** 2 + 8 * dy * (1 + 3 * ty) * tz + (ty - 1) * (1 + ty) * (5 + 32 * ty) * tz)
          + 8 * tx ** 3 * (-3 * dz * tz ** 2 + 3 * dz * ty ** 2 * tz ** 2 + 2 * (-2 + dy) * ty * (tz - 1) * (1 + 4 * tz) + 4 * ty ** 3 * (tz - 1) * (1 + 4 * tz))
          + tx ** 2 * (-2 * dy * (tz - 1) * (-1 - 4 * tz + ty * (-1 + 4 * tz) * (1 + 8 * tz))
          - (ty ** 2 - 1) * (-4 + tz * (-9 + tz * (10 - 24 * dz + 128 * ty * (tz - 1) + 3 * tz)))))) / (32 * dy * dz * tx * ty * den)
    return [a1, a2, a3, a4, a5]


def amplification(E, dt):
    """One-step multiplier of third-order Runge-Kutta applied to d/dt q = -E q."""
    n = E.shape[0]
    I = np.eye(n, dtype=complex)
    dE = dt * E
    return I - dE + dE @ dE / 2 - dE @ dE @ dE / 6


def eigen_moduli(A):
    """Sorted absolute values of the eigenvalues."""
    return sorted(float(x) for x in np.abs(eigvals(A)))


def det_E(E):
    return lu_det(E)


def det_closed_form_neg1(c, dx, dy):
    """Published determinant of the 2-d Rusanov evolution matrix at
    t_x = t_y = -1."""
    return (110592 * c ** 6 * (dx + dy) ** 4
            * (dx * dy + 2 * c ** 2 * (dx ** 2 - dx * dy + dy ** 2))
            / (dx ** 9 * dy ** 9))


def _beta_samples(dim, samples):
    """Sampled wave phases beta_a = k_a h_a in [-pi, pi]^dim: a uniform grid
    plus axis and diagonal rays."""
    if dim == 1:
        return [(b,) for b in np.linspace(-np.pi, np.pi, max(samples, 8))]
    per = max(int(round(samples ** (1.0 / dim))), 4)
    axes = [np.linspace(-np.pi, np.pi, per)] * dim
    pts = {tuple(p) for p in np.stack(np.meshgrid(*axes), axis=-1).reshape(-1, dim)}
    s = np.linspace(0, np.pi, per)
    rays = []
    for a in range(dim):
        d = np.zeros(dim)
        d[a] = 1.0
        rays.append(d)
    rays.append(np.ones(dim) / 1.0)
    for d in rays:
        for sv in s:
            pts.add(tuple(np.clip(sv * d, -np.pi, np.pi)))
    return sorted(pts)


def max_stable_dt(model, h, splitting="upwind", samples=128,
                  rusanov_literal=False, tol=5e-4, threshold=1 + 1e-10):
    """Largest dt for which all sampled amplification matrices have spectral
    radius below the threshold, by bisection."""
    betas = _beta_samples(model.dim, samples)
    mats = []
    for b in betas:
        t = tuple(np.exp(1j * np.asarray(b)))
        mats.append(assemble_E(model, h, t, splitting, rusanov_literal))

    def stable(dt):
        if dt == 0.0:
            return True
        for E in mats:
            if max(eigen_moduli(amplification(E, dt))) > threshold:
                return False
        return True

    speed = max(model.max_speed(a) for a in range(model.dim))
    hi = min(h) / max(speed, 1e-300)
    lo = 0.0
    # expand until unstable
    for _ in range(20):
        if stable(hi):
            lo = hi
            hi *= 2
        else:
            break
    else:
        return lo
    while hi - lo > tol * hi:
        mid = (lo + hi) / 2
        if stable(mid):
            lo = mid
        else:
            hi = mid
    return lo


def write_moduli_csv(path, rows):
    """rows of (s, phi, dt, idx, modulus)."""
    with open(path, "w") as f:
        f.write("s,phi,dt,idx,modulus\n")
        for s, phi, dt, idx, mod in rows:
            f.write(f"{s:.17g},{phi:.17g},{dt:.17g},{idx},{mod:.17g}\n")


def write_kernel_csv(path, rows, dim):
    """rows of (t tuple, dim ker)."""
    names = []
    for a in "xyz"[:dim]:
        names += [f"t{a}_re", f"t{a}_im"]
    with open(path, "w") as f:
        f.write(",".join(names) + ",dim\n")
        for t, d in rows:
            parts = []
            for ta in t:
                parts += [f"{ta.real:.17g}", f"{ta.imag:.17g}"]
            f.write(",".join(parts) + f",{d}\n")


def write_stability_csv(path, rows):
    """rows of (problem name, splitting, max_dt)."""
    with open(path, "w") as f:
        f.write("problem,splitting,max_dt\n")
        for prob, split, dt in rows:
            f.write(f"{prob},{split},{dt:.17g}\n")
