"""Semi-discrete scheme: models, flux splittings and the update operator.

The whole scheme is condensed into one *term table*

    d/dt q^X_I = - sum over (Y, S) of  alpha[(X,Y)][S] @ q^Y_{I+S}

with one m-by-m matrix alpha per (output dof kind X, input dof kind Y, cell
offset S).  The same table drives both the sparse operator on an actual grid
and the symbol of the scheme under a discrete Fourier transform, so the two
can cross-check each other.

Cell averages evolve through Simpson quadrature of the flux over each face
(the point values are shared, so the flux there needs no splitting).  Point
values evolve through upwind one-sided derivatives combined with a splitting
of the flux Jacobian.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .basis import HALF, deriv_ops, kinds_for_dim
from .grid import State

SPLITTINGS = ("upwind", "central", "rusanov")


@dataclass(frozen=True)
class Advection:
    """Linear advection d/dt u + c . grad u = 0 (single variable)."""
    velocity: tuple     # one speed per axis

    @property
    def dim(self):
        return len(self.velocity)

    @property
    def m(self):
        return 1

    @property
    def var_names(self):
        return ("u",)

    def jacobian(self, axis):
        return np.array([[float(self.velocity[axis])]])

    def abs_jacobian(self, axis):
        return np.array([[abs(float(self.velocity[axis]))]])

    def max_speed(self, axis):
        return abs(float(self.velocity[axis]))


@dataclass(frozen=True)
class Acoustics:
    """Linear acoustics: d/dt v + c grad p = 0, d/dt p + c div v = 0."""
    dim: int
    c: float = 1.0

    @property
    def m(self):
        return self.dim + 1

    @property
    def var_names(self):
        return ("u", "v", "p") if self.dim == 2 else ("u", "v", "w", "p")

    def jacobian(self, axis):
        J = np.zeros((self.m, self.m))
        J[axis, -1] = self.c
        J[-1, axis] = self.c
        return J

    def abs_jacobian(self, axis):
        # |J_axis| has eigenvalues {c, 0, ..., 0, c} on the span of the
        # axis velocity and the pressure
        A = np.zeros((self.m, self.m))
        A[axis, axis] = self.c
        A[-1, -1] = self.c
        return A

    def max_speed(self, axis):
        return self.c


def jacobian_split(model, axis, splitting, rusanov_literal=False):
    """Return (J_plus, J_minus) for one coordinate axis."""
    J = model.jacobian(axis)
    if splitting == "upwind":
        A = model.abs_jacobian(axis)
        return (J + A) / 2, (J - A) / 2
    if splitting == "central":
        return J / 2, J / 2
    if splitting == "rusanov":
        A = model.max_speed(axis) * np.eye(model.m)
        if rusanov_literal:
            return J + A, J - A
        return (J + A) / 2, (J - A) / 2
    raise ValueError(f"unknown splitting {splitting!r}")


def _simpson_face_table(dim, axis):
    """Quadrature of the upper face along an axis: [(kind, offset, weight)].

    Point values on the face are identified through the upper-corner owner
    convention, which shifts the owning cell for points whose tangential
    coordinate sits at the lower end of the face.
    """
    from .basis import _kind_of_position

    if dim == 1:
        return [("P", (0,), Fraction(1))]
    tang = [a for a in range(dim) if a != axis]
    w1 = {-HALF: Fraction(1, 6), Fraction(0): Fraction(4, 6),
          HALF: Fraction(1, 6)}
    table = []
    coords = (-HALF, Fraction(0), HALF)
    if dim == 2:
        grids = [(c,) for c in coords]
    else:
        grids = [(c1, c2) for c2 in coords for c1 in coords]
    for tpos in grids:
        w = Fraction(1)
        for c in tpos:
            w *= w1[c]
        pos = [None] * dim
        pos[axis] = HALF
        for a, c in zip(tang, tpos):
            pos[a] = c
        kind, off = _kind_of_position(tuple(pos))
        table.append((kind, off, w))
    return table


def face_flux_table(dim, axis):
    return _simpson_face_table(dim, axis)


def build_terms(model, h, splitting="upwind", rusanov_literal=False):
    """Build the term table for a model on cells of size h.

    Returns dict[(out_kind, in_kind)] -> dict[offset] -> (m, m) array,
    meaning d/dt q^out = - sum alpha @ q^in shifted by offset.
    """
    dim = model.dim
    m = model.m
    kinds = kinds_for_dim(dim)
    terms = {}

    def add(X, Y, off, mat):
        block = terms.setdefault((X, Y), {})
        if off in block:
            block[off] = block[off] + mat
        else:
            block[off] = np.array(mat, dtype=float)

    # averages: difference of Simpson face fluxes
    for axis in range(dim):
        J = model.jacobian(axis)
        ha = h[axis]
        for kind, off, w in face_flux_table(dim, axis):
            mat = (float(w) / ha) * J
            add("A", kind, off, mat)
            moff = tuple(o - (1 if a == axis else 0) for a, o in enumerate(off))
            add("A", kind, moff, -mat)

    # point values: split Jacobian times one-sided derivatives
    ops = deriv_ops(dim)
    for kind in kinds:
        if kind == "A":
            continue
        for axis in range(dim):
            Jp, Jm = jacobian_split(model, axis, splitting, rusanov_literal)
            ha = h[axis]
            for J, side in ((Jp, "own"), (Jm, "star")):
                if not J.any():
                    continue
                for (k2, off), c in ops[(kind, axis, side)].entries:
                    add(kind, k2, off, (float(c) / ha) * J)

    # drop blocks that cancelled to zero
    out = {}
    for key, block in terms.items():
        blk = {off: mat for off, mat in block.items() if np.abs(mat).max() > 0}
        if blk:
            out[key] = blk
    return out


def _shift_maps(grid, offsets):
    """Flat column index of each cell shifted by each offset, boundary applied."""
    maps = {}
    for off in offsets:
        idx = [grid.resolve(np.arange(n) + o, a)
               for a, (n, o) in enumerate(zip(grid.n, off))]
        maps[off] = np.ravel_multi_index(np.ix_(*idx), grid.n).reshape(-1)
    return maps


_OP_CACHE = {}


def build_operator(grid, model, splitting="upwind", rusanov_literal=False):
    """Sparse matrix L with d/dt x = -L x for the flat dof vector.

    Flat layout: index = (kind_index * m + variable) * ncells + cell, with the
    cell index raveled in C order.
    """
    key = (grid, model, splitting, rusanov_literal)
    if key in _OP_CACHE:
        return _OP_CACHE[key]
    terms = build_terms(model, grid.h, splitting, rusanov_literal)
    kinds = grid.kinds
    m = model.m
    nc = grid.ncells
    cellflat = np.arange(nc)
    all_offsets = sorted({off for blk in terms.values() for off in blk})
    shift = _shift_maps(grid, all_offsets)

    rows, cols, vals = [], [], []
    for (X, Y), blk in terms.items():
        kx = kinds.index(X)
        ky = kinds.index(Y)
        for off, mat in blk.items():
            cmap = shift[off]
            for vi in range(m):
                base_r = (kx * m + vi) * nc
                for vj in range(m):
                    a = mat[vi, vj]
                    if a == 0.0:
                        continue
                    rows.append(base_r + cellflat)
                    cols.append((ky * m + vj) * nc + cmap)
                    vals.append(np.full(nc, a))
    ndof = len(kinds) * m * nc
    L = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(ndof, ndof))
    L.sum_duplicates()
    _OP_CACHE[key] = L
    return L


def rhs(L, x):
    return -(L @ x)


def rk3_step(L, x, dt):
    """One step of the third-order Runge-Kutta method with weights 1/6, 2/3, 1/6."""
    k1 = rhs(L, x)
    k2 = rhs(L, x + (dt / 2) * k1)
    k3 = rhs(L, x - dt * k1 + 2 * dt * k2)
    return x + (dt / 6) * (k1 + 4 * k2 + k3)


def advance(state, model, dt, steps, splitting="upwind",
            rusanov_literal=False, callback=None):
    """Advance a State by a number of RK3 steps; returns the new State."""
    L = build_operator(state.grid, model, splitting, rusanov_literal)
    x = state.flat().copy()
    t = state.time
    for k in range(steps):
        x = rk3_step(L, x, dt)
        t += dt
        if callback is not None:
            stop = callback(k + 1, t, State.from_flat(state.grid, model.m, x, t))
            if stop:
                break
    return State.from_flat(state.grid, model.m, x, t)
