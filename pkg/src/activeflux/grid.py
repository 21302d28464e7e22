"""Cartesian grids and storage for cell averages plus shared point values.

Every dof kind (the cell average and the point values owned through the
upper-corner convention) forms a full lattice with one entry per cell.  A
State stores all of them in a single array with layout (kind, variable,
cells), which keeps the stencil sweeps contiguous.
"""

from dataclasses import dataclass

import numpy as np

from .basis import POINT_POS, access_table, kinds_for_dim

PERIODIC = "periodic"
ZEROGRAD = "zerograd"


@dataclass(frozen=True)
class GridSpec:
    dim: int
    n: tuple            # cells per axis
    h: tuple            # cell sizes
    origin: tuple       # lower corner of the domain box
    boundary: str = PERIODIC

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError("dim must be 1, 2 or 3")
        for name in ("n", "h", "origin"):
            if len(getattr(self, name)) != self.dim:
                raise ValueError(f"{name} must have {self.dim} entries")
        if any(n < 3 for n in self.n):
            raise ValueError("need at least 3 cells per axis")
        if any(h <= 0 for h in self.h):
            raise ValueError("cell sizes must be positive")
        if self.boundary not in (PERIODIC, ZEROGRAD):
            raise ValueError(f"unknown boundary rule {self.boundary!r}")

    @property
    def kinds(self):
        return kinds_for_dim(self.dim)

    @property
    def ncells(self):
        return int(np.prod(self.n))

    @property
    def volume(self):
        return float(np.prod(self.h))

    def resolve(self, idx, axis):
        """Map (possibly out-of-range) cell indices along an axis to storage
        indices according to the boundary rule."""
        idx = np.asarray(idx)
        n = self.n[axis]
        if self.boundary == PERIODIC:
            return idx % n
        return np.clip(idx, 0, n - 1)

    def resolve_cell(self, cell):
        return tuple(int(self.resolve(c, a)) for a, c in enumerate(cell))

    def centers(self, axis):
        """Physical cell-center coordinates along an axis."""
        return self.origin[axis] + (np.arange(self.n[axis]) + 0.5) * self.h[axis]

    def dof_positions(self, kind):
        """Physical coordinates of the lattice of dofs of one kind.

        Returns a list of 1-d coordinate arrays (one per axis) to be combined
        with open broadcasting.
        """
        out = []
        for axis in range(self.dim):
            c = self.centers(axis)
            if kind != "A":
                c = c + float(POINT_POS[self.dim][kind][axis]) * self.h[axis]
            out.append(c)
        return out


def grid_for_box(dim, n, lo, hi, boundary=PERIODIC):
    n = tuple(int(x) for x in (n if np.iterable(n) else (n,) * dim))
    lo = tuple(lo if np.iterable(lo) else (lo,) * dim)
    hi = tuple(hi if np.iterable(hi) else (hi,) * dim)
    h = tuple((b - a) / m for a, b, m in zip(lo, hi, n))
    return GridSpec(dim, n, h, lo, boundary)


@dataclass
class DofField:
    """All dof lattices of a single variable."""
    grid: GridSpec
    data: np.ndarray = None     # shape (nkinds, *n)

    def __post_init__(self):
        if self.data is None:
            self.data = np.zeros((len(self.grid.kinds),) + self.grid.n)

    def kind(self, kind):
        return self.data[self.grid.kinds.index(kind)]


@dataclass
class State:
    """Full solution state: m variables, each with all dof lattices."""
    grid: GridSpec
    m: int
    data: np.ndarray = None     # shape (nkinds, m, *n)
    time: float = 0.0

    def __post_init__(self):
        if self.data is None:
            self.data = np.zeros((len(self.grid.kinds), self.m) + self.grid.n)

    @property
    def vars(self):
        return [DofField(self.grid, self.data[:, v]) for v in range(self.m)]

    def var(self, v):
        return DofField(self.grid, self.data[:, v])

    def copy(self):
        return State(self.grid, self.m, self.data.copy(), self.time)

    def flat(self):
        return self.data.reshape(-1)

    @classmethod
    def from_flat(cls, grid, m, x, time=0.0):
        data = np.asarray(x).reshape((len(grid.kinds), m) + grid.n)
        return cls(grid, m, data, time)


def accessible_dofs(fld, cell):
    """The dofs accessible to one cell, in the frozen per-dimension order.

    2-d returns 9 values (average first, then counterclockwise from the lower
    left corner); 3-d returns 27 values in x-fastest lexicographic order of
    the tensor positions with the center slot holding the average.
    """
    grid = fld.grid
    if len(cell) != grid.dim:
        raise IndexError("cell index has wrong dimension")
    out = []
    for kind, off, _ in access_table(grid.dim):
        idx = tuple(c + o for c, o in zip(cell, off))
        if any(i < 0 or i >= n for i, n in zip(idx, grid.n)):
            idx = grid.resolve_cell(idx)
        out.append(fld.kind(kind)[idx])
    return np.array(out)


def gather_shifted(grid, lattice, offset):
    """Lattice values shifted by a cell offset, boundary rule applied."""
    idx = tuple(grid.resolve(np.arange(n) + o, a)
                for a, (n, o) in enumerate(zip(grid.n, offset)))
    out = lattice
    for a, ix in enumerate(idx):
        out = np.take(out, ix, axis=a)
    return out


def accessible_all(fld):
    """accessible_dofs for every cell at once: shape (*n, ndof_acc)."""
    grid = fld.grid
    cols = [gather_shifted(grid, fld.kind(kind), off)
            for kind, off, _ in access_table(grid.dim)]
    return np.stack(cols, axis=-1)


def total_average(state):
    """Per-variable sum of cell averages times the cell volume."""
    avg = state.data[0]       # kind 0 is the average by construction
    return avg.reshape(state.m, -1).sum(axis=1) * state.grid.volume


def write_snapshot(path, state, var_names=None):
    """Write all dofs with their physical positions as delimited text."""
    grid = state.grid
    dim = grid.dim
    if var_names is None:
        var_names = {1: ["u"], 3: ["u", "v", "p"], 4: ["u", "v", "w", "p"]}.get(
            state.m, [f"q{v}" for v in range(state.m)])
    axes = "xyz"[:dim]
    idxcols = "ijk"[:dim]
    hdr = (f"# dim={dim} n={','.join(str(n) for n in grid.n)} "
           f"h={','.join(repr(h) for h in grid.h)} boundary={grid.boundary}\n")
    with open(path, "w") as f:
        f.write(hdr)
        f.write("kind," + ",".join(idxcols) + "," + ",".join(axes) + ","
                + ",".join(var_names) + "\n")
        for ki, kind in enumerate(grid.kinds):
            pos = grid.dof_positions(kind)
            for cell in np.ndindex(*grid.n):
                coords = [pos[a][cell[a]] for a in range(dim)]
                vals = [state.data[ki, v][cell] for v in range(state.m)]
                f.write(kind + ","
                        + ",".join(str(c) for c in cell) + ","
                        + ",".join(f"{c:.17g}" for c in coords) + ","
                        + ",".join(f"{v:.17g}" for v in vals) + "\n")
