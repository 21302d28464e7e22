"""Tensor-quadratic shape functions and one-sided derivative stencils.

The reconstruction space is the tensor-quadratic polynomial space on the
scaled reference cell [-1/2, 1/2]^dim.  Its degrees of freedom are the cell
average plus the point values on the cell boundary (8 points in 2-d, 26 in
3-d; in 1-d the two interface values).  Everything in this module is built
with exact rational arithmetic so that the derivative stencils come out with
their exact coefficients.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

HALF = Fraction(1, 2)

# dof kinds that belong to a cell, in the frozen block order used everywhere
KINDS_1D = ("A", "P")
KINDS_2D = ("A", "EH", "EV", "N")
KINDS_3D = ("A", "Ex", "Ey", "Ez", "Fx", "Fy", "Fz", "N")

# scaled position of the point value belonging to a cell (upper-corner owner)
POINT_POS = {
    1: {"P": (HALF,)},
    2: {"N": (HALF, HALF), "EH": (Fraction(0), HALF), "EV": (HALF, Fraction(0))},
    3: {
        "N": (HALF, HALF, HALF),
        "Ex": (Fraction(0), HALF, HALF),
        "Ey": (HALF, Fraction(0), HALF),
        "Ez": (HALF, HALF, Fraction(0)),
        "Fx": (HALF, Fraction(0), Fraction(0)),
        "Fy": (Fraction(0), HALF, Fraction(0)),
        "Fz": (Fraction(0), Fraction(0), HALF),
    },
}


def kinds_for_dim(dim):
    return {1: KINDS_1D, 2: KINDS_2D, 3: KINDS_3D}[dim]


def _kind_of_position(pos):
    """Map a scaled position on the cell boundary to (kind, cell offset).

    The owner of a shared point value is the cell for which the point sits on
    the upper portion of the boundary, so coordinates equal to -1/2 translate
    into a shift of -1 along that axis.
    """
    dim = len(pos)
    offset = tuple(-1 if c == -HALF else 0 for c in pos)
    nz = [a for a, c in enumerate(pos) if c != 0]
    if dim == 1:
        return "P", offset
    if dim == 2:
        if len(nz) == 2:
            return "N", offset
        # midpoint of the top horizontal edge (x=0) or right vertical edge (y=0)
        return ("EH", "EV")[pos.index(0)], offset
    if len(nz) == 3:
        return "N", offset
    if len(nz) == 2:
        axis = pos.index(0)          # edge parallel to this axis
        return ("Ex", "Ey", "Ez")[axis], offset
    axis = nz[0]                     # face orthogonal to this axis
    return ("Fx", "Fy", "Fz")[axis], offset


def _access_table(dim):
    """Ordered list of (kind, offset, scaled position or None for the average).

    2-d follows the counterclockwise numbering with index 0 the average.
    3-d runs x-fastest lexicographically through the 3^3 tensor positions with
    the center taken as the cell average.  1-d is (average, left, right).
    """
    if dim == 1:
        return [("A", (0,), None), ("P", (-1,), (-HALF,)), ("P", (0,), (HALF,))]
    if dim == 2:
        order = [
            None,
            (-HALF, -HALF), (Fraction(0), -HALF), (HALF, -HALF),
            (HALF, Fraction(0)), (HALF, HALF), (Fraction(0), HALF),
            (-HALF, HALF), (-HALF, Fraction(0)),
        ]
        table = [("A", (0, 0), None)]
        for pos in order[1:]:
            kind, off = _kind_of_position(pos)
            table.append((kind, off, pos))
        return table
    coords = (-HALF, Fraction(0), HALF)
    table = []
    for cz in coords:
        for cy in coords:
            for cx in coords:
                pos = (cx, cy, cz)
                if pos == (0, 0, 0):
                    table.append(("A", (0, 0, 0), None))
                else:
                    kind, off = _kind_of_position(pos)
                    table.append((kind, off, pos))
    return table


_ACCESS = {d: _access_table(d) for d in (1, 2, 3)}


def access_table(dim):
    """The frozen ordering of the dofs accessible to one cell."""
    return _ACCESS[dim]


def _monomials(dim):
    # exponent tuples, x-fastest
    return [tuple(reversed(e)) for e in product(range(3), repeat=dim)]


def _functional(entry, mono):
    """Apply the dof functional (point evaluation or cell average) to a monomial."""
    _, _, pos = entry
    if pos is None:
        avg = {0: Fraction(1), 1: Fraction(0), 2: Fraction(1, 12)}
        out = Fraction(1)
        for e in mono:
            out *= avg[e]
        return out
    out = Fraction(1)
    for c, e in zip(pos, mono):
        out *= c ** e
    return out


def _solve_exact(mat, rhs):
    """Gaussian elimination over the rationals; mat and rhs are nested lists."""
    n = len(mat)
    a = [row[:] + r[:] for row, r in zip(mat, rhs)]
    w = len(a[0])
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:w] for row in a]


class ShapeBasis:
    """Shape functions of the tensor-quadratic reconstruction.

    coeffs[r] is the exact coefficient tensor of basis function r over the
    monomials xi^i eta^j (zeta^k), indexed by exponent tuple.  Functional s
    applied to basis function r gives the Kronecker delta (unisolvence).
    """

    def __init__(self, dim):
        self.dim = dim
        self.access = access_table(dim)
        self.monos = _monomials(dim)
        n = len(self.access)
        mat = [[_functional(e, m) for m in self.monos] for e in self.access]
        eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        sol = _solve_exact(mat, eye)
        # sol solves M X = I; column r holds the coefficients of B_r
        self.coeffs = [
            {m: sol[k][r] for k, m in enumerate(self.monos) if sol[k][r] != 0}
            for r in range(n)
        ]
        shape = (n,) + (3,) * dim
        cf = np.zeros(shape)
        for r in range(n):
            for m, c in self.coeffs[r].items():
                cf[(r,) + m] = float(c)
        self._cf = cf

    @property
    def ndof(self):
        return len(self.access)

    def _value_float(self, r, point):
        out = 0.0
        for m, c in self.coeffs[r].items():
            term = float(c)
            for p, e in zip(point, m):
                term *= p ** e
            out += term
        return out

    def value_exact(self, r, point):
        out = Fraction(0)
        for m, c in self.coeffs[r].items():
            term = c
            for p, e in zip(point, m):
                term *= Fraction(p) ** e
            out += term
        return out

    def deriv_exact(self, r, axis, point):
        """Exact derivative of basis function r along an axis at a rational point."""
        out = Fraction(0)
        for m, c in self.coeffs[r].items():
            e = m[axis]
            if e == 0:
                continue
            term = c * e
            for a, (p, ee) in enumerate(zip(point, m)):
                ee = ee - 1 if a == axis else ee
                term *= Fraction(p) ** ee
            out += term
        return out

    def average_exact(self, r):
        avg = {0: Fraction(1), 1: Fraction(0), 2: Fraction(1, 12)}
        out = Fraction(0)
        for m, c in self.coeffs[r].items():
            term = c
            for e in m:
                term *= avg[e]
            out += term
        return out

    def deriv_average_exact(self, r, axis):
        """Cell average of the derivative of basis function r along an axis."""
        avg = {0: Fraction(1), 1: Fraction(0), 2: Fraction(1, 12)}
        out = Fraction(0)
        for m, c in self.coeffs[r].items():
            e = m[axis]
            if e == 0:
                continue
            # average of e * x^(e-1): nonzero only for e=1
            if e != 1:
                continue
            term = c
            for a, ee in enumerate(m):
                if a == axis:
                    continue
                term *= avg[ee]
            out += term
        return out

    def eval_dofs(self, dofs, points):
        """Evaluate the reconstruction with the given accessible dofs.

        dofs has shape (..., ndof); points is an array (npts, dim); the result
        has shape (..., npts).
        """
        pts = np.asarray(points, dtype=float)
        vand = np.ones((len(pts), len(self.monos)))
        for k, m in enumerate(self.monos):
            for a, e in enumerate(m):
                if e:
                    vand[:, k] *= pts[:, a] ** e
        cm = np.array([[float(self.coeffs[r].get(m, 0)) for m in self.monos]
                       for r in range(self.ndof)])
        return np.asarray(dofs) @ (cm @ vand.T)


_BASES = {}


def shape_basis(dim):
    if dim not in _BASES:
        _BASES[dim] = ShapeBasis(dim)
    return _BASES[dim]


def shape_value(basis, r, point):
    """Evaluate basis function r of `basis` at a scaled point."""
    if not 0 <= r < basis.ndof:
        raise IndexError(f"basis function index {r} out of range")
    return basis._value_float(r, point)


def reconstruct_eval(basis, dofs, point):
    """Evaluate the reconstruction given accessible dofs at a scaled point."""
    return float(basis.eval_dofs(np.asarray(dofs, dtype=float), [point])[..., 0])


@dataclass(frozen=True)
class DerivOp:
    """One-sided derivative stencil for a point value.

    entries maps (dof kind, cell offset) to the exact stencil coefficient; the
    physical derivative is the stencil sum divided by the cell size along
    `axis`.  side is "own" (derivative of the cell's own reconstruction) or
    "star" (reconstruction of the downwind neighbor along `axis`).
    """
    kind: str
    axis: int
    side: str
    entries: tuple  # ((kind, offset), Fraction) pairs

    def as_dict(self):
        return dict(self.entries)

    def apply(self, gather, h):
        """Apply to a function gather(kind, offset) -> value; divides by h."""
        out = 0.0
        for (kind, off), c in self.entries:
            out += float(c) * gather(kind, off)
        return out / h


def build_deriv_ops(dim):
    """All one-sided derivative stencils, keyed by (point kind, axis, side)."""
    basis = shape_basis(dim)
    ops = {}
    for kind, pos in POINT_POS[dim].items():
        for axis in range(dim):
            own = {}
            for r, (k2, off, _) in enumerate(basis.access):
                c = basis.deriv_exact(r, axis, pos)
                if c != 0:
                    key = (k2, off)
                    own[key] = own.get(key, Fraction(0)) + c
            ops[(kind, axis, "own")] = DerivOp(kind, axis, "own",
                                               tuple(sorted(own.items())))
            if pos[axis] == HALF:
                # downwind neighbor along the axis shares this point at its
                # lower boundary; differentiate its reconstruction there
                npos = tuple(c - 1 if a == axis else c for a, c in enumerate(pos))
                star = {}
                for r, (k2, off, _) in enumerate(basis.access):
                    c = basis.deriv_exact(r, axis, npos)
                    if c != 0:
                        noff = tuple(o + 1 if a == axis else o
                                     for a, o in enumerate(off))
                        key = (k2, noff)
                        star[key] = star.get(key, Fraction(0)) + c
                op = DerivOp(kind, axis, "star", tuple(sorted(star.items())))
            else:
                op = DerivOp(kind, axis, "star",
                             ops[(kind, axis, "own")].entries)
            ops[(kind, axis, "star")] = op
    return ops


_DERIV_OPS = {}


def deriv_ops(dim):
    if dim not in _DERIV_OPS:
        _DERIV_OPS[dim] = build_deriv_ops(dim)
    return _DERIV_OPS[dim]


def format_stencils(dim):
    """Human-readable dump of every derivative stencil."""
    lines = []
    axes = "xyz"
    for (kind, axis, side), op in sorted(deriv_ops(dim).items()):
        tag = f"D{axes[axis]}{'*' if side == 'star' else ' '} at {kind}"
        lines.append(f"{tag}  (divide by h_{axes[axis]})")
        for (k2, off), c in op.entries:
            lines.append(f"    {str(c):>8s} * {k2}[{','.join(f'{o:+d}' for o in off)}]")
    return "\n".join(lines)
