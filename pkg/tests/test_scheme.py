"""Models, splittings, term tables, sparse operator and time stepping."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from activeflux.grid import State, grid_for_box, total_average
from activeflux.scheme import (Acoustics, Advection, advance, build_operator,
                               build_terms, face_flux_table, jacobian_split,
                               rhs, rk3_step)


def test_advection_model():
    m = Advection((2.0, -1.0))
    assert m.dim == 2 and m.m == 1
    assert m.jacobian(0)[0, 0] == 2.0
    assert m.abs_jacobian(1)[0, 0] == 1.0
    assert m.max_speed(1) == 1.0


def test_acoustics_model():
    m = Acoustics(2, c=3.0)
    J = m.jacobian(0)
    assert J[0, 2] == 3.0 and J[2, 0] == 3.0 and J[1, 1] == 0.0
    A = m.abs_jacobian(0)
    assert np.allclose(np.sort(np.linalg.eigvalsh(A)), [0.0, 3.0, 3.0])


@pytest.mark.parametrize("splitting", ["upwind", "central", "rusanov"])
def test_split_sums_to_jacobian(splitting):
    for model in (Advection((1.5,)), Acoustics(2, 0.7), Acoustics(3)):
        for axis in range(model.dim):
            Jp, Jm = jacobian_split(model, axis, splitting)
            assert np.allclose(Jp + Jm, model.jacobian(axis))


def test_upwind_split_signs():
    model = Acoustics(2)
    Jp, Jm = jacobian_split(model, 0, "upwind")
    assert np.all(np.linalg.eigvalsh(Jp + Jp.T) >= -1e-14)
    assert np.all(np.linalg.eigvalsh(Jm + Jm.T) <= 1e-14)


def test_rusanov_literal_flag():
    model = Acoustics(2)
    Jp_half, _ = jacobian_split(model, 0, "rusanov")
    Jp_lit, _ = jacobian_split(model, 0, "rusanov", rusanov_literal=True)
    assert np.allclose(Jp_lit, 2 * Jp_half)


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_face_flux_weights_sum_to_one(dim):
    for axis in range(dim):
        table = face_flux_table(dim, axis)
        assert float(sum(w for _, _, w in table)) == pytest.approx(1.0)


def test_term_table_conservation_2d():
    """The average-row terms telescope: summed over all offsets the net
    average tendency of a constant is zero, kind by kind."""
    model = Acoustics(2)
    terms = build_terms(model, (0.5, 0.5))
    for kind in ("EH", "EV", "N"):
        if ("A", kind) not in terms:
            continue
        tot = sum(terms[("A", kind)].values())
        assert np.abs(tot).max() < 1e-14


@pytest.mark.parametrize("dim,n", [(1, 12), (2, 8), (3, 5)])
def test_constant_state_stationary(dim, n):
    model = Advection((1.0,) * dim) if dim == 1 else Acoustics(dim)
    grid = grid_for_box(dim, n, 0.0, 1.0)
    L = build_operator(grid, model)
    st_ = State(grid, model.m)
    st_.data[:] = 3.7
    assert np.abs(rhs(L, st_.flat())).max() <= 1e-13


def test_conservation_periodic_2d():
    """Total averages are conserved exactly by the flux-difference form."""
    rng = np.random.default_rng(8)
    model = Acoustics(2)
    grid = grid_for_box(2, 8, 0.0, 1.0)
    st_ = State(grid, 3, rng.normal(size=(4, 3, 8, 8)))
    before = total_average(st_)
    out = advance(st_, model, 0.01, 50)
    after = total_average(out)
    scale = max(1.0, np.abs(before).max())
    assert np.abs(after - before).max() <= 1e-13 * scale * 50


def test_rhs_linearity():
    rng = np.random.default_rng(9)
    model = Acoustics(2)
    grid = grid_for_box(2, 6, 0.0, 1.0)
    L = build_operator(grid, model)
    for _ in range(5):
        x = rng.normal(size=L.shape[0])
        y = rng.normal(size=L.shape[0])
        a, b = rng.normal(size=2)
        lhs = rhs(L, a * x + b * y)
        r = lhs - (a * rhs(L, x) + b * rhs(L, y))
        assert np.abs(r).max() <= 1e-13 * max(1.0, np.abs(lhs).max())


def test_rk3_is_third_order_on_linear_ode():
    """One step on dx/dt = -x reproduces the cubic Taylor polynomial."""
    import scipy.sparse as sp

    L = sp.csr_matrix(np.array([[1.0]]))
    for dt in (0.1, 0.05):
        got = rk3_step(L, np.array([1.0]), dt)[0]
        want = 1 - dt + dt ** 2 / 2 - dt ** 3 / 6
        assert got == pytest.approx(want, abs=1e-15)


def test_advance_callback_early_stop():
    model = Advection((1.0,))
    grid = grid_for_box(1, 10, 0.0, 1.0)
    st_ = State(grid, 1)
    st_.data[:, 0] = np.sin(2 * np.pi * grid.centers(0))
    seen = []

    def cb(k, t, s):
        seen.append(k)
        return k == 3

    out = advance(st_, model, 0.01, 100, callback=cb)
    assert seen == [1, 2, 3]
    assert out.time == pytest.approx(0.03)


def test_advection_transports_wave_convergent():
    """A periodic sine is advected accurately and the error drops by at
    least 4x under simultaneous grid and step refinement (the one-sided
    point-derivative update is second order in one dimension)."""
    model = Advection((1.0,))
    errs = []
    for n, steps in ((64, 125), (128, 250)):
        grid = grid_for_box(1, n, 0.0, 1.0)
        st_ = State(grid, 1)
        for ki, kind in enumerate(grid.kinds):
            (x,) = grid.dof_positions(kind)
            st_.data[ki, 0] = np.sin(2 * np.pi * x)
        out = advance(st_, model, 0.5 / steps, steps)   # half a period
        worst = 0.0
        for ki, kind in enumerate(grid.kinds):
            (x,) = grid.dof_positions(kind)
            want = np.sin(2 * np.pi * (x - 0.5))
            worst = max(worst, np.abs(out.data[ki, 0] - want).max())
        errs.append(worst)
    assert errs[0] < 1e-3
    assert errs[0] / errs[1] > 3.4


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_operator_cache_consistency(seed):
    """Repeated operator builds give identical matrices (cache correctness)."""
    model = Acoustics(2)
    grid = grid_for_box(2, 5, 0.0, 1.0)
    L1 = build_operator(grid, model)
    L2 = build_operator(grid, model)
    assert L1 is L2
    rng = np.random.default_rng(seed)
    x = rng.normal(size=L1.shape[0])
    assert np.array_equal(L1 @ x, L2 @ x)
