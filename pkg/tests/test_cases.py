"""Experiment initializers, diagnostics and the radial reference."""

import numpy as np
import pytest

from activeflux.cases import (CASES, discrete_divergences, gaussian_profile,
                              init_case, l1_error, p22_projected_divergence,
                              radial_reference, radial_reference_state,
                              vortexring_velocity)
from activeflux.grid import State, gather_shifted, grid_for_box
from activeflux.scheme import Acoustics, build_operator


def test_case_registry():
    assert set(CASES) >= {"advect1d", "gaussian2d", "gaussian3d", "vortex2d",
                          "wellprepared2d", "mode3d", "vortexring",
                          "riemann2d"}
    for name, spec in CASES.items():
        assert spec.dim in (1, 2, 3)
        g = spec.make_grid(5)
        assert g.dim == spec.dim


def test_unknown_case_rejected():
    g = grid_for_box(2, 5, 0.0, 1.0)
    with pytest.raises(KeyError):
        init_case("nosuchcase", g)
    with pytest.raises(ValueError):
        init_case("gaussian2d", grid_for_box(1, 5, 0.0, 1.0))


def test_gaussian2d_init_values():
    g = CASES["gaussian2d"].make_grid(40)
    st = init_case("gaussian2d", g)
    # velocity starts at rest; pressure peaks near radius 1/2 from (1,1)
    assert np.abs(st.data[:, :2]).max() == 0.0
    ki = g.kinds.index("N")
    X, Y = np.meshgrid(*g.dof_positions("N"), indexing="ij")
    r = np.sqrt((X - 1) ** 2 + (Y - 1) ** 2)
    want = gaussian_profile(r)
    assert np.abs(st.data[ki, 2] - want).max() == 0.0
    # the cell average of a smooth profile differs from its center value
    assert st.data[0, 2].max() == pytest.approx(1.0, abs=0.2)


def test_riemann2d_init():
    g = CASES["riemann2d"].make_grid(20)
    st = init_case("riemann2d", g)
    ki = g.kinds.index("N")
    assert st.data[ki, 2].min() == 1.0
    assert st.data[ki, 2].max() == 2.0


def test_vortex2d_profile():
    g = CASES["vortex2d"].make_grid(50)
    st = init_case("vortex2d", g)
    ki = g.kinds.index("N")
    X, Y = np.meshgrid(*g.dof_positions("N"), indexing="ij")
    r = np.sqrt((X - 0.5) ** 2 + (Y - 0.5) ** 2)
    speed = np.hypot(st.data[ki, 0], st.data[ki, 1])
    inner = r < 0.2
    assert speed[inner] == pytest.approx(5 * r[inner], abs=1e-12)
    # velocity is tangential: radial component vanishes
    vr = st.data[ki, 0] * (X - 0.5) + st.data[ki, 1] * (Y - 0.5)
    assert np.abs(vr).max() <= 1e-12
    assert np.abs(st.data[ki, 2]).max() == 0.0     # pressure at rest


def test_vortexring_velocity_field():
    u, v, w = vortexring_velocity(np.array(0.0), np.array(0.0), np.array(0.0))
    assert (u, v, w) == (0.0, 0.0, 0.0)
    # on the ring centerline (radius R in the z=0 plane) the speed vanishes
    u, v, w = vortexring_velocity(np.array(0.25), np.array(0.0), np.array(0.0))
    assert np.hypot(np.hypot(u, v), w) == pytest.approx(0.0, abs=1e-12)
    # analytic divergence spot check by central differences
    rng = np.random.default_rng(4)
    eps = 1e-5
    for _ in range(20):
        x, y, z = rng.uniform(0.05, 0.45, 3)
        div = (
            (vortexring_velocity(x + eps, y, z)[0]
             - vortexring_velocity(x - eps, y, z)[0])
            + (vortexring_velocity(x, y + eps, z)[1]
               - vortexring_velocity(x, y - eps, z)[1])
            + (vortexring_velocity(x, y, z + eps)[2]
               - vortexring_velocity(x, y, z - eps)[2])) / (2 * eps)
        assert abs(div) <= 1e-5


def test_divergences_on_linear_field():
    """u = x, v = 0 away from the periodic seam: each stencil returns its
    own fixed multiple of the unit divergence."""
    g = grid_for_box(2, 10, 0.0, 1.0)
    st = State(g, 3)
    for ki, kind in enumerate(g.kinds):
        X, _ = np.meshgrid(*g.dof_positions(kind), indexing="ij")
        st.data[ki, 0] = X
    from activeflux.cases import _divergence_stencils
    stn = _divergence_stencils(*g.h)
    want = {"div1": 12.0, "div2": 2.0, "div3": 8.0, "div4": 1.0,
            "div5": 1.0, "div6": 1.0, "div7": 1.0, "control": 8.0}
    for name, terms in stn.items():
        acc = np.zeros(g.n)
        for var, kind, poly in terms:
            lat = st.data[g.kinds.index(kind), var]
            for off, cc in poly.items():
                acc += cc * gather_shifted(g, lat, off)
        assert acc[3:7, 3:7] == pytest.approx(want[name], abs=1e-12)


def test_divergences_vanish_on_constants():
    g = grid_for_box(2, 8, 0.0, 1.0)
    st = State(g, 3)
    st.data[:, 0] = 1.25
    st.data[:, 1] = -0.5
    dv = discrete_divergences(st)
    assert all(v == 0.0 for v in dv.values())


def test_divergences_annihilate_stationary_mode():
    g = CASES["wellprepared2d"].make_grid()
    st = init_case("wellprepared2d", g)
    scale = np.abs(st.data[:, :2]).max()
    dv = discrete_divergences(st)
    for name in (f"div{i}" for i in range(1, 8)):
        assert dv[name] <= 1e-11 * scale
    assert dv["control"] > 1e-3 * scale


def test_divergences_require_2d():
    g = grid_for_box(1, 5, 0.0, 1.0)
    with pytest.raises(ValueError):
        discrete_divergences(State(g, 1))


def test_projected_divergence_on_stationary_mode():
    g = CASES["wellprepared2d"].make_grid(20)
    st = init_case("wellprepared2d", g)
    scale = np.abs(st.data[:, :2]).max()
    for cell in [(3, 4), (10, 10), (0, 0)]:
        vals = p22_projected_divergence(st, cell)
        assert max(abs(v) for v in vals) <= 1e-10 * scale


def test_projected_divergence_on_linear_field():
    """u = x, v = y has constant divergence 2 (projection is exact)."""
    g = grid_for_box(2, 8, 0.0, 1.0)
    st = State(g, 3)
    for ki, kind in enumerate(g.kinds):
        X, Y = np.meshgrid(*g.dof_positions(kind), indexing="ij")
        st.data[ki, 0] = X
        st.data[ki, 1] = Y
    vals = p22_projected_divergence(st, (4, 4))
    assert vals == pytest.approx((2.0, 2.0, 2.0, 2.0), abs=1e-12)


def test_wellprepared_mode_is_stationary():
    g = CASES["wellprepared2d"].make_grid()
    st = init_case("wellprepared2d", g)
    L = build_operator(g, Acoustics(2))
    res = np.abs(L @ st.flat()).max()
    assert res <= 1e-11 * np.abs(st.flat()).max()


def test_mode3d_is_stationary_but_pointwise_is_not():
    g = CASES["mode3d"].make_grid(10)
    L = build_operator(g, Acoustics(3))
    st = init_case("mode3d", g)
    scale = np.abs(st.flat()).max()
    assert np.abs(L @ st.flat()).max() <= 1e-11 * scale
    naive = init_case("mode3d-pointwise", g)
    nscale = np.abs(naive.flat()).max()
    assert np.abs(L @ naive.flat()).max() > 1e-3 * nscale


def test_l1_error_constant_offset():
    g = grid_for_box(2, 6, 0.0, 1.0)
    a = State(g, 3)
    b = State(g, 3)
    b.data += 0.125
    for kind in g.kinds:
        assert l1_error(a, b, kind) == pytest.approx([0.125] * 3)


def test_radial_reference_dalembert_1d():
    """In one dimension (no geometric source) the solution is the average
    of left- and right-going copies; the reflecting origin mirrors the
    profile evenly."""
    def p0(r):
        return np.exp(-((r - 0.8) / 0.1) ** 2)

    t = 0.2
    ref = radial_reference(1, 20000, t, p0)
    r = np.linspace(0.2, 1.4, 31)
    want = 0.5 * (p0(np.abs(r - t)) + p0(r + t))
    got = ref.eval_p(r)
    assert np.abs(got - want).max() < 5e-3


def test_radial_reference_geometric_spreading_3d():
    """In 3-d the pulse splits; the outgoing half decays like r0/r while
    the ingoing half focuses and exceeds the initial amplitude."""
    ref = radial_reference(3, 40000, 0.3, gaussian_profile)
    outgoing_peak = ref.eval_p(np.linspace(0.7, 0.9, 200)).max()
    # half the initial amplitude spread from r=0.5 to r=0.8
    assert outgoing_peak == pytest.approx(0.5 * 0.5 / 0.8, rel=0.25)
    assert ref.p.max() > 1.0      # focusing near the origin


def test_radial_reference_state_matches_profile():
    g = CASES["gaussian2d"].make_grid(20)
    st = radial_reference_state("gaussian2d", g, 0.0, N=50000)
    ki = g.kinds.index("N")
    X, Y = np.meshgrid(*g.dof_positions("N"), indexing="ij")
    r = np.sqrt((X - 1) ** 2 + (Y - 1) ** 2)
    assert np.abs(st.data[ki, 2] - gaussian_profile(r)).max() < 1e-3
    with pytest.raises(ValueError):
        radial_reference_state("vortex2d", g, 0.1)
