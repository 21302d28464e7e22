"""Grids, dof storage, boundary resolution and snapshot output."""

import numpy as np
import pytest

from activeflux.grid import (PERIODIC, ZEROGRAD, DofField, State,
                             accessible_all, accessible_dofs, gather_shifted,
                             grid_for_box, total_average, write_snapshot)


def test_grid_for_box_scalars_and_tuples():
    g = grid_for_box(2, 10, 0.0, 1.0)
    assert g.n == (10, 10)
    assert g.h == (0.1, 0.1)
    g2 = grid_for_box(2, (4, 8), (0.0, -1.0), (2.0, 1.0))
    assert g2.h == (0.5, 0.25)
    assert g2.origin == (0.0, -1.0)


def test_grid_validation():
    with pytest.raises(ValueError):
        grid_for_box(4, 5, 0.0, 1.0)
    with pytest.raises(ValueError):
        grid_for_box(2, 2, 0.0, 1.0)     # fewer than 3 cells
    with pytest.raises(ValueError):
        grid_for_box(1, 5, 0.0, 1.0, "reflect")


def test_resolve_periodic_and_zerograd():
    gp = grid_for_box(1, 5, 0.0, 1.0, PERIODIC)
    gz = grid_for_box(1, 5, 0.0, 1.0, ZEROGRAD)
    idx = np.array([-2, -1, 0, 4, 5, 6])
    assert list(gp.resolve(idx, 0)) == [3, 4, 0, 4, 0, 1]
    assert list(gz.resolve(idx, 0)) == [0, 0, 0, 4, 4, 4]


def test_dof_positions():
    g = grid_for_box(2, 4, 0.0, 1.0)
    xa, ya = g.dof_positions("A")
    assert xa[0] == pytest.approx(0.125)
    xn, yn = g.dof_positions("N")
    assert xn[0] == pytest.approx(0.25)
    assert yn[0] == pytest.approx(0.25)
    xeh, yeh = g.dof_positions("EH")
    assert xeh[0] == pytest.approx(0.125)   # edge midpoint keeps center x
    assert yeh[0] == pytest.approx(0.25)


@pytest.mark.parametrize("dim,count", [(1, 3), (2, 9), (3, 27)])
def test_accessible_dofs_count(dim, count):
    g = grid_for_box(dim, 4, 0.0, 1.0)
    fld = DofField(g)
    fld.data[:] = np.arange(fld.data.size).reshape(fld.data.shape)
    vals = accessible_dofs(fld, (1,) * dim)
    assert len(vals) == count


def test_accessible_all_matches_per_cell():
    g = grid_for_box(2, 5, 0.0, 1.0)
    rng = np.random.default_rng(0)
    fld = DofField(g, rng.normal(size=(len(g.kinds),) + g.n))
    allv = accessible_all(fld)
    for cell in [(0, 0), (2, 3), (4, 4)]:
        assert np.allclose(allv[cell], accessible_dofs(fld, cell))


def test_gather_shifted_periodic_wrap():
    g = grid_for_box(1, 4, 0.0, 1.0, PERIODIC)
    lat = np.array([0.0, 1.0, 2.0, 3.0])
    assert list(gather_shifted(g, lat, (1,))) == [1.0, 2.0, 3.0, 0.0]
    gz = grid_for_box(1, 4, 0.0, 1.0, ZEROGRAD)
    assert list(gather_shifted(gz, lat, (-1,))) == [0.0, 0.0, 1.0, 2.0]


def test_state_flat_roundtrip():
    g = grid_for_box(2, 4, 0.0, 1.0)
    rng = np.random.default_rng(1)
    st = State(g, 3, rng.normal(size=(4, 3, 4, 4)), time=2.5)
    back = State.from_flat(g, 3, st.flat(), st.time)
    assert np.array_equal(back.data, st.data)
    assert back.time == 2.5


def test_total_average():
    g = grid_for_box(2, 4, 0.0, 2.0)
    st = State(g, 3)
    st.data[0, 2] = 1.0      # pressure averages = 1 over a [0,2]^2 box
    assert total_average(st)[2] == pytest.approx(4.0)
    assert total_average(st)[0] == 0.0


def test_write_snapshot_schema(tmp_path):
    g = grid_for_box(2, 3, 0.0, 1.0)
    st = State(g, 3)
    st.data[:] = 0.5
    path = tmp_path / "snap.csv"
    write_snapshot(path, st, ["u", "v", "p"])
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# dim=2 n=3,3")
    assert lines[1] == "kind,i,j,x,y,u,v,p"
    assert len(lines) == 2 + 4 * 9      # four kinds, nine cells each
    fields = lines[2].split(",")
    assert fields[0] == "A"
    assert float(fields[-1]) == 0.5
