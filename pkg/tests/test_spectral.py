"""Fourier symbol: assembly, kernels, determinants, stability."""

import numpy as np
import pytest

from activeflux.scheme import Acoustics, Advection
from activeflux.spectral import (amplification, assemble_E,
                                 assemble_E_from_grid, det_closed_form_neg1,
                                 det_E, eigen_moduli, kernel_basis,
                                 kernel_dim, kernel_mode_coefficients_3d,
                                 kernel_vector_closed_form, max_stable_dt,
                                 translation_factors)
from appendix_tables import full_matrix, table_checksum

RNG = np.random.default_rng(2024)


def _random_t(dim):
    return tuple(np.exp(1j * RNG.uniform(0.3, 2.8, dim) * RNG.choice([-1, 1], dim)))


def test_translation_factors():
    t = translation_factors((np.pi, 0.0), (1.0, 0.5))
    assert t[0] == pytest.approx(-1.0)
    assert t[1] == pytest.approx(1.0)


def test_advection_symbol_at_zero_phase():
    """At t_x = 1 the 1-d symbol reduces to a known 2x2 matrix."""
    model = Advection((1.0,))
    E = assemble_E(model, (0.5,), (1.0 + 0j,))
    want = (1.0 / 0.5) * np.array([[0.0, 0.0], [-6.0, 6.0]])
    assert np.allclose(E, want, atol=1e-13)


def test_advection_moduli_closed_form():
    """The semi-discrete 1-d amplification moduli are {1, |1-6s+18s^2-36s^3|}
    at zero phase, s = dt/dx."""
    model = Advection((1.0,))
    dx = 1.0
    for s in (0.05, 0.2, 0.35):
        E = assemble_E(model, (dx,), (1.0 + 0j,))
        mods = eigen_moduli(amplification(E, s * dx))
        want = sorted([1.0, abs(1 - 6 * s + 18 * s ** 2 - 36 * s ** 3)])
        assert mods == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("problem,splitting", [
    ("advect1d", "upwind"), ("advect1d", "central"),
    ("acoustics2d", "upwind"), ("acoustics2d", "central"),
    ("acoustics3d", "upwind"), ("acoustics3d", "central"),
])
def test_symbol_matches_grid_operator(problem, splitting):
    """The symbol assembled from the term table equals the one probed from
    the sparse periodic operator with plane waves."""
    from activeflux.grid import grid_for_box

    if problem == "advect1d":
        model, dim = Advection((1.0,)), 1
    elif problem == "acoustics2d":
        model, dim = Acoustics(2), 2
    else:
        model, dim = Acoustics(3), 3
    n = (8, 6, 5)[:dim]
    grid = grid_for_box(dim, n, 0.0, 1.0)
    wave = (3, 2, 1)[:dim]
    t = tuple(np.exp(2j * np.pi * w / nn) for w, nn in zip(wave, n))
    Ea = assemble_E(model, grid.h, t, splitting)
    Eg = assemble_E_from_grid(model, grid, wave, splitting)
    scale = np.abs(Ea).max()
    assert np.abs(Ea - Eg).max() <= 1e-12 * scale


def test_appendix_table_checksum_frozen():
    assert table_checksum() == (
        "9e8ac71eba07d8e0ae32bd56ac678356a3ae4074d1ebfc01ad25e97100383916")


@pytest.mark.parametrize("dim", [2, 3])
def test_transcribed_blocks_match_generated_symbol(dim):
    h = (0.7, 1.3, 0.9)[:dim]
    model = Acoustics(dim, c=1.4)
    for _ in range(5):
        t = _random_t(dim)
        Et = full_matrix(dim, t, h, model.c)
        Eg = assemble_E(model, h, t, "upwind")
        assert np.abs(Et - Eg).max() <= 1e-12 * np.abs(Eg).max()


@pytest.mark.parametrize("dim,splitting,want", [
    (2, "upwind", 1), (2, "central", 4), (3, "upwind", 5),
])
def test_kernel_dimensions(dim, splitting, want):
    model = Acoustics(dim)
    h = (1.0,) * dim
    for _ in range(10):
        E = assemble_E(model, h, _random_t(dim), splitting)
        assert kernel_dim(E) == want


def test_closed_form_kernel_2d():
    model = Acoustics(2)
    h = (0.8, 1.1)
    for _ in range(10):
        t = _random_t(2)
        E = assemble_E(model, h, t, "upwind")
        (q,) = kernel_vector_closed_form(model, t, h)
        res = np.linalg.norm(E @ q) / (np.linalg.norm(E) * np.linalg.norm(q))
        assert res <= 1e-11


def test_closed_form_kernel_3d_and_combination():
    model = Acoustics(3)
    h = (1.0, 0.9, 1.2)
    for _ in range(5):
        t = _random_t(3)
        E = assemble_E(model, h, t, "upwind")
        Qs = kernel_vector_closed_form(model, t, h)
        assert len(Qs) == 5
        for q in Qs:
            res = np.linalg.norm(E @ q) / (np.linalg.norm(E)
                                           * np.linalg.norm(q))
            assert res <= 1e-11
        a = kernel_mode_coefficients_3d(t, h)
        q = sum(ar * qr for ar, qr in zip(a, Qs))
        res = np.linalg.norm(E @ q) / (np.linalg.norm(E) * np.linalg.norm(q))
        assert res <= 1e-11


def test_generic_t_guard():
    model = Acoustics(2)
    with pytest.raises(ValueError):
        kernel_vector_closed_form(model, (1.0 + 0j, 0.5j), (1.0, 1.0))


def test_rusanov_determinant_and_trivial_kernel():
    model = Acoustics(2)
    E = assemble_E(model, (1.0, 1.0), (-1.0 + 0j, -1.0 + 0j), "rusanov")
    det = det_E(E)
    want = det_closed_form_neg1(1.0, 1.0, 1.0)
    assert want == 5308416.0
    assert abs(det - want) <= 1e-9 * abs(want)
    assert kernel_dim(E) == 0


def test_rusanov_halved_vs_literal():
    """Only the halved Rusanov splitting reproduces the published
    determinant; the literally printed form differs."""
    model = Acoustics(2)
    t = (-1.0 + 0j, -1.0 + 0j)
    E_lit = assemble_E(model, (1.0, 1.0), t, "rusanov", rusanov_literal=True)
    assert abs(det_E(E_lit).real - 5308416.0) > 1.0


def test_kernel_basis_orthonormal():
    model = Acoustics(2)
    E = assemble_E(model, (1.0, 1.0), _random_t(2), "central")
    B = np.stack(kernel_basis(E), axis=1)
    assert B.shape[1] == 4
    assert np.allclose(B.conj().T @ B, np.eye(4), atol=1e-12)
    assert np.linalg.norm(E @ B) <= 1e-10 * np.linalg.norm(E)


def test_max_stable_dt_1d():
    model = Advection((1.0,))
    dt = max_stable_dt(model, (1.0,), samples=64)
    assert 0.40 < dt < 0.43


def test_amplification_at_zero_dt():
    model = Acoustics(2)
    E = assemble_E(model, (1.0, 1.0), _random_t(2))
    assert np.allclose(amplification(E, 0.0), np.eye(E.shape[0]))


def test_stable_moduli_bounded_2d():
    """At dt = 0.1 (well inside the stability region) every eigenvalue
    modulus stays below 1 + 1e-9 along the x-axis ray."""
    model = Acoustics(2)
    for beta in (np.pi, 0.5, 2.0):
        E = assemble_E(model, (1.0, 1.0),
                       tuple(np.exp(1j * np.array([beta, 0.0]))))
        assert max(eigen_moduli(amplification(E, 0.1))) <= 1 + 1e-9
