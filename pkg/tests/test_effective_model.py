import cmath
import math

import numpy as np
import pytest

from wstate.effective_model import (
    EffectiveModel,
    Variant,
    analytic_spectrum,
    build_star_hamiltonian,
    entangling_time,
    evolve_star_closed_form,
    global_phase,
    paper_eigvec_eigenvalues,
    paper_eigvec_matrix,
    uniform_target,
)
from wstate.errors import UnsupportedVariantError
from wstate.numerics import evolve_eig, hermitian_eig, matexp_apply_oracle

G_PAPER = 2 * math.pi * 0.1  # 100 MHz in rad/ns


def hub(n):
    psi = np.zeros(n + 1, dtype=complex)
    psi[0] = 1
    return psi


def test_model_validation():
    with pytest.raises(ValueError):
        EffectiveModel(0, 1.0)
    with pytest.raises(ValueError):
        EffectiveModel(3, 0.0)
    with pytest.raises(ValueError):
        EffectiveModel(3, 1.0, "W3")
    assert EffectiveModel(3, 1.0, "wn1").variant is Variant.WN1


def test_star_two_level():
    np.testing.assert_array_equal(build_star_hamiltonian(EffectiveModel(1, 1.0)), [[0, 1], [1, 0]])


def test_star_n4_both_variants():
    expected = np.array([
        [0, 1, 1, 1, 1],
        [1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0],
    ], dtype=float)
    np.testing.assert_array_equal(build_star_hamiltonian(EffectiveModel(4, 1.0)), expected)
    expected[0, 0] = 2
    np.testing.assert_array_equal(build_star_hamiltonian(EffectiveModel(4, 1.0, Variant.WN1)), expected)


def test_spectrum_values():
    np.testing.assert_allclose(analytic_spectrum(EffectiveModel(4, 1.0)).eigenvalues, [-2, 0, 0, 0, 2])
    s5 = math.sqrt(5)
    spec = analytic_spectrum(EffectiveModel(4, 1.0, Variant.WN1))
    np.testing.assert_allclose(spec.eigenvalues, [1 - s5, 0, 0, 0, 1 + s5])
    assert spec.degeneracy_count == 3
    np.testing.assert_allclose(analytic_spectrum(EffectiveModel(1, 0.3)).eigenvalues, [-0.3, 0.3])


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("n", range(1, 17))
def test_spectrum_matches_eigensolver(n, variant):
    model = EffectiveModel(n, 1.0, variant)
    numeric = hermitian_eig(build_star_hamiltonian(model)).eigenvalues
    np.testing.assert_allclose(analytic_spectrum(model).eigenvalues, numeric, rtol=0, atol=1e-12)


def test_paper_eigvec_columns():
    s = paper_eigvec_matrix(EffectiveModel(4, 1.0))
    np.testing.assert_array_equal(s[:, 0], [-2, 1, 1, 1, 1])
    assert paper_eigvec_eigenvalues(EffectiveModel(4, 1.0))[0] == -2
    s1 = paper_eigvec_matrix(EffectiveModel(4, 1.0, Variant.WN1))
    assert s1[0, 0] == 1 - math.sqrt(5)
    np.testing.assert_array_equal(paper_eigvec_matrix(EffectiveModel(1, 1.0)), [[-1, 1], [1, 1]])


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("n", [1, 2, 4, 7, 16])
def test_paper_eigvec_eigen_property(n, variant):
    model = EffectiveModel(n, 0.8, variant)
    h = build_star_hamiltonian(model)
    s = paper_eigvec_matrix(model)
    for col, e in zip(s.T, paper_eigvec_eigenvalues(model)):
        assert np.abs(h @ col - e * col).max() <= 1e-12


def test_entangling_time_paper_values():
    assert round(entangling_time(EffectiveModel(4, G_PAPER)), 4) == 1.2500
    assert round(entangling_time(EffectiveModel(4, G_PAPER, Variant.WN1)), 4) == 1.1180
    assert entangling_time(EffectiveModel(1, 2.0)) == math.pi / 4


def test_entangling_time_scaling():
    ref = entangling_time(EffectiveModel(1, G_PAPER)) * 1.0
    for n in range(1, 17):
        assert entangling_time(EffectiveModel(n, G_PAPER)) * math.sqrt(n) == pytest.approx(ref, rel=1e-15)


def test_global_phase():
    for n in (1, 4, 9):
        assert global_phase(EffectiveModel(n, 1.0)) == 1j
    assert global_phase(EffectiveModel(4, 1.0, Variant.WN1)) == pytest.approx(
        1j * cmath.exp(1j * math.pi / (2 * math.sqrt(5))), abs=1e-15
    )
    assert abs(global_phase(EffectiveModel(10**8, 1.0, Variant.WN1)) - 1j) < 1e-3


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_w_generation_identity(n, variant):
    model = EffectiveModel(n, G_PAPER, variant)
    out = evolve_eig(build_star_hamiltonian(model), hub(n), entangling_time(model))
    target = uniform_target(n, include_hub=variant is Variant.WN1)
    np.testing.assert_allclose(global_phase(model) * out, target, atol=1e-10)


def test_closed_form_endpoints():
    model = EffectiveModel(4, G_PAPER)
    np.testing.assert_array_equal(evolve_star_closed_form(model, 0.0), hub(4))
    out = evolve_star_closed_form(model, entangling_time(model))
    np.testing.assert_allclose(out, [0, -0.5j, -0.5j, -0.5j, -0.5j], atol=1e-12)


def test_closed_form_matches_oracle(rng):
    for _ in range(10):
        t = rng.uniform(-3, 3)
        model = EffectiveModel(3, G_PAPER)
        ref = matexp_apply_oracle(build_star_hamiltonian(model), hub(3), t)
        assert np.abs(evolve_star_closed_form(model, t) - ref).max() <= 1e-10


def test_closed_form_rejects_wn1():
    with pytest.raises(UnsupportedVariantError):
        evolve_star_closed_form(EffectiveModel(4, 1.0, Variant.WN1), 1.0)


def test_uniform_target():
    np.testing.assert_allclose(uniform_target(4), [0, 0.5, 0.5, 0.5, 0.5])
    np.testing.assert_allclose(uniform_target(4, include_hub=True), [1 / math.sqrt(5)] * 5)
    assert round(uniform_target(4, include_hub=True)[0].real, 4) == 0.4472
    np.testing.assert_allclose(uniform_target(1), [0, 1])
    with pytest.raises(ValueError):
        uniform_target(0)
