import math

import numpy as np
import pytest
from conftest import PHI_PLUS, random_hermitian

from qbell.appendix import (
    ObservableMatrix,
    UnitaryQuadruple,
    appendix_bell_value,
    min_admissible_x,
    observable_bound_check,
    rho_of_x,
    separable_observable_check,
    stochastic_omega,
)
from qbell.bell import TSIRELSON_BOUND, BellSetting, bell_number, maximize_bell
from qbell.density import random_density, random_separable
from qbell.errors import DomainError, HermiticityError
from qbell.tomography import EulerAngles

CHSH_OPTIMAL_QUAD = UnitaryQuadruple(
    u1=EulerAngles(0, 0),
    u2=EulerAngles(0, math.pi / 2),
    u3=EulerAngles(0, math.pi / 4),
    u4=EulerAngles(0, -math.pi / 4),
)

IDENTITY_QUAD = UnitaryQuadruple(
    u1=EulerAngles(0, 0), u2=EulerAngles(0, 0), u3=EulerAngles(0, 0), u4=EulerAngles(0, 0)
)


def _random_quad(rng):
    a = rng.uniform(0, 2 * math.pi, 8)
    return UnitaryQuadruple(
        u1=EulerAngles(a[0], a[1]),
        u2=EulerAngles(a[2], a[3]),
        u3=EulerAngles(a[4], a[5]),
        u4=EulerAngles(a[6], a[7]),
    )


def _random_observable(rng, scale=1.0):
    return ObservableMatrix(random_hermitian(rng, 4, scale=scale))


def test_observable_requires_hermitian_4x4():
    skewed = np.diag([1.0, 2.0, 3.0, 4.0]) + 1j * np.triu(np.ones((4, 4)), 1)
    with pytest.raises(HermiticityError):
        ObservableMatrix(skewed)
    with pytest.raises(ValueError, match="4x4"):
        ObservableMatrix(np.eye(3))


def test_rho_of_zero_observable_is_maximally_mixed():
    f = ObservableMatrix(np.zeros((4, 4)))
    rho = rho_of_x(f, 1.0)
    assert np.max(np.abs(rho.mat - np.eye(4) / 4)) <= 1e-15


def test_rho_of_x_explicit_diagonal_case():
    f = ObservableMatrix(np.diag([1.0, -1.0, 0.0, 0.0]))
    rho = rho_of_x(f, 2.0)
    assert np.max(np.abs(rho.mat - np.diag([3, 1, 2, 2]) / 8)) <= 1e-15


def test_rho_of_x_spectrum_formula():
    rng = np.random.default_rng(10)
    for _ in range(100):
        f = _random_observable(rng, scale=2.0)
        x = min_admissible_x(f) * (1 + rng.uniform(0.01, 3.0)) + 0.05
        rho = rho_of_x(f, x)
        expected = np.sort((f.spectrum + x) / (4 * x + f.trace))
        assert np.max(np.abs(rho.spectrum - expected)) <= 1e-10


def test_rho_of_x_rejects_small_shift():
    f = ObservableMatrix(np.diag([1.0, -1.0, 0.0, 0.0]))
    with pytest.raises(DomainError, match="1.0"):
        rho_of_x(f, 0.5)
    # the boundary is excluded
    with pytest.raises(DomainError):
        rho_of_x(f, 1.0)


def test_stochastic_omega_uniform_for_zero_observable():
    rng = np.random.default_rng(20)
    f = ObservableMatrix(np.zeros((4, 4)))
    omega = stochastic_omega(f, 1.0, _random_quad(rng))
    assert np.max(np.abs(omega - 0.25)) <= 1e-12


def test_stochastic_omega_identity_angles_give_diagonal():
    rng = np.random.default_rng(21)
    f = _random_observable(rng)
    x = min_admissible_x(f) + 1.0
    rho = rho_of_x(f, x)
    omega = stochastic_omega(f, x, IDENTITY_QUAD)
    for row in omega:
        assert np.max(np.abs(row - np.diag(rho.mat).real)) <= 1e-15


def test_stochastic_omega_rows_are_distributions():
    rng = np.random.default_rng(22)
    for _ in range(500):
        f = _random_observable(rng, scale=1.5)
        x = min_admissible_x(f) * (1 + rng.uniform(0.01, 2.0)) + 0.05
        omega = stochastic_omega(f, x, _random_quad(rng))
        assert np.max(np.abs(omega.sum(axis=1) - 1.0)) <= 1e-9
        assert np.min(omega) >= -1e-12


def test_value_of_zero_observable_vanishes():
    f = ObservableMatrix(np.zeros((4, 4)))
    rng = np.random.default_rng(23)
    assert appendix_bell_value(f, 1.0, _random_quad(rng)) <= 1e-12


def test_value_matches_bell_number_of_shifted_state():
    # closed form for the entangled projector: |B| of rho(x) at the optimal
    # quadruple is 2 sqrt(2) / (4x + 1)
    f = ObservableMatrix(PHI_PLUS)
    x = 10.0
    val = appendix_bell_value(f, x, CHSH_OPTIMAL_QUAD)
    assert abs(val - 2 * math.sqrt(2) / 41) <= 1e-12
    b = bell_number(rho_of_x(f, x), CHSH_OPTIMAL_QUAD.as_setting())
    assert abs(val - abs(b)) <= 1e-12


def test_value_agrees_with_bell_module_on_random_inputs():
    rng = np.random.default_rng(24)
    for _ in range(500):
        f = _random_observable(rng)
        x = min_admissible_x(f) * (1 + rng.uniform(0.01, 2.0)) + 0.05
        q = _random_quad(rng)
        lhs = appendix_bell_value(f, x, q)
        rhs = abs(bell_number(rho_of_x(f, x), q.as_setting()))
        assert abs(lhs - rhs) <= 1e-12


def test_value_respects_universal_ceiling():
    rng = np.random.default_rng(25)
    for _ in range(2000):
        f = _random_observable(rng, scale=2.0)
        x = min_admissible_x(f) * (1 + rng.uniform(0.001, 3.0)) + 0.01
        assert appendix_bell_value(f, x, _random_quad(rng)) <= TSIRELSON_BOUND + 1e-9


def test_observable_bound_identity_case():
    chk = observable_bound_check(ObservableMatrix(np.eye(4)), CHSH_OPTIMAL_QUAD)
    assert chk.value <= 1e-12
    assert abs(chk.bound - TSIRELSON_BOUND * 4.0) <= 1e-12
    assert chk.holds


def test_observable_bound_scales_linearly_with_density_matrices():
    rng = np.random.default_rng(26)
    for seed in range(50):
        rho = random_density(4, seed)
        c = rng.uniform(0.5, 5.0)
        f = ObservableMatrix(c * rho.mat)
        q = _random_quad(rng)
        chk = observable_bound_check(f, q)
        s = BellSetting(a=q.u1, d=q.u2, b=q.u3, c=q.u4)
        assert abs(chk.value - c * abs(bell_number(rho, s))) <= 1e-10


def test_observable_bound_holds_for_positive_definite_inputs():
    rng = np.random.default_rng(27)
    for _ in range(500):
        h = random_hermitian(rng, 4)
        shift = abs(np.linalg.eigvalsh(h)[0]) + rng.uniform(0.1, 1.0)
        f = ObservableMatrix(h + shift * np.eye(4))
        assert observable_bound_check(f, _random_quad(rng)).holds


def test_observable_bound_rejects_indefinite_spectrum():
    f = ObservableMatrix(np.diag([1.0, -1.0, 1.0, 1.0]))
    with pytest.raises(DomainError, match="-1.0"):
        observable_bound_check(f, IDENTITY_QUAD)


def test_separable_observable_single_term_reaches_two():
    p = np.diag([1.0, 0.0]).astype(complex)
    from qbell.density import SeparableDecomposition

    witness = SeparableDecomposition((1.0,), (p,), (p,))
    chk = separable_observable_check(witness, IDENTITY_QUAD)
    assert abs(chk.value - 2.0) <= 1e-12
    assert chk.holds


def test_separable_observable_bound_holds_on_random_witnesses():
    rng = np.random.default_rng(28)
    for seed in range(300):
        witness = random_separable(seed, 1 + seed % 4)
        chk = separable_observable_check(witness, _random_quad(rng))
        assert chk.value <= 2.0 + 1e-9
        assert chk.holds


def test_separable_observable_requires_a_witness():
    with pytest.raises(TypeError, match="witness"):
        separable_observable_check(PHI_PLUS, IDENTITY_QUAD)


def test_shifting_the_observable_with_matching_x_changes_nothing():
    rng = np.random.default_rng(29)
    f = _random_observable(rng)
    x = min_admissible_x(f) + 2.0
    c = 0.5
    f_shifted = ObservableMatrix(f.mat + c * np.eye(4))
    x_shifted = x - c
    assert x_shifted > min_admissible_x(f_shifted)
    q = _random_quad(rng)
    assert abs(appendix_bell_value(f, x, q) - appendix_bell_value(f_shifted, x_shifted, q)) <= 1e-12
    # identical shifted states means the optimizer's argmax cannot move
    r1 = maximize_bell(rho_of_x(f, x), restarts=4, seed=9)
    r2 = maximize_bell(rho_of_x(f_shifted, x_shifted), restarts=4, seed=9)
    flat1, flat2 = r1.setting.to_flat(), r2.setting.to_flat()
    assert max(abs(a - b) for a, b in zip(flat1, flat2)) <= 1e-4


def test_large_shift_approaches_maximally_mixed():
    rng = np.random.default_rng(30)
    f = _random_observable(rng)
    x = 1e6 * min_admissible_x(f)
    rho = rho_of_x(f, x)
    assert np.max(np.abs(rho.mat - np.eye(4) / 4)) <= 1e-5
