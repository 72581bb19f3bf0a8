import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import avg_qfi_diag, qfi_real_form

from gaussmet import (
    GaussianState,
    InvalidInputError,
    avg_qfi,
    avg_qfi_vs_logneg,
    bound_curve,
    coherent_from_photons,
    heisenberg_scaling_check,
    homodyne_classical_fi,
    qfi_at_theta,
    quantum_crb,
    squeezed_vacuum,
    thermal,
    two_mode_squeezed_vacuum,
    vacuum,
)
from gaussmet.qfi import BOUND_FAMILIES, qfi_batch

MIXED_TWO_MODE = np.array(
    [
        [2.0, 0.0, 1.0, 0.0],
        [0.0, 3.0, 0.0, -0.5],
        [1.0, 0.0, 2.5, 0.0],
        [0.0, -0.5, 0.0, 2.5],
    ]
)


class TestPointwise:
    @pytest.mark.parametrize(
        "state",
        [
            vacuum(),
            coherent_from_photons(1.0, 0.3),
            thermal(1.0),
            squeezed_vacuum(0.5, 0.2),
            two_mode_squeezed_vacuum(0.5),
            GaussianState([[3, 1], [1, 2]], [1, -2]),
            GaussianState(MIXED_TWO_MODE, [1, 0, 0, 0]),
        ],
    )
    @pytest.mark.parametrize("theta", [0.1, 0.9, 2.5])
    def test_matches_real_form_oracle(self, state, theta):
        expected = qfi_real_form(state.cm, state.disp, theta)
        assert qfi_at_theta(state, theta) == pytest.approx(expected, rel=1e-7)

    def test_vacuum_is_two_everywhere(self):
        assert np.allclose(qfi_batch(vacuum(), np.linspace(0, 2 * np.pi, 7)), 2.0, rtol=1e-8)

    def test_thermal_is_isotropic(self):
        values = qfi_batch(thermal(2.0), np.linspace(0, 2 * np.pi, 33))
        assert np.std(values) < 1e-6

    @pytest.mark.parametrize("delta", [0.0, -1e-3, 0.02])
    def test_delta_range(self, delta):
        with pytest.raises(InvalidInputError):
            qfi_at_theta(vacuum(), 0.0, delta=delta)

    def test_delta_insensitive(self):
        s = squeezed_vacuum(0.8)
        assert qfi_at_theta(s, 0.4, delta=1e-2) == pytest.approx(qfi_at_theta(s, 0.4, delta=1e-4), rel=1e-6)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(1.0, 8.0),
    st.floats(1.0, 8.0),
    st.floats(-6.0, 6.0),
    st.floats(-3.0, 3.0),
    st.floats(-3.0, 3.0),
    st.floats(0.0, 2 * np.pi),
)
def test_random_single_mode_against_oracle(a, b, g, x, y, theta):
    if a * b - g * g < 1.0 + 1e-3:
        g = 0.0
    s = GaussianState(np.array([[a, g], [g, b]]), [x, y])
    h = qfi_at_theta(s, theta)
    assert h >= 0
    assert h == pytest.approx(qfi_real_form(s.cm, s.disp, theta), rel=1e-6, abs=1e-9)


class TestAverage:
    @pytest.mark.parametrize("a, b", [(1.0, 1.0), (2.0, 3.0), (1.0, 9.0), (5.0, 5.0)])
    def test_diagonal_closed_form(self, a, b):
        rep = avg_qfi(GaussianState(np.diag([a, b])))
        assert rep.avg_qfi == pytest.approx(avg_qfi_diag(a, b), rel=1e-8)
        assert rep.converged and not rep.negative

    def test_report_contents(self):
        rep = avg_qfi(coherent_from_photons(1.0), nodes=32)
        assert rep.quadrature_nodes == 32
        assert len(rep.theta_samples) == 32
        assert rep.n_A == pytest.approx(1.0)
        assert rep.flags == []

    def test_nodes_validated(self):
        with pytest.raises(InvalidInputError):
            avg_qfi(vacuum(), nodes=24)
        with pytest.raises(InvalidInputError):
            avg_qfi(vacuum(), nodes=8)

    def test_grid_doubles_until_converged(self):
        s = squeezed_vacuum(1.5)
        rep = avg_qfi(s, nodes=16, max_nodes=512, tol=1e-12)
        assert rep.quadrature_nodes > 16
        assert rep.avg_qfi == pytest.approx(bound_curve("pure-squeezed-upper", np.sinh(1.5) ** 2), rel=1e-6)

    def test_unconverged_is_flagged(self):
        rep = avg_qfi(squeezed_vacuum(1.5), nodes=16, tol=0.0)
        assert not rep.converged and "nonconverged" in rep.flags


class TestBounds:
    @pytest.mark.parametrize("family", sorted(BOUND_FAMILIES))
    def test_all_equal_two_at_zero(self, family):
        assert bound_curve(family, 0.0) == pytest.approx(2.0)

    @pytest.mark.parametrize(
        "family, n, expected",
        [
            ("pure-squeezed-upper", 1.0, 10.0),
            ("thermal-lower", 1.0, 3.6),
            ("coherent", 1.0, 6.0),
            ("separable-upper", 1.0, 3 - 1 / 3 + 2),
            ("discord-upper", 2.0, 10.0),
            ("entangled-logneg", 1.0, 10.0),
        ],
    )
    def test_values(self, family, n, expected):
        assert bound_curve(family, n) == pytest.approx(expected)

    def test_ordering(self):
        n = np.linspace(0.01, 5, 50)
        lower, upper = bound_curve("thermal-lower", n), bound_curve("pure-squeezed-upper", n)
        assert np.all(lower <= bound_curve("separable-upper", n))
        assert np.all(bound_curve("separable-upper", n) <= bound_curve("coherent", n))
        assert np.all(bound_curve("coherent", n) <= upper)

    def test_bad_input(self):
        with pytest.raises(InvalidInputError):
            bound_curve("nope", 1.0)
        with pytest.raises(InvalidInputError):
            bound_curve("coherent", -1.0)

    def test_logneg_relation_reduces_to_upper_bound(self):
        n = np.linspace(0, 10, 101)
        e_n = 2 * np.arcsinh(np.sqrt(n))
        assert np.allclose(avg_qfi_vs_logneg(n, e_n), 4 * n**2 + 4 * n + 2, rtol=1e-12)

    def test_logneg_relation_without_entanglement(self):
        # nu = 1 gives 2 + 4n(n+1)/(1 + 2n), the separable cap
        n = np.linspace(0, 5, 11)
        assert np.allclose(avg_qfi_vs_logneg(n, 0.0), bound_curve("separable-upper", n), rtol=1e-12)


class TestCrb:
    def test_values(self):
        assert quantum_crb(2.0) == pytest.approx(1 / np.sqrt(2))
        assert quantum_crb(2.0, 100) == pytest.approx(0.1 / np.sqrt(2))

    @pytest.mark.parametrize("h, m", [(0.0, 1), (-1.0, 1), (1.0, 0)])
    def test_invalid(self, h, m):
        with pytest.raises(InvalidInputError):
            quantum_crb(h, m)


class TestHomodyne:
    def test_saturates_on_vacuum(self):
        # measuring q of the vacuum at theta = 0: v = e^{2 eps}, v' = 2
        assert homodyne_classical_fi(vacuum(), 0.0, 0.0) == pytest.approx(2.0)

    def test_displacement_term(self):
        s = coherent_from_photons(1.0)
        assert homodyne_classical_fi(s, 0.0, 0.0) == pytest.approx(4 + 2)

    def test_below_qfi(self):
        s = GaussianState(MIXED_TWO_MODE, [1, 0.5, 0, 0])
        for theta in np.linspace(0, np.pi, 5):
            for phi in np.linspace(0, np.pi, 5):
                assert homodyne_classical_fi(s, theta, phi) <= qfi_at_theta(s, theta) + 1e-6


class TestScaling:
    def test_exponents(self):
        grid = np.geomspace(1, 32, 6)
        sq = heisenberg_scaling_check("squeezed", grid, nodes=32)
        coh = heisenberg_scaling_check("coherent", grid, nodes=32)
        assert sq.exponent == pytest.approx(2.0, abs=0.1)
        assert coh.exponent == pytest.approx(1.0, abs=0.1)
        assert sq.naive_exponent < sq.exponent

    def test_thermal_saturates(self):
        fit = heisenberg_scaling_check("thermal", np.geomspace(1, 32, 4), nodes=16)
        assert abs(fit.exponent) < 0.1

    def test_grid_validation(self):
        with pytest.raises(InvalidInputError):
            heisenberg_scaling_check("squeezed", [1, 2, 3])
        with pytest.raises(InvalidInputError):
            heisenberg_scaling_check("laser", [1, 100])
