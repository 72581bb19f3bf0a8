import numpy as np
import pytest

from gaussmet import ConfigurationError, InvalidInputError, check_physical, log_negativity
from gaussmet.qfi import avg_qfi_vs_logneg, bound_curve
from gaussmet.sampler import (
    FAMILIES,
    StateClassSpec,
    envelope,
    sample,
    sample_one,
    scatter_experiment,
)


@pytest.mark.parametrize("family", FAMILIES)
def test_every_state_is_physical(family):
    spec = StateClassSpec(family, seed=5)
    for state in sample(spec, 200):
        assert check_physical(state.cm)


def test_deterministic_per_index():
    spec = StateClassSpec("general-2mode", seed=9)
    states = list(sample(spec, 20))
    again = list(sample(spec, 10, start=10))
    assert all(a.allclose(b, atol=0) for a, b in zip(states[10:], again))
    assert sample_one(spec, 3)[0].allclose(states[3], atol=0)


def test_seed_changes_draws():
    a = sample_one(StateClassSpec(seed=1), 0)[0]
    b = sample_one(StateClassSpec(seed=2), 0)[0]
    assert not a.allclose(b)


class TestStructure:
    def test_thermal(self):
        for s in sample(StateClassSpec("thermal"), 20):
            assert s.cm[0, 1] == 0 and s.cm[0, 0] == s.cm[1, 1]
            assert np.all(s.disp == 0)

    def test_separable_standard(self):
        for s in sample(StateClassSpec("separable-standard"), 50):
            assert np.all(s.cm[:2, 2:] == 0)
            assert s.cm[2, 2] == s.cm[3, 3]
            assert np.all(s.disp == 0)

    def test_discordant(self):
        for s in sample(StateClassSpec("discordant"), 50):
            assert s.cm[0, 0] == s.cm[1, 1] and s.cm[2, 2] == s.cm[3, 3]
            assert s.cm[0, 2] == s.cm[1, 3] != 0
            assert log_negativity(s).log_negativity == 0.0

    def test_entangled_pure(self):
        for s in sample(StateClassSpec("entangled-pure"), 50):
            assert np.all(s.disp == 0)
            assert s.cm[0, 2] == -s.cm[1, 3]

    def test_squeezed_pure_is_pure(self):
        for s in sample(StateClassSpec("squeezed-pure"), 50):
            assert np.linalg.det(s.cm) == pytest.approx(1.0)


class TestSpecValidation:
    def test_unknown_family(self):
        with pytest.raises(InvalidInputError):
            StateClassSpec("cluster")

    def test_ranges(self):
        with pytest.raises(InvalidInputError):
            StateClassSpec(a_max=0.5)
        with pytest.raises(InvalidInputError):
            StateClassSpec(r_max=-1.0)

    def test_hopeless_ranges(self):
        # a = b = 1 forces g = 0, which has probability zero
        spec = StateClassSpec("general-1mode", a_max=1.0, g_max=5.0)
        with pytest.raises(ConfigurationError):
            next(sample(spec, 1))


class TestScatter:
    def test_empty(self):
        ds = scatter_experiment(StateClassSpec("thermal"), 0)
        assert len(ds) == 0 and envelope(ds) == []

    def test_sorted_and_reproducible(self):
        spec = StateClassSpec("general-2mode", seed=4)
        a = scatter_experiment(spec, 30, nodes=32)
        b = scatter_experiment(spec, 30, nodes=32, threads=3)
        n = a.column("n_A")
        assert np.all(np.diff(n) >= 0)
        assert [r.as_tuple() for r in a.rows] == [r.as_tuple() for r in b.rows]

    def test_single_mode_has_no_log_negativity(self):
        ds = scatter_experiment(StateClassSpec("coherent"), 3, nodes=16)
        assert np.all(np.isnan(ds.column("E_N")))

    def test_general_single_mode_sandwich(self):
        ds = scatter_experiment(StateClassSpec("general-1mode", seed=12), 200, nodes=64)
        n, h = ds.column("n_A"), ds.column("avg_qfi")
        assert np.all(h >= bound_curve("thermal-lower", n) - 1e-2)
        assert np.all(h <= bound_curve("pure-squeezed-upper", n) + 1e-2)
        assert not ds.flagged

    def test_entangled_pure_logneg(self):
        ds = scatter_experiment(StateClassSpec("entangled-pure", seed=2), 100, nodes=32)
        expected = avg_qfi_vs_logneg(ds.column("n_A"), ds.column("E_N"))
        assert np.allclose(ds.column("avg_qfi"), expected, rtol=1e-2)

    def test_thermal_on_lower_bound(self):
        ds = scatter_experiment(StateClassSpec("thermal", seed=1), 10, nodes=32)
        assert np.allclose(ds.column("avg_qfi"), bound_curve("thermal-lower", ds.column("n_A")), rtol=1e-3)

    def test_squeezed_pure_reaches_upper_envelope(self):
        ds = scatter_experiment(StateClassSpec("squeezed-pure", seed=1), 200, nodes=64)
        env = envelope(ds, bins=10, reference=lambda n: bound_curve("pure-squeezed-upper", n))
        assert all(abs(b["max_ratio"] - 1) < 0.02 for b in env)
        assert sum(b["count"] for b in env) == 200
