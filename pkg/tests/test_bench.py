import pytest

from bcd.bench import fitted_exponent, scaling_run, time_decision, time_matrix


class TestFittedExponent:
    def test_recovers_the_slope_on_synthetic_data(self):
        pairs = [(n, 2e-9 * n**3) for n in (100, 200, 400, 800)]
        assert fitted_exponent(pairs) == pytest.approx(3.0, abs=1e-6)

    def test_requires_two_distinct_sizes(self):
        with pytest.raises(ValueError):
            fitted_exponent([(100, 0.5)])
        with pytest.raises(ValueError):
            fitted_exponent([(100, 0.5), (100, 0.6)])


class TestTimings:
    def test_time_matrix_reports_actual_node_count(self):
        nodes, seconds = time_matrix(41, seed=1)
        assert nodes == 41
        assert seconds >= 0

    def test_scaling_run_shape(self):
        pairs = scaling_run((21, 41), seed=2)
        assert [n for n, _ in pairs] == [21, 41]

    def test_time_decision_fast_on_small_input(self):
        assert time_decision(100, seed=3) < 1.0
