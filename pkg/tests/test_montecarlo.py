import pytest

from lab.montecarlo import EVENTS, analytic_bounds, monte_carlo, wilson_interval
from lab.restriction import RhoParams
from utils.error_handler import ParamError


class TestWilsonInterval:
    """Test the Wilson score interval"""

    def test_extremes(self):
        """Test all failures and all successes stay inside [0, 1]"""
        low, high = wilson_interval(0, 20)
        assert low == pytest.approx(0.0, abs=1e-12) and 0 < high < 0.2
        low, high = wilson_interval(20, 20)
        assert high == pytest.approx(1.0, abs=1e-12) and 0.8 < low < 1

    def test_symmetric_at_half(self):
        """Test the interval is centred at 1/2 for half successes"""
        low, high = wilson_interval(50, 100)
        assert low + high == pytest.approx(1.0)
        assert high - low == pytest.approx(0.19, abs=0.01)

    def test_no_trials(self):
        """Test zero trials give the whole unit interval"""
        assert wilson_interval(0, 0) == (0.0, 1.0)


class TestAnalyticBounds:
    """Test the lower bounds the event frequencies are compared with"""

    def test_values(self):
        """Test both bounds at p = 0.01, s = 3, t = 30"""
        bounds = analytic_bounds(0.01, 3, 30)
        assert bounds['level_bounds'] < 0
        assert bounds['patterns'] == pytest.approx(1 - 0.03 - 67e-6 * 90)


class TestMonteCarlo:
    """Test event frequencies over seeded trials"""

    def test_report_shape(self):
        """Test every event has a frequency and an interval"""
        report = monte_carlo(RhoParams(seed=1), 2, 2, 3, 30, trials=20)
        assert set(report['events']) == set(EVENTS)
        assert report['parameters']['trials'] == 20
        assert report['blocked'] is None
        for entry in report['events'].values():
            assert 0 <= entry['ci_low'] <= entry['frequency'] <= entry['ci_high'] <= 1

    def test_probability_zero(self):
        """Test nothing is fixed at p = 0, so every event always holds"""
        report = monte_carlo(RhoParams(p=0.0), 2, 2, 3, 30, trials=15)
        assert all(entry['frequency'] == 1.0 for entry in report['events'].values())

    def test_workers_do_not_change_the_report(self):
        """Test one and three workers agree for the same seed"""
        params = RhoParams(seed=5)
        assert monte_carlo(params, 2, 2, 3, 30, 40, workers=1) == monte_carlo(params, 2, 2, 3, 30, 40, workers=3)

    def test_vacuous_flags(self):
        """Test bounds <= 0 are flagged vacuous at the desk-scale point"""
        report = monte_carlo(RhoParams(epsilon=1.0, seed=3), 2, 2, 3, 30, trials=200)
        for name, entry in report['events'].items():
            if entry['bound'] is None:
                assert 'vacuous' not in entry
                continue
            assert entry['vacuous'] == (entry['bound'] <= 0), name
            assert entry['consistent'], name

    def test_non_vacuous_bound_is_met(self):
        """Test the pattern frequency meets its bound within three standard errors at p = 0.01"""
        report = monte_carlo(RhoParams(p=0.01, seed=4), 2, 2, 3, 30, trials=300)
        entry = report['events']['patterns']
        assert not entry['vacuous']
        assert entry['consistent']

    def test_blocked_count(self, lab_formula):
        """Test blocked samples are counted when a formula is given"""
        report = monte_carlo(RhoParams(seed=6), 2, 2, 3, 30, trials=25, f=lab_formula)
        assert 0 <= report['blocked'] <= 25

    @pytest.mark.slow
    def test_thousand_trials(self, lab_formula):
        """Test 1000 trials at the desk-scale point"""
        report = monte_carlo(RhoParams(epsilon=1.0, seed=7), 2, 2, 3, 30, trials=1000, workers=4,
                             f=lab_formula)
        assert all(entry.get('consistent', True) for entry in report['events'].values())

    @pytest.mark.parametrize("trials, workers", [(0, 1), (10, 0)])
    def test_rejects(self, trials, workers):
        """Test trials and workers must be positive"""
        with pytest.raises(ParamError):
            monte_carlo(RhoParams(), 2, 2, 3, 30, trials, workers=workers)
