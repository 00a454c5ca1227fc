import math

import pytest

from lab.regime import Inequality, check_parameter_regime


class TestParameterRegime:
    """Test the three inequalities of the lower-bound regime"""

    def test_names(self):
        """Test the report lists the inequalities in order"""
        report = check_parameter_regime(2, 2, 3, 30, 1.0, 1e-3)
        assert [inequality.name for inequality in report.inequalities] == [
            'probability', 'avoid-sets', 'iterated-exponential',
        ]

    def test_desk_scale_fails_avoid_sets(self):
        """Test t = 30 is far too small for the avoid sets"""
        report = check_parameter_regime(2, 2, 3, 30, 1.0, 1e-3)
        assert not report.get('avoid-sets').holds
        assert not report.ok

    def test_million_fails_avoid_sets(self):
        """Test t = 10^6: 4w alone is about 2.52·10^5 > t/4"""
        report = check_parameter_regime(2, 2, 3, 1e6, 1.0, 1e-3)
        avoid = report.get('avoid-sets')
        assert avoid.rhs == pytest.approx(2.5e5)
        assert 4 * report.w == pytest.approx(2.524e5, rel=1e-3)
        assert not avoid.holds

    def test_ten_million_holds(self):
        """Test t = 10^7: avoid sets and the iterated exponential hold"""
        report = check_parameter_regime(2, 2, 3, 1e7, 1.0, 1e-3)
        assert report.p * report.t == pytest.approx(100.0, rel=1e-6)
        assert report.get('avoid-sets').holds
        assert report.get('iterated-exponential').holds
        assert report.get('iterated-exponential').lhs == pytest.approx(1.0, abs=1e-6)

    def test_astronomical_point(self):
        """Test s = t = 10^14: all three hold and the sampling sum is about 0.68"""
        report = check_parameter_regime(2, 2, 1e14, 1e14, 1.0, 1e-3)
        assert report.ok
        assert report.get('probability').lhs == pytest.approx(0.68, abs=5e-3)

    def test_saturates_instead_of_overflowing(self):
        """Test huge exponents give infinity rather than an error"""
        report = check_parameter_regime(2, 2, 3, 1e6, 1.0, 0.9, p=1e-9)
        assert report.get('iterated-exponential').lhs == math.inf
        assert not report.get('iterated-exponential').holds

    def test_explicit_p_and_w(self):
        """Test explicit parameters override the defaults"""
        report = check_parameter_regime(2, 2, 3, 1000, 1.0, 1e-3, p=0.01, w=5)
        assert (report.p, report.w) == (0.01, 5)
        assert report.get('avoid-sets').lhs == pytest.approx(10 * 10 + 20)

    def test_shape_warnings(self):
        """Test warnings for parameters outside the intended shape"""
        assert check_parameter_regime(2, 2, 3, 30, 1.0, 1e-3).warnings == []
        warnings = check_parameter_regime(3, 2, 3, 30, 1.0, 1e-3).warnings
        assert "expected t >= s >= n + 1" in warnings
        assert "expected r >= n >= 2" in warnings

    def test_to_dict(self):
        """Test the JSON form"""
        data = check_parameter_regime(2, 2, 3, 30, 1.0, 1e-3, variant='level-scaled').to_dict()
        assert data['parameters']['t'] == 30
        assert data['ok'] is False
        assert len(data['inequalities']) == 3

    def test_inequality_is_strict(self):
        """Test equality does not count as holding"""
        assert not Inequality('x', 1.0, 1.0).holds
