"""Numeric evaluation of the inequalities the lower-bound argument needs.

Parameters may be astronomically large, so every exponential is taken in
log space and saturates to infinity instead of overflowing.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from lab.restriction import RhoParams

_MAX_EXP = 700.0


def _exp(x: float) -> float:
    return math.exp(x) if x < _MAX_EXP else math.inf


def _times_exp(log_factor: float, x: float) -> float:
    """factor·e^x for factor = e^log_factor"""
    return _exp(log_factor + x)


@dataclass
class Inequality:
    name: str
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'lhs': self.lhs, 'rhs': self.rhs, 'holds': self.holds}


@dataclass
class RegimeReport:
    n: float
    r: float
    s: float
    t: float
    epsilon: float
    delta: float
    p: float
    w: float
    inequalities: List[Inequality] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(inequality.holds for inequality in self.inequalities)

    def get(self, name: str) -> Inequality:
        return next(inequality for inequality in self.inequalities if inequality.name == name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'parameters': {
                'n': self.n, 'r': self.r, 's': self.s, 't': self.t,
                'epsilon': self.epsilon, 'delta': self.delta, 'p': self.p, 'w': self.w,
            },
            'inequalities': [inequality.to_dict() for inequality in self.inequalities],
            'ok': self.ok,
            'warnings': list(self.warnings),
        }


def _shape_warnings(n: float, r: float, s: float, t: float, epsilon: float) -> List[str]:
    warnings = []
    if not t >= s >= n + 1:
        warnings.append("expected t >= s >= n + 1")
    if not r >= n >= 2:
        warnings.append("expected r >= n >= 2")
    if math.log(t) < (3 + epsilon) * math.log(r):
        warnings.append("expected t >= r^(3+epsilon)")
    return warnings


def check_parameter_regime(n: float, r: float, s: float, t: float, epsilon: float, delta: float,
                           variant: str = 'standard', p: Optional[float] = None,
                           w: Optional[float] = None) -> RegimeReport:
    params = RhoParams(epsilon=epsilon, p=p, w=w, variant=variant)
    p = params.probability(s, t)
    w = params.width(s, t)
    pt = p * t
    log_s = math.log(s)

    # s·e^{-pt/3}
    spread = _times_exp(log_s, -pt / 3)
    head = max(_exp(-p * w / 3) + 2 * spread, _exp(-pt / (8 * r)))
    union = math.inf if head == math.inf else (
        0.0 if head == 0 else _exp(math.log(head) + t ** delta * math.log(2))
    )
    sampling = union + 3 * spread + 3 * p + 67 * p ** 3 * s * t

    report = RegimeReport(n, r, s, t, epsilon, delta, p, w)
    report.inequalities.append(Inequality('probability', sampling, 1.0))
    report.inequalities.append(Inequality('avoid-sets', 10 * pt + 4 * w, t / 4))
    report.inequalities.append(Inequality('iterated-exponential', _exp(_exp(math.log(t) - pt / 3)), 2.0))
    report.warnings.extend(_shape_warnings(n, r, s, t, epsilon))
    return report
