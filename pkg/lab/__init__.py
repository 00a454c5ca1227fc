from lab.restriction import RandomRestriction, RestrictionGraph, RhoParams, restriction_to_dict, sample_rho
from lab.events import (
    PatternReport, WidthProfile, check_level_bounds, check_patterns, check_widths, width_profile,
)
from lab.admissible import (
    Groups, check_no_falsified_axiom, extend_to_admissible, find_blocked_premise, is_admissible,
)
from lab.adversary import adversary_conditions, adversary_step, cleanup, pivot_case
from lab.regime import RegimeReport, check_parameter_regime
from lab.montecarlo import monte_carlo, wilson_interval
