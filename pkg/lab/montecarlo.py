"""Empirical frequencies of the good-restriction events.

Each trial samples one restriction from its own generator, spawned from a
single SeedSequence, so the report depends only on the seed and not on the
number of workers.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from cnf.core import Cnf
from encoders.layout import VarLayout
from lab.admissible import find_blocked_premise
from lab.events import check_level_bounds, check_patterns
from lab.restriction import RhoParams, sample_rho
from utils.error_handler import ParamError

logger = logging.getLogger(__name__)

EVENTS = (
    'level_bounds_i', 'level_bounds_ii', 'level_bounds_iii', 'level_bounds',
    'patterns_i', 'patterns_ii', 'patterns',
)


def wilson_interval(successes: int, trials: int, z: float = 1.96):
    """(low, high) Wilson score interval for a binomial proportion"""
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denominator = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denominator
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denominator
    return max(0.0, center - half), min(1.0, center + half)


def analytic_bounds(p: float, s: int, t: int) -> Dict[str, float]:
    spread = s * math.exp(-p * t / 3)
    return {
        'level_bounds': 1 - 3 * spread,
        'patterns': 1 - 3 * p - 67 * p ** 3 * s * t,
    }


@dataclass
class _Trial:
    events: Dict[str, bool]
    blocked: bool


def _run_trial(params: RhoParams, n: int, r: int, s: int, t: int, layout: VarLayout,
               seed: np.random.SeedSequence, f: Optional[Cnf] = None) -> _Trial:
    rho = sample_rho(params, n, r, s, t, layout, np.random.default_rng(seed))
    levels = check_level_bounds(rho)
    patterns = check_patterns(rho)
    events = {
        'level_bounds_i': levels['i'],
        'level_bounds_ii': levels['ii'],
        'level_bounds_iii': levels['iii'],
        'level_bounds': all(levels.values()),
        'patterns_i': patterns.item_i,
        'patterns_ii': patterns.item_ii,
        'patterns': patterns.ok,
    }
    blocked = f is not None and patterns.ok and find_blocked_premise(rho, f) is not None
    return _Trial(events, blocked)


def monte_carlo(params: RhoParams, n: int, r: int, s: int, t: int, trials: int,
                workers: int = 1, z: float = 1.96, f: Optional[Cnf] = None) -> Dict[str, Any]:
    """Frequencies of the level-bound and pattern events over independent samples.

    With f given, samples that pass the pattern events but admit no
    admissible extension for f are counted as blocked.
    """
    if trials < 1:
        raise ParamError(f"need at least one trial, got {trials}")
    if workers < 1:
        raise ParamError(f"need at least one worker, got {workers}")
    layout = VarLayout(n, r, s, t)
    seeds = np.random.SeedSequence(params.seed).spawn(trials)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results: List[_Trial] = list(pool.map(
            lambda seed: _run_trial(params, n, r, s, t, layout, seed, f), seeds
        ))

    p = params.probability(s, t)
    bounds = analytic_bounds(p, s, t)
    events = {}
    for name in EVENTS:
        successes = sum(trial.events[name] for trial in results)
        low, high = wilson_interval(successes, trials, z)
        frequency = successes / trials
        bound: Optional[float] = bounds.get(name)
        entry = {
            'successes': successes,
            'frequency': frequency,
            'ci_low': low,
            'ci_high': high,
            'bound': bound,
        }
        if bound is not None:
            standard_error = (high - low) / (2 * z)
            entry['vacuous'] = bound <= 0
            entry['consistent'] = bound <= 0 or frequency >= bound - 3 * standard_error
        events[name] = entry

    logger.debug(f"{trials} trials at p={p:.4g}: {sum(trial.blocked for trial in results)} blocked")
    return {
        'parameters': {
            'n': n, 'r': r, 's': s, 't': t, 'p': p, 'epsilon': params.epsilon,
            'variant': params.variant, 'seed': params.seed, 'trials': trials, 'z': z,
        },
        'events': events,
        'blocked': sum(trial.blocked for trial in results) if f is not None else None,
    }
