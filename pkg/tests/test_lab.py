import pytest

from cnf.core import Cnf
from encoders.layout import VarLayout
from lab.admissible import (
    Groups, check_no_falsified_axiom, extend_to_admissible, find_blocked_premise, is_admissible,
)
from lab.events import check_level_bounds, check_patterns, check_widths, width_profile
from lab.restriction import (
    RandomRestriction, RestrictionGraph, RhoParams, default_exponent, restriction_to_dict,
    sample_rho,
)
from proofs.resolution import InputWeakening, ResolutionProof, ResStep
from utils.error_handler import ParamError, PreconditionFailed


def check_sampler_invariants(rho: RandomRestriction, layout: VarLayout):
    """What every sampled restriction must satisfy by construction"""
    for pair, c in rho.cell_clauses.items():
        assert len(c) == rho.n
        assert {abs(lit) for lit in c} == set(range(1, rho.n + 1))
        assert Groups(rho.rho, layout).clause(pair) == c
    assert set(rho.cell_clauses) == rho.A_D

    assert {(1, j) for j in rho.I_values} == {pair for pair in rho.A_I if pair not in rho.A_D}
    assert set(rho.V_values) == rho.A_V
    for (i, j), l in rho.V_values.items():
        assert Groups(rho.rho, layout).value('V', (i, j)) == l

    for i in range(2, rho.s + 1):
        size = len(rho.level(rho.A_RL, i))
        injection = rho.h.get(i, {})
        if size > rho.budget or 2 * size > rho.t:
            assert not injection
        else:
            assert set(injection) == {j for (_, j) in rho.level(rho.A_RL, i)}
        columns = [col for pair in injection.values() for col in pair]
        assert len(columns) == len(set(columns))


class TestRhoParams:
    """Test restriction parameters"""

    def test_default_exponent(self):
        """Test the exponent of p for both variants"""
        assert default_exponent(1.0) == pytest.approx(2.5 / 3.5)
        assert default_exponent(10.0) == 0.75
        assert default_exponent(1.0, 'level-scaled') == 0.5

    def test_probability(self):
        """Test p = t^-a and the explicit override"""
        assert RhoParams(epsilon=1.0).probability(3, 30) == pytest.approx(30 ** (-2.5 / 3.5))
        assert RhoParams(p=0.2).probability(3, 30) == 0.2
        assert RhoParams(variant='level-scaled').probability(8, 100) == pytest.approx(0.5 * 0.1)

    def test_width(self):
        """Test the default width bounds"""
        assert RhoParams().width(3, 32) == pytest.approx(16.0)
        assert RhoParams(w=5).width(3, 32) == 5

    @pytest.mark.parametrize("kwargs", [
        {'epsilon': 0}, {'variant': 'other'}, {'p': 1.5}, {'w': -1},
    ])
    def test_rejects(self, kwargs):
        """Test invalid parameters"""
        with pytest.raises(ParamError):
            RhoParams(**kwargs)


class TestSampler:
    """Test sampling restrictions"""

    def test_invariants_over_seeds(self, sampled_restriction, lab_layout):
        """Test the sampler invariants on 300 seeds"""
        for seed in range(300):
            check_sampler_invariants(sampled_restriction(seed), lab_layout)

    def test_seed_is_reproducible(self, sampled_restriction):
        """Test equal seeds give equal restrictions"""
        assert sampled_restriction(11) == sampled_restriction(11)

    def test_probability_zero(self, sampled_restriction):
        """Test p = 0 fixes nothing"""
        rho = sampled_restriction(3, p=0.0)
        assert not rho.rho
        assert not (rho.A_D or rho.A_I or rho.A_V or rho.A_RL)

    def test_probability_one_overflows(self, sampled_restriction, lab_layout):
        """Test every level goes over budget when every coin lands heads"""
        rho = sampled_restriction(3, p=1.0)
        assert len(rho.A_D) == 3 * 30
        assert not rho.h
        check_sampler_invariants(rho, lab_layout)

    def test_rejects_degenerate_shape(self):
        """Test n, r, s, t must be positive"""
        with pytest.raises(ParamError):
            sample_rho(RhoParams(), 0, 2, 3, 30)

    def test_to_dict(self, sampled_restriction):
        """Test the JSON form lists the sampled sets"""
        rho = sampled_restriction(5, p=0.3)
        data = restriction_to_dict(rho)
        assert data['two_pt'] == pytest.approx(18.0)
        assert len(data['A_D']) == len(rho.A_D)
        assert data['assigned'] == len(rho.rho)
        assert len(data['h']) == sum(len(injection) for injection in rho.h.values())


class TestRestrictionGraph:
    """Test G_ρ"""

    def test_edges_and_components(self, empty_restriction):
        """Test a single injection gives one component of three vertices"""
        rho = empty_restriction
        rho.A_RL.add((2, 1))
        rho.h[2] = {1: (3, 4)}
        rho.A_D.add((3, 7))
        graph = RestrictionGraph.of(rho)

        assert graph.children((2, 1)) == {'L': (1, 3), 'R': (1, 4)}
        assert graph.parent((1, 4)) == ((2, 1), 'R')
        assert graph.roots() == [(2, 1), (3, 7)]
        assert graph.components()[0] == {(2, 1), (1, 3), (1, 4)}

    def test_B_sets(self, empty_restriction):
        """Test B_i collects the children chosen from level i+1"""
        empty_restriction.h[3] = {2: (5, 6)}
        assert empty_restriction.B(2) == {(2, 5), (2, 6)}


class TestEvents:
    """Test level bounds and forbidden patterns"""

    def test_level_bounds(self, empty_restriction):
        """Test the 2pt = 6 budget per level"""
        rho = empty_restriction
        rho.A_D.update((1, j) for j in range(1, 7))
        assert check_level_bounds(rho) == {'i': True, 'ii': True, 'iii': True}
        rho.A_D.add((1, 7))
        rho.A_I.update((1, j) for j in range(1, 8))
        assert check_level_bounds(rho) == {'i': False, 'ii': True, 'iii': False}

    def test_corner(self, empty_restriction):
        """Test a touched (s,t) fails the first pattern item"""
        empty_restriction.A_V.add((3, 30))
        report = check_patterns(empty_restriction)
        assert not report.item_i
        assert report.item_ii

    def test_triple_on_one_vertex(self, empty_restriction):
        """Test a vertex in three sets"""
        rho = empty_restriction
        for A in (rho.A_D, rho.A_V, rho.A_RL):
            A.add((2, 5))
        report = check_patterns(rho)
        assert not report.ok
        assert report.witness == ((2, 5), (2, 5), (2, 5))

    def test_parent_and_child(self, empty_restriction):
        """Test a doubly fixed parent with a fixed child"""
        rho = empty_restriction
        rho.A_RL.add((2, 1))
        rho.A_V.add((2, 1))
        rho.h[2] = {1: (3, 4)}
        rho.A_D.add((1, 3))
        assert check_patterns(rho).witness == ((2, 1), (2, 1), (1, 3))

    def test_two_memberships_are_allowed(self, empty_restriction):
        """Test one vertex in two sets with untouched children"""
        rho = empty_restriction
        rho.A_RL.add((2, 1))
        rho.A_V.add((2, 1))
        rho.h[2] = {1: (3, 4)}
        assert check_patterns(rho).ok


class TestWidths:
    """Test importance of pairs in clauses"""

    def test_thresholds(self, lab_layout):
        """Test n/2, t/2 and r/2 thresholds and negative literals"""
        layout = lab_layout
        E = frozenset(
            [layout.L(2, 1, jp) for jp in range(1, 16)]
            + [layout.R(2, 2, jp) for jp in range(1, 15)]
            + [-layout.R(3, 4, 9), layout.V(2, 3, 1), layout.I(6, 2), layout.D(2, 8, 1, 0)]
        )
        profile = width_profile(E, layout)
        assert profile.L_important == {(2, 1)}
        assert profile.R_important == {(3, 4)}
        assert profile.V_important == {(2, 3)}
        assert profile.I_important == {(1, 6)}
        assert profile.D_mentioned == {(2, 8)}
        assert profile.I_per_input == {2: 1}
        assert profile.V_per_pivot == {(2, 1): 1}

    def test_check_widths(self, lab_formula, lab_layout):
        """Test a clause mentioning too many cells and inputs"""
        layout = lab_layout
        E = frozenset(
            [layout.D(1, j, 1, 1) for j in range(1, 4)] + [layout.I(j, 1) for j in range(1, 9)]
        )
        pi = ResolutionProof((ResStep(E, InputWeakening(0)),), lab_formula)
        report = check_widths(pi, layout, w=2)
        reasons = [v.reason for v in report.violations]
        assert any(reason.startswith("item (i):") for reason in reasons)
        assert any(reason.startswith("item (vi):") for reason in reasons)
        assert all(v.location == 0 for v in report.violations)
        assert check_widths(pi, layout, w=10).first().reason.startswith("item (vi):")


def _grid_sigma(layout: VarLayout):
    """Admissible assignment on VarLayout(2, 2, 3, 2) for {x1}, {¬x1}:
    C_{2,1} = {x2} resolves C_{1,1} = {x1, x2} and C_{1,2} = {¬x1, x2} on x1"""
    sigma = {}
    groups = Groups(sigma, layout)

    def cell(i, j, c):
        for l in (1, 2):
            sigma[layout.D(i, j, l, 1)] = 1 if l in c else 0
            sigma[layout.D(i, j, l, 0)] = 1 if -l in c else 0

    def group(family, pair, chosen):
        for k, var in enumerate(groups.variables(family, pair), start=1):
            sigma[var] = 1 if k == chosen else 0

    cell(1, 1, {1, 2})
    cell(1, 2, {-1, 2})
    cell(2, 1, {2})
    group('I', (1, 1), 1)
    group('I', (1, 2), 2)
    group('V', (2, 1), 1)
    group('L', (2, 1), 1)
    group('R', (2, 1), 2)
    return sigma, cell, group


class TestIsAdmissible:
    """Test conditions C1-C9 on a hand-built assignment"""

    @pytest.fixture
    def grid(self):
        layout = VarLayout(2, 2, 3, 2)
        sigma, cell, group = _grid_sigma(layout)
        return layout, sigma, cell, group

    def test_valid(self, lab_formula, grid):
        """Test the hand-built assignment is admissible"""
        layout, sigma, _, _ = grid
        assert is_admissible(sigma, {}, lab_formula, layout).ok

    def test_extends(self, lab_formula, grid):
        """Test sigma must agree with rho"""
        layout, sigma, _, _ = grid
        report = is_admissible(sigma, {layout.V(2, 2, 1): 1}, lab_formula, layout)
        assert report.first().location == 'extends'

    def test_partial_group(self, lab_formula, grid):
        """Test C1"""
        layout, sigma, _, _ = grid
        sigma[layout.V(2, 2, 1)] = 1
        assert 'C1' in {v.location for v in is_admissible(sigma, {}, lab_formula, layout).violations}

    def _locations(self, f, sigma, layout):
        return {v.location for v in is_admissible(sigma, {}, f, layout).violations}

    def test_premise_without_cell(self, lab_formula, grid):
        """Test C2"""
        layout, sigma, _, group = grid
        group('L', (2, 2), 2)
        assert 'C2' in self._locations(lab_formula, sigma, layout)

    def test_cell_without_justification(self, lab_formula, grid):
        """Test C3"""
        layout, sigma, _, _ = grid
        for m in (1, 2):
            del sigma[layout.I(1, m)]
        assert self._locations(lab_formula, sigma, layout) == {'C3'}

    def test_tautological_cell(self, lab_formula, grid):
        """Test C4"""
        layout, sigma, cell, _ = grid
        cell(1, 1, {1, -1})
        assert 'C4' in self._locations(lab_formula, sigma, layout)

    def test_nonempty_corner(self, lab_formula, grid):
        """Test C5"""
        layout, sigma, cell, group = grid
        cell(3, 2, {1, 2})
        group('V', (3, 2), 1)
        assert 'C5' in self._locations(lab_formula, sigma, layout)

    def test_wrong_input(self, lab_formula, grid):
        """Test C6"""
        layout, sigma, _, group = grid
        group('I', (1, 1), 2)
        assert self._locations(lab_formula, sigma, layout) == {'C6'}

    def test_premise_lacks_pivot(self, lab_formula, grid):
        """Test C7"""
        layout, sigma, _, group = grid
        group('V', (2, 1), 2)
        assert 'C7' in self._locations(lab_formula, sigma, layout)

    def test_dropped_premise_literal(self, lab_formula, grid):
        """Test C8"""
        layout, sigma, cell, _ = grid
        cell(2, 1, {-2})
        assert 'C8' in self._locations(lab_formula, sigma, layout)

    def test_shared_child(self, lab_formula, grid):
        """Test C9"""
        layout, sigma, _, group = grid
        group('R', (2, 1), 1)
        assert 'C9' in self._locations(lab_formula, sigma, layout)


class TestExtendToAdmissible:
    """Sampled restrictions that avoid the forbidden patterns extend to admissible assignments"""

    def _run(self, seeds, sampled_restriction, lab_formula, lab_layout):
        extended = 0
        for seed in seeds:
            rho = sampled_restriction(seed)
            check_sampler_invariants(rho, lab_layout)
            if not check_patterns(rho).ok or find_blocked_premise(rho, lab_formula) is not None:
                continue
            sigma = extend_to_admissible(rho, lab_formula, lab_layout)
            report = is_admissible(sigma, rho, lab_formula, lab_layout)
            assert report.ok, (seed, report.violations[:3])
            assert check_no_falsified_axiom(sigma, lab_formula, 3, 30, lab_layout).ok, seed
            extended += 1
        return extended

    def test_seeds(self, sampled_restriction, lab_formula, lab_layout):
        """Test 100 seeded restrictions"""
        assert self._run(range(100), sampled_restriction, lab_formula, lab_layout) > 0

    @pytest.mark.slow
    def test_thousand_seeds(self, sampled_restriction, lab_formula, lab_layout):
        """Test 1000 seeded restrictions"""
        assert self._run(range(1000), sampled_restriction, lab_formula, lab_layout) > 0

    def test_touched_corner(self, empty_restriction, lab_formula, lab_layout):
        """Test restrictions touching (s,t) are refused"""
        empty_restriction.A_D.add((3, 30))
        with pytest.raises(PreconditionFailed, match="touched"):
            extend_to_admissible(empty_restriction, lab_formula, lab_layout)

    def test_blocked_premise(self, empty_restriction, lab_formula, lab_layout):
        """Test a left child fixed to an all-negative clause"""
        rho = empty_restriction
        rho.A_RL.add((2, 1))
        rho.h[2] = {1: (1, 2)}
        rho.A_D.add((1, 1))
        rho.cell_clauses[(1, 1)] = frozenset({-1, -2})
        assert "no positive literal" in find_blocked_premise(rho, lab_formula)
        with pytest.raises(PreconditionFailed, match="no admissible extension"):
            extend_to_admissible(rho, lab_formula, lab_layout)

    def test_unsatisfiable_input_required(self, lab_layout):
        """Test a formula with no clause inside a level-1 cell"""
        rho = RandomRestriction(2, 2, 3, 30, 0.1)
        rho.A_D.add((1, 1))
        rho.cell_clauses[(1, 1)] = frozenset({1, 2})
        for l in (1, 2):
            rho.rho[lab_layout.D(1, 1, l, 1)] = 1
            rho.rho[lab_layout.D(1, 1, l, 0)] = 0
        f = Cnf(({-1}, {-2}), 2)
        with pytest.raises(PreconditionFailed, match="satisfiable"):
            extend_to_admissible(rho, f, lab_layout)


class TestNoFalsifiedAxiom:
    """Test the axiom check"""

    def test_nonempty_corner_falsifies(self, lab_formula, lab_layout):
        """Test x1 in C_{s,t} falsifies an empty-clause axiom"""
        sigma = {lab_layout.D(3, 30, 1, 1): 1}
        report = check_no_falsified_axiom(sigma, lab_formula, 3, 30, lab_layout)
        assert [v.location for v in report.violations] == ['empty-clause']

    def test_empty_assignment(self, lab_formula, lab_layout):
        """Test nothing is falsified by the empty assignment"""
        assert check_no_falsified_axiom({}, lab_formula, 3, 30, lab_layout).ok
