import copy

import numpy as np
import pytest

from cnf.core import ClauseStatus, Cnf, eval_cnf
from encoders.layout import VarLayout
from encoders.ref import encode_ref_F
from proofs.levelled import (
    LevelledRefutation, UpperJust, check_levelled, decode_witness, encode_witness,
    levelled_to_text, parse_levelled, simulate,
)
from proofs.resolution import (
    InputWeakening, ResolutionProof, ResStep, Resolvent, height, step_heights,
)
from tests.oracles import (
    enumerate_models, levelled_exists, random_unsat_cnf, saturation_refutation, small_unsat_formulas,
    solve,
)
from utils.error_handler import (
    FatClause, InvalidProof, NotSatisfying, ParseError, TautologicalCell, TautologicalStep,
)


@pytest.fixture
def small_levelled():
    """Two levels of three clauses refuting {x1}, {¬x1} over two variables"""
    L = LevelledRefutation(2, 3)
    L.cells.update({
        (1, 1): frozenset({1}), (1, 2): frozenset({-1}), (1, 3): frozenset({1, 2}),
        (2, 1): frozenset({2}), (2, 2): frozenset({-2}), (2, 3): frozenset(),
    })
    L.level1_just.update({1: 1, 2: 2, 3: 1})
    L.upper_just.update({
        (2, 1): UpperJust(3, 2, 1),
        (2, 2): UpperJust(1, 2, 1),
        (2, 3): UpperJust(1, 2, 1),
    })
    return L


class TestCheckLevelled:
    """Test the levelled refutation checker"""

    def test_valid(self, lab_formula, small_levelled):
        """Test a hand-built refutation passes"""
        assert check_levelled(lab_formula, small_levelled).ok

    def _mutate(self, L, cells=None, level1=None, upper=None, drop=None):
        M = copy.deepcopy(L)
        M.cells.update(cells or {})
        M.level1_just.update(level1 or {})
        M.upper_just.update(upper or {})
        if drop:
            del M.cells[drop]
        return M

    @pytest.mark.parametrize("mutation, location", [
        # flipped literal in a level-1 cell
        ({'cells': {(1, 3): frozenset({-1, 2})}}, (1, 3)),
        # wrong input clause
        ({'level1': {2: 1}}, (1, 2)),
        # input clause that does not exist
        ({'level1': {1: 5}}, (1, 1)),
        # wrong pivot
        ({'upper': {(2, 1): UpperJust(3, 2, 2)}}, (2, 1)),
        # premise column outside the grid
        ({'upper': {(2, 3): UpperJust(4, 2, 1)}}, (2, 3)),
        # nonempty final cell
        ({'cells': {(2, 3): frozenset({2})}}, (2, 3)),
        # dropped literal of a resolvent
        ({'cells': {(2, 1): frozenset()}}, (2, 1)),
        # missing cell
        ({'drop': (1, 1)}, (1, 1)),
        # variable beyond n
        ({'cells': {(1, 1): frozenset({1, 3})}}, (1, 1)),
    ])
    def test_mutation_is_rejected(self, lab_formula, small_levelled, mutation, location):
        """Test each corruption is reported at the corrupted cell"""
        report = check_levelled(lab_formula, self._mutate(small_levelled, **mutation))
        assert not report.ok
        assert report.first().location == location


class TestSimulate:
    """Test turning resolution refutations into levelled ones"""

    def test_contradiction(self, contradiction_refutation):
        """Test a three-step refutation becomes 2 levels of 9 clauses"""
        f = Cnf(({1}, {-1}), 2)
        pi = ResolutionProof(contradiction_refutation.steps, f)
        L = simulate(f, pi)
        assert (L.s, L.t) == (2, 9)
        assert check_levelled(f, L).ok
        assert L.cell(2, 9) == frozenset()

    def test_empty_proof(self, contradiction):
        """Test an empty proof cannot be simulated"""
        with pytest.raises(InvalidProof):
            simulate(contradiction, ResolutionProof((), contradiction))

    def test_fat_clause(self, contradiction, contradiction_refutation):
        """Test a step mentioning every variable leaves no fresh variable"""
        with pytest.raises(FatClause, match="step 0"):
            simulate(contradiction, contradiction_refutation)

    def test_tautological_step(self):
        """Test tautological steps are refused"""
        f = Cnf(({1}, {-1}), 3)
        pi = ResolutionProof((
            ResStep(frozenset({1, 2, -2}), InputWeakening(0)),
            ResStep(frozenset({-1}), InputWeakening(1)),
            ResStep(frozenset(), Resolvent(0, 1, 1)),
        ), f)
        with pytest.raises(TautologicalStep):
            simulate(f, pi)

    def test_random_refutations(self):
        """Test shape and column invariants on 50 random unsatisfiable (n-1)-CNFs"""
        rng = np.random.default_rng(20240601)
        checked = 0
        while checked < 50:
            n = (2, 3, 4)[checked % 3]
            f = random_unsat_cnf(rng, n, n - 1)
            pi = saturation_refutation(f, n - 1)
            if pi is None:
                continue
            L = simulate(f, pi)
            heights = step_heights(pi)

            assert (L.s, L.t) == (height(pi), 3 * len(pi))
            assert check_levelled(f, L).ok
            for j, step in enumerate(pi.steps, start=1):
                for i in range(heights[j - 1], L.s + 1):
                    assert L.cell(i, 3 * j) == step.clause
            checked += 1


class TestWitness:
    """Test the correspondence between levelled refutations and models of REF^F"""

    def test_encode_satisfies(self, lab_formula, small_levelled):
        """Test an encoded refutation satisfies REF^F_{s,t}"""
        layout = VarLayout(2, 2, 2, 3)
        alpha = encode_witness(small_levelled, layout)
        assert set(alpha) == set(layout.ref_vars())
        assert eval_cnf(encode_ref_F(lab_formula, 2, 3, layout), alpha) is ClauseStatus.SATISFIED

    def test_decode_inverts_encode(self, lab_formula, small_levelled):
        """Test decoding gives back the same refutation"""
        layout = VarLayout(2, 2, 2, 3)
        alpha = encode_witness(small_levelled, layout)
        assert decode_witness(alpha, layout, lab_formula) == small_levelled

    def test_decode_rejects_non_model(self, lab_formula, small_levelled):
        """Test a falsifying assignment is reported with a falsified clause"""
        layout = VarLayout(2, 2, 2, 3)
        alpha = encode_witness(small_levelled, layout)
        alpha[layout.D(2, 3, 1, 1)] = 1
        with pytest.raises(NotSatisfying) as excinfo:
            decode_witness(alpha, layout, lab_formula)
        assert excinfo.value.clause is not None

    def test_tautological_cell(self, lab_formula, small_levelled):
        """Test tautological cells cannot be encoded"""
        small_levelled.cells[(2, 2)] = frozenset({2, -2})
        with pytest.raises(TautologicalCell):
            encode_witness(small_levelled, VarLayout(2, 2, 2, 3))

    @pytest.mark.parametrize("s, t", [(2, 1), (2, 2), (2, 3), (3, 2)])
    def test_contradiction_grid(self, s, t):
        """Test satisfiability of REF^F matches brute-force existence for {x1}, {¬x1}"""
        f = Cnf(({1}, {-1}), 1)
        model = solve(encode_ref_F(f, s, t))
        assert (model is not None) == levelled_exists(f, s, t)

    @pytest.mark.slow
    def test_small_formulas(self):
        """Test SAT of REF^F agrees with levelled existence and every model decodes"""
        for f in small_unsat_formulas():
            for s in (2, 3):
                for t in (1, 2, 3):
                    layout = VarLayout(f.num_vars, len(f.clauses), s, t)
                    ref = encode_ref_F(f, s, t, layout)
                    exists = levelled_exists(f, s, t)
                    assert (solve(ref) is not None) == exists, (f.clauses, s, t)
                    for model in enumerate_models(ref, 5):
                        assert check_levelled(f, decode_witness(model, layout, f)).ok


class TestLevelledText:
    """Test the levelled text format"""

    def test_roundtrip(self, small_levelled):
        """Test printing and parsing agree"""
        text = levelled_to_text(small_levelled)
        assert text.splitlines()[0] == "levelled 2 3"
        assert parse_levelled(text) == small_levelled

    def test_upper_justification_on_level_one(self):
        """Test an R justification on level 1 is rejected"""
        with pytest.raises(ParseError, match="does not fit"):
            parse_levelled("levelled 2 1\n1 1 1 0 R 1 1 1\n")

    def test_cell_outside_grid(self):
        """Test cells beyond the header's grid"""
        with pytest.raises(ParseError, match="outside"):
            parse_levelled("levelled 1 1\n2 1 0 R 1 1 1\n")

    def test_missing_header(self):
        """Test the header is required"""
        with pytest.raises(ParseError, match="header"):
            parse_levelled("1 1 1 0 I 1\n")
