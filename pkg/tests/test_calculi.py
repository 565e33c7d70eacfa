import unittest
import sys
from pathlib import Path

import numpy as np
import hypothesis.strategies as st
from hypothesis import given, settings

# Add project root to path for testing
sys.path.append(str(Path(__file__).parent.parent))
from src.calculi import CalculusId, Derivation, ModalKind, check_derivation, sample_derivation, weaken
from src.exceptions import BudgetExceeded, InvalidModel, UnknownLogic
from src.manyvalued import PlainModel, Scheme, TruthValue, internal_consequence
from src.proof_search import RefutationResult, _confirm, blackbox_refute, crosscheck_adequacy, prove
from src.syntax import Atom, Not, parse_sequent, sequent_corpus


def _seq(ant, suc):
    return {"ant": ant, "suc": suc}


EXPLOSION = {
    "sequent": _seq(["p0", "~p0"], []), "rule": "neg-l", "principal": ["~p0"],
    "children": [{"sequent": _seq(["p0"], ["p0"]), "rule": "ref", "principal": ["p0"], "children": []}],
}


class TestCalculusIds(unittest.TestCase):
    """Calculus names"""

    def test_parse_and_print(self):
        self.assertEqual(str(CalculusId.parse("K3")), "K3")
        self.assertEqual(str(CalculusId.parse("k3_box")), "K3_box")
        self.assertIs(CalculusId.parse("FDE_bbox").modal, ModalKind.BLACKBOX)

    def test_unknown_calculus(self):
        with self.assertRaises(UnknownLogic):
            CalculusId.parse("S4")
        with self.assertRaises(UnknownLogic):
            CalculusId.parse("K3_diamond")


class TestDerivationChecker(unittest.TestCase):
    """Validation of derivation trees"""

    def test_explosion_in_k3(self):
        """neg-l closes p0, ~p0 => in K3"""
        result = check_derivation(CalculusId.parse("K3"), Derivation.from_dict(EXPLOSION))
        self.assertTrue(result.valid)

    def test_explosion_not_in_fde(self):
        """FDE has no neg-l"""
        result = check_derivation(CalculusId.parse("FDE"), Derivation.from_dict(EXPLOSION))
        self.assertFalse(result.valid)
        self.assertEqual(result.reason, "rule neg-l is not available in FDE")
        self.assertEqual(result.path, ())
        self.assertEqual(result.to_dict()["path"], [])

    def test_leftmost_innermost_error(self):
        """The first bad child is reported, not the root"""
        bad = {"sequent": _seq([], ["p0"]), "rule": "ref", "principal": ["p0"], "children": []}
        d = {
            "sequent": _seq([], ["p0 /\\ p1"]), "rule": "and-r", "principal": ["p0 /\\ p1"],
            "children": [bad, dict(bad, sequent=_seq([], ["p1"]), principal=["p1"])],
        }
        result = check_derivation(CalculusId.parse("K3"), Derivation.from_dict(d))
        self.assertFalse(result.valid)
        self.assertEqual(result.path, (0,))

    def test_excluded_middle_in_lp(self):
        d = {
            "sequent": _seq([], ["p0", "~p0"]), "rule": "neg-r", "principal": ["~p0"],
            "children": [{"sequent": _seq(["p0"], ["p0"]), "rule": "ref", "principal": ["p0"], "children": []}],
        }
        self.assertTrue(check_derivation(CalculusId.parse("LP"), Derivation.from_dict(d)).valid)

    def test_weak_disjunction_side_condition(self):
        """B3 or-r needs every atom of the disjunction in the antecedent"""
        def derivation(ant):
            return {
                "sequent": _seq(ant, ["p0 \\/ p1"]), "rule": "or-r", "principal": ["p0 \\/ p1"],
                "children": [{"sequent": _seq(ant, ["p0"]), "rule": "ref", "principal": ["p0"],
                              "children": []}],
            }
        b3 = CalculusId.parse("B3")
        self.assertTrue(check_derivation(b3, Derivation.from_dict(derivation(["p0", "p1"]))).valid)
        result = check_derivation(b3, Derivation.from_dict(derivation(["p0"])))
        self.assertFalse(result.valid)
        self.assertTrue(result.reason.startswith("side condition fails"))


class TestProofSearch(unittest.TestCase):
    """Cut-free search"""

    def assertDerives(self, calculus, sequent):
        calc = CalculusId.parse(calculus)
        result = prove(calc, parse_sequent(sequent, calc.dialect))
        self.assertEqual(result.status, "derivation", f"{calculus}: {sequent}")
        self.assertTrue(check_derivation(calc, result.derivation).valid)
        return result

    def test_derivable(self):
        self.assertDerives("K3", "p0, ~p0 =>")
        self.assertDerives("K3_box", "[]p0 => p0")
        self.assertDerives("LP", "=> p0 \\/ ~p0")

    def test_blackbox_step(self):
        """Monotonicity of [] under conjunction uses bbox-r"""
        result = self.assertDerives("K3_bbox", "[](p0 /\\ p1) => []p0")
        self.assertEqual(result.derivation.rule, "bbox-r")

    def test_saturated(self):
        self.assertEqual(prove(CalculusId.parse("FDE"), parse_sequent("p0, ~p0 =>")).status, "saturated")
        self.assertEqual(prove(CalculusId.parse("B3"), parse_sequent("=> p0 \\/ ~p0")).status, "saturated")

    def test_blackbox_refutation(self):
        """[]p0 => p0 fails on a world with no successors"""
        calc = CalculusId.parse("K3_bbox")
        seq = parse_sequent("[]p0 => p0")
        self.assertEqual(prove(calc, seq).status, "saturated")
        refutation = blackbox_refute(calc, seq, 1)
        self.assertTrue(refutation.found)
        self.assertTrue(refutation.to_dict()["found"])

    def test_refutation_model_is_confirmed(self):
        """A reconstructed model that makes the antecedent false is rejected"""
        seq = parse_sequent("p0 =>")
        model = PlainModel(("u0",), frozenset(), {"u0": {0: TruthValue.ZERO}})
        result = RefutationResult(CalculusId.parse("K3_bbox"), seq, 1, model=model, root="u0")
        with self.assertRaises(InvalidModel):
            _confirm(result, Scheme.K3)
        result.model = PlainModel(("u0",), frozenset(), {"u0": {0: TruthValue.ONE}})
        _confirm(result, Scheme.K3)

    def test_budget(self):
        with self.assertRaises(BudgetExceeded):
            prove(CalculusId.parse("K3"), parse_sequent("p0 /\\ p1 => p1 /\\ p0"), 1)

    def test_crosscheck(self):
        """Search and semantics agree on every small K3 sequent"""
        corpus = sequent_corpus([0], 1, 1, box=False)
        report = crosscheck_adequacy(CalculusId.parse("K3"), corpus)
        self.assertTrue(report.passed)
        self.assertEqual(len(report.both_yes) + len(report.both_no) + len(report.incomplete), 16)
        self.assertEqual(int(report.summary()["count"].sum()), 16)


class TestMetatheory(unittest.TestCase):
    """Weakening and soundness over sampled derivations"""

    def test_weakening_preserves_validity(self):
        calc = CalculusId.parse("K3")
        d = Derivation.from_dict(EXPLOSION)
        weakened = weaken(d, [Atom(1)], [Not(Atom(1))])
        self.assertTrue(check_derivation(calc, weakened).valid)
        self.assertEqual(weakened.length(), d.length())
        self.assertIn(Atom(1), weakened.children[0].sequent.ant)

    @settings(max_examples=25, deadline=None)
    @given(st.data())
    def test_sampled_derivations_are_sound(self, data):
        """Every sampled derivation checks and its root is valid"""
        base = data.draw(st.sampled_from(["FDE", "K3", "LP", "KS3", "B3", "F3"]))
        modal = data.draw(st.sampled_from(["", "_box"]))
        seed = data.draw(st.integers(0, 2 ** 16))
        calc = CalculusId.parse(base + modal)
        d = sample_derivation(calc, np.random.default_rng(seed), 3)
        self.assertTrue(check_derivation(calc, d).valid, d.to_dict())
        self.assertTrue(internal_consequence(d.sequent.ant, d.sequent.suc, calc.base.scheme).holds)


if __name__ == '__main__':
    unittest.main()
