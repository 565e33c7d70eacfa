import unittest
import sys
from pathlib import Path

# Add project root to path for testing
sys.path.append(str(Path(__file__).parent.parent))
from src.exceptions import RealizationError
from src.kftruth import SentenceUniverse
from src.manyvalued import Scheme, TruthValue, ValuationClass
from src.mixed import single_rooted
from src.realizations import (
    circ_realization, load_realization, seed_from_model, translate, verify_bridge, witness_realization,
)
from src.syntax import parse

N, B, ZERO, ONE = TruthValue.N, TruthValue.B, TruthValue.ZERO, TruthValue.ONE


class TestTranslation(unittest.TestCase):
    """Realizations and the structural translation"""

    def test_witness_realization(self):
        """p0 becomes t0 /\\ ~t1"""
        u = SentenceUniverse()
        star = witness_realization(u, [0])
        self.assertEqual(star.of(0), 4)
        self.assertEqual(u.form(4), "(T(0) and not T(2))")
        self.assertEqual(star.to_dict(), {"p0": "(T(0) and not T(2))"})

    def test_box_becomes_truth_predicate(self):
        u = SentenceUniverse()
        star = witness_realization(u, [0])
        sid = translate(star, parse("[]p0"))
        self.assertEqual(sid, 6)
        self.assertEqual(u.form(sid), "T(4)")

    def test_uncovered_atom(self):
        star = witness_realization(SentenceUniverse(), [0])
        with self.assertRaises(RealizationError):
            translate(star, parse("p1"))

    def test_seed_from_model(self):
        """w and z both true: t0 in, t1 out"""
        u = SentenceUniverse()
        m = single_rooted({0: ONE}, {0: ONE})
        self.assertEqual(seed_from_model(m, u, Scheme.FDE), frozenset([0, 3]))

    def test_seed_from_model_rejects_weak_schemes(self):
        """b3 and f3 have no truth-teller clauses, so no seed is read off"""
        m = single_rooted({0: ONE}, {0: N}, ValuationClass.CONSISTENT)
        for scheme in (Scheme.B3, Scheme.F3):
            with self.subTest(scheme=scheme.value):
                with self.assertRaises(RealizationError):
                    seed_from_model(m, SentenceUniverse(), scheme)
        self.assertEqual(seed_from_model(m, SentenceUniverse(), Scheme.K3), frozenset([0]))

    def test_witness_bridge_rejects_weak_schemes(self):
        with self.assertRaises(RealizationError):
            verify_bridge(single_rooted({0: ONE}, {0: ONE}), parse("p0"), "witness", Scheme.B3)

    def test_circ(self):
        """A gap at z becomes the liar or its negation depending on w"""
        m = single_rooted({0: ONE}, {0: N}, ValuationClass.CONSISTENT)
        self.assertEqual(circ_realization(m, "circ").to_dict(), {"p0": "not T(0)"})
        m = single_rooted({0: ZERO, 1: ONE}, {0: N, 1: ONE}, ValuationClass.CONSISTENT)
        self.assertEqual(circ_realization(m, "circ").to_dict(), {"p0": "not not T(0)", "p1": "0=0"})

    def test_circ_rejects_gluts(self):
        with self.assertRaises(RealizationError):
            circ_realization(single_rooted({0: ONE}, {0: B}), "circ")

    def test_dagger_rejects_gaps(self):
        with self.assertRaises(RealizationError):
            circ_realization(single_rooted({0: ONE}, {0: N}), "dagger")

    def test_load_realization(self):
        """User sentences are interned in the same universe"""
        u = SentenceUniverse()
        witness = witness_realization(u, [0])
        star = load_realization(u, {"p0": "t0 /\\ ~t1"})
        self.assertEqual(star.of(0), witness.of(0))
        self.assertEqual(load_realization(u, {"p1": "lam \\/ 0=1"}).to_dict(),
                         {"p1": "(not T(6) or 0=1)"})

    def test_load_realization_errors(self):
        u = SentenceUniverse()
        with self.assertRaises(RealizationError):
            load_realization(u, {"p0": "T(3)"})
        with self.assertRaises(RealizationError):
            load_realization(u, {"q0": "t0"})
        with self.assertRaises(RealizationError):
            load_realization(u, {"p0": "t0 /\\"})


class TestBridges(unittest.TestCase):
    """Agreement between mixed models and fixed points"""

    def test_witness_bridge_on_faithful_models(self):
        f = parse("[]p0 /\\ ~p0 \\/ []~p0")
        for w, z in [(ONE, ONE), (ZERO, ZERO), (ONE, N), (ZERO, N), (ONE, B), (ZERO, B)]:
            with self.subTest(w=w.value, z=z.value):
                report = verify_bridge(single_rooted({0: w}, {0: z}), f)
                self.assertTrue(report.passed, report.to_dict())

    def test_witness_bridge_needs_faithfulness(self):
        """z says 1 while w says 0: the translation of ~p0 lands in S though z rejects ~p0"""
        report = verify_bridge(single_rooted({0: ZERO}, {0: ONE}), parse("~p0"))
        self.assertFalse(report.passed)

    def test_circ_bridge(self):
        m = single_rooted({0: ONE, 1: ZERO}, {0: N, 1: ZERO}, ValuationClass.CONSISTENT)
        report = verify_bridge(m, parse("[](p0 \\/ ~p1) /\\ ~[]p0"), "circ")
        self.assertTrue(report.passed, report.to_dict())
        self.assertTrue(report.fixed_point.consistent)

    def test_dagger_bridge(self):
        """The printed dagger table breaks on a true atom"""
        m = single_rooted({0: ONE}, {0: ONE}, ValuationClass.COMPLETE)
        self.assertTrue(verify_bridge(m, parse("[]p0"), "dagger").passed)
        printed = verify_bridge(m, parse("[]p0"), "dagger-printed")
        self.assertFalse(printed.passed)
        self.assertEqual(printed.to_dict()["jump"], "sk")

    def test_custom_realization(self):
        u = SentenceUniverse()
        star = load_realization(u, {"p0": "0=0"})
        report = verify_bridge(single_rooted({0: ONE}, {0: ONE}), parse("[]p0"), "custom", star=star)
        self.assertTrue(report.passed)
        self.assertEqual(report.mode, "custom")

    def test_model_must_cover_formula(self):
        with self.assertRaises(RealizationError):
            verify_bridge(single_rooted({0: ONE}, {0: ONE}), parse("p0 /\\ p1"))


if __name__ == '__main__':
    unittest.main()
