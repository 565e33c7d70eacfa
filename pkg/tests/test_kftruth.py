import unittest
import sys
from pathlib import Path

import hypothesis.strategies as st
from hypothesis import given, settings

# Add project root to path for testing
sys.path.append(str(Path(__file__).parent.parent))
from src.exceptions import NotAFixedPoint, UniverseError
from src.kftruth import (
    Jump, Kind, SentenceUniverse, TSentence, classical_sat, enumerate_fixed_points, jump, lfp, liar_seed,
    liar_universe, parse_seed, truth_teller_universe,
)


def compound_universe(fc: bool = False) -> SentenceUniverse:
    """Two truth-tellers, the liar, and coded compounds over them"""
    u = truth_teller_universe(2)
    u.liar()
    u.tr(u.disj(0, 2))
    u.tr(u.neg(u.conj(0, u.negation_of(2))))
    if fc:
        u.tr(u.fc(0, 2))
    return u


class TestSentenceUniverse(unittest.TestCase):
    """Interning, self-reference and closure"""

    def test_liar(self):
        """The liar sits at id 0 and says 'not T(0)'"""
        u = liar_universe()
        self.assertEqual(len(u), 3)
        self.assertEqual(u.form(0), "not T(0)")
        self.assertEqual(u.form(1), "T(0)")
        self.assertEqual(u.label(0), "lam")

    def test_truth_tellers_come_with_negations(self):
        u = truth_teller_universe(2)
        self.assertEqual(u.truth_tellers, {0: 0, 1: 2})
        self.assertEqual(u.negation_of(0), 1)
        self.assertEqual(u.negation_of(2), 3)
        self.assertEqual(u.label(3), "~t1")

    def test_interning(self):
        """Equal sentences share an id"""
        u = truth_teller_universe(1)
        self.assertEqual(u.conj(0, 1), u.conj(0, 1))
        self.assertEqual(u.truth_teller(0), 0)

    def test_unknown_reference(self):
        u = SentenceUniverse()
        with self.assertRaises(UniverseError):
            u.neg(5)
        with self.assertRaises(UniverseError):
            u.form(0)

    def test_parse_seed(self):
        u = truth_teller_universe(2)
        self.assertEqual(parse_seed(u, "+t0,-t1"), frozenset([0, 3]))
        self.assertEqual(parse_seed(u, ""), frozenset())
        with self.assertRaises(UniverseError):
            parse_seed(u, "+x")


class TestFixedPoints(unittest.TestCase):
    """Least fixed points of the jumps"""

    def test_liar_least_fixed_point_is_empty(self):
        for tag in Jump:
            with self.subTest(jump=tag.value):
                fp = lfp(liar_universe(), tag)
                self.assertEqual(fp.members, frozenset())
                self.assertTrue(fp.consistent)
                self.assertFalse(fp.complete_over_universe)
                self.assertTrue(classical_sat(fp, 0))

    def test_glutty_liar(self):
        """With the liar cluster seeded, T(lam) holds and lam is classically false"""
        u = liar_universe()
        fp = lfp(u, Jump.SK, liar_seed(u, "glut"))
        self.assertIn(1, fp)
        self.assertTrue(classical_sat(fp, 1))
        self.assertFalse(classical_sat(fp, 0))

    def test_liar_fixed_points(self):
        """The empty one and the glutty one"""
        points = enumerate_fixed_points(liar_universe(), Jump.SK)
        self.assertEqual([fp.members for fp in points], [frozenset(), frozenset([0, 1, 2])])
        self.assertFalse(points[1].consistent)

    def test_truth_teller_seed(self):
        u = truth_teller_universe(2)
        fp = lfp(u, Jump.SK, parse_seed(u, "+t0"))
        self.assertEqual(fp.members, frozenset([0]))
        self.assertEqual(fp.to_dict()["S"], [0])

    def test_inconsistent_seed(self):
        u = truth_teller_universe(1)
        fp = lfp(u, Jump.SK, parse_seed(u, "+t0,-t0"))
        self.assertFalse(fp.consistent)

    def test_unsupported_seed(self):
        """0=1 is never in a jump"""
        u = SentenceUniverse()
        with self.assertRaises(NotAFixedPoint):
            lfp(u, Jump.SK, [u.falsum()])

    def test_guarded_disjunction(self):
        """wk needs both disjuncts determined"""
        u = truth_teller_universe(2)
        d = u.disj(0, 2)
        self.assertIn(d, lfp(u, Jump.SK, [0]))
        self.assertNotIn(d, lfp(u, Jump.WK, [0]))
        self.assertIn(d, lfp(u, Jump.WK, [0, 2]))

    def test_fc_needs_af(self):
        u = truth_teller_universe(2)
        f = u.fc(0, 2)
        self.assertIn(f, lfp(u, Jump.AF, [u.negation_of(0)]))
        with self.assertRaises(UniverseError):
            jump(u, Jump.SK, [])

    def test_liar_seeds(self):
        u = liar_universe()
        self.assertEqual(liar_seed(u, "gap"), frozenset())
        self.assertEqual(liar_seed(u, "glut"), frozenset([0, 2]))
        with self.assertRaises(ValueError):
            liar_seed(u, "both")

    def test_classical_satisfaction(self):
        """The liar is classically true in the empty fixed point"""
        fp = lfp(liar_universe(), Jump.SK)
        self.assertTrue(classical_sat(fp, 0))
        self.assertFalse(classical_sat(fp, 1))


class TestJumpProperties(unittest.TestCase):
    """Monotonicity, transparency and the disjunction normal form"""

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_jumps_are_monotone(self, data):
        """S below S' gives jump(S) below jump(S') for sk, wk and af"""
        tag = data.draw(st.sampled_from(list(Jump)))
        u = compound_universe(fc=tag is Jump.AF)
        ids = st.sets(st.sampled_from(range(len(u))))
        smaller = frozenset(data.draw(ids))
        larger = smaller | data.draw(ids)
        self.assertLessEqual(jump(u, tag, smaller), jump(u, tag, larger))

    def test_fixed_points_are_transparent(self):
        """phi is in a fixed point exactly when T(phi) is"""
        for tag in Jump:
            u = compound_universe(fc=tag is Jump.AF)
            coded = [(s.args[0], sid) for sid, s in enumerate(u.table) if s.kind is Kind.TR]
            for fp in enumerate_fixed_points(u, tag):
                for sid, tr_id in coded:
                    with self.subTest(jump=tag.value, sentence=u.form(sid), S=sorted(fp.members)):
                        self.assertEqual(sid in fp, tr_id in fp)

    def test_negated_conjunction_separates_sk_from_wk(self):
        """~(t0 /\\ t1) with t0 false: sk settles it, wk waits for t1"""
        u = truth_teller_universe(2)
        n = u.neg(u.conj(0, 2))
        self.assertIn(n, lfp(u, Jump.SK, [1]))
        self.assertNotIn(n, lfp(u, Jump.WK, [1]))
        self.assertNotIn(n, lfp(u, Jump.AF, [1]))
        self.assertIn(n, lfp(u, Jump.WK, [1, 2]))

    def test_disjunction_is_jumped_through_normal_form(self):
        """The closure brings in ~t0 /\\ ~t1 for t0 \\/ t1"""
        u = truth_teller_universe(2)
        u.disj(0, 2)
        self.assertIn(TSentence(Kind.CONJ, (1, 3)), u.index)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_disjunction_matches_normal_form(self, data):
        """b \\/ c and ~(~b /\\ ~c) enter every jump together, and so do their negations"""
        u = truth_teller_universe(2)
        d = u.disj(0, 2)
        e = u.neg(u.conj(u.neg(0), u.neg(2)))
        not_d, not_e = u.neg(d), u.neg(e)
        tag = data.draw(st.sampled_from(list(Jump)))
        s = frozenset(data.draw(st.sets(st.sampled_from(range(len(u))))))
        image = jump(u, tag, s)
        self.assertEqual(d in image, e in image)
        self.assertEqual(not_d in image, not_e in image)


if __name__ == '__main__':
    unittest.main()
