import subprocess
import unittest
import sys
from pathlib import Path

import hypothesis.strategies as st
from hypothesis import given, settings

# Add project root to path for testing
sys.path.append(str(Path(__file__).parent.parent))
from src.exceptions import FormulaSyntaxError
from src.syntax import (
    BOT, TOP, And, Atom, Box, Dialect, Fc, Not, Or, Sequent, big_and, big_or, enumerate_formulas,
    formula_stats, implies, nabla, nabla_bar, nabla_defs, parse, parse_sequent, sequent_corpus, size,
    subformulas, to_text,
)


def formulas(fc: bool = True):
    leaves = st.one_of(st.integers(0, 2).map(Atom), st.just(TOP), st.just(BOT))
    binary = [And, Or] + ([Fc] if fc else [])

    def extend(children):
        return st.one_of(
            children.map(Not),
            children.map(Box),
            st.tuples(st.sampled_from(binary), children, children).map(lambda t: t[0](t[1], t[2])),
        )

    return st.recursive(leaves, extend, max_leaves=8)


class TestParsing(unittest.TestCase):
    """Parsing and printing of modal formulas"""

    def test_implication_expands_to_disjunction(self):
        """'->' is material implication built from ~ and \\/"""
        p0 = Atom(0)
        self.assertEqual(parse("[]p0 -> p0"), Or(Not(Box(p0)), p0))
        self.assertEqual(parse("p0 -> p1"), implies(p0, Atom(1)))

    def test_grammar_uses_current_pyparsing_api(self):
        """Importing the grammar raises no deprecation warning"""
        root = Path(__file__).parent.parent
        done = subprocess.run([sys.executable, "-W", "error::DeprecationWarning", "-c", "import src.syntax"],
                              cwd=root, capture_output=True, text=True)
        self.assertEqual(done.returncode, 0, done.stderr)

    def test_diamond_is_dual_of_box(self):
        """<> parses as ~[]~"""
        self.assertEqual(parse("<>p0"), Not(Box(Not(Atom(0)))))

    def test_constants(self):
        """T and F are the constants"""
        self.assertEqual(parse("T /\\ ~F"), And(TOP, Not(BOT)))

    def test_conjunction_is_left_nested(self):
        """/\\ associates to the left"""
        p0, p1, p2 = Atom(0), Atom(1), Atom(2)
        self.assertEqual(parse("p0 /\\ p1 /\\ p2"), And(And(p0, p1), p2))

    def test_fc_only_in_fc_dialect(self):
        """->> is rejected by the basic dialect"""
        with self.assertRaises(FormulaSyntaxError):
            parse("p0 ->> p1")
        self.assertEqual(parse("p0 ->> p1", Dialect.FC), Fc(Atom(0), Atom(1)))

    def test_syntax_error_carries_position(self):
        """Malformed input raises FormulaSyntaxError"""
        with self.assertRaises(FormulaSyntaxError):
            parse("p0 /\\")
        with self.assertRaises(FormulaSyntaxError):
            parse("q0")

    def test_printing(self):
        """Binary children get parentheses only where needed"""
        p0, p1, p2 = Atom(0), Atom(1), Atom(2)
        self.assertEqual(to_text(And(And(p0, p1), p2)), "p0 /\\ p1 /\\ p2")
        self.assertEqual(to_text(And(p0, And(p1, p2))), "p0 /\\ (p1 /\\ p2)")
        self.assertEqual(to_text(Box(Or(p0, Not(p1)))), "[](p0 \\/ ~p1)")

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_print_then_parse_is_identity(self, data):
        """Printed formulas parse back to themselves"""
        f = data.draw(formulas())
        self.assertEqual(parse(to_text(f), Dialect.FC), f)


class TestSequents(unittest.TestCase):
    """Sequent parsing and corpora"""

    def test_parse_sequent(self):
        """Both sides are comma separated; either may be empty"""
        seq = parse_sequent("p0, ~p1 => []p0")
        self.assertEqual(seq.ant, frozenset([Atom(0), Not(Atom(1))]))
        self.assertEqual(seq.suc, frozenset([Box(Atom(0))]))
        self.assertEqual(parse_sequent("=> p0"), Sequent.of([], [Atom(0)]))

    def test_sequent_needs_arrow(self):
        """A sequent has exactly one '=>'"""
        with self.assertRaises(FormulaSyntaxError):
            parse_sequent("p0, p1")

    def test_sequent_props(self):
        """Atoms of the whole sequent and of the antecedent alone"""
        seq = parse_sequent("p0 => p1 \\/ p2")
        self.assertEqual(seq.props(), frozenset([0, 1, 2]))
        self.assertEqual(seq.ant_props(), frozenset([0]))

    def test_corpus_size(self):
        """Every pair of sides of at most one formula over p0, T, F"""
        corpus = sequent_corpus([0], 1, 1, box=False)
        self.assertEqual(len(corpus), 16)
        self.assertIn(Sequent.of([Atom(0)], [Atom(0)]), corpus)


class TestMeasures(unittest.TestCase):
    """Structural measures and enumeration"""

    def test_formula_stats(self):
        """Prop set, modal depth and positive complexity"""
        stats = formula_stats(parse("[]([]p0 /\\ ~p1)"))
        self.assertEqual(stats.prop_set, frozenset([0, 1]))
        self.assertEqual(stats.modal_depth, 2)
        self.assertEqual(stats.positive_complexity, 3)

    def test_size(self):
        self.assertEqual(size(parse("~p0 /\\ []p1")), 5)

    def test_subformulas_children_first(self):
        """Each subformula once, before the formulas containing it"""
        p0 = Atom(0)
        self.assertEqual(subformulas(And(p0, Not(p0))), [p0, Not(p0), And(p0, Not(p0))])

    def test_enumeration_counts(self):
        """Formulas up to a size bound"""
        self.assertEqual(len(enumerate_formulas([0], 2)), 9)
        self.assertEqual(len(enumerate_formulas([0], 2, box=False)), 6)
        self.assertEqual(enumerate_formulas([0], 2, constants=False), [Atom(0), Not(Atom(0)), Box(Atom(0))])
        self.assertEqual(len(enumerate_formulas([0], 3, constants=False, box=False)), 5)

    def test_empty_big_connectives(self):
        """Empty conjunction is T and empty disjunction is F"""
        self.assertEqual(big_and([]), TOP)
        self.assertEqual(big_or([]), BOT)

    def test_nabla(self):
        """nabla is the negation of being settled at the successor"""
        p0 = Atom(0)
        self.assertEqual(nabla_bar(p0), Or(Box(p0), Box(Not(p0))))
        self.assertEqual(nabla(p0), Not(nabla_bar(p0)))
        self.assertEqual(nabla_defs("nabla-bar-pair", p0, Atom(1)), And(nabla_bar(p0), nabla_bar(Atom(1))))
        with self.assertRaises(ValueError):
            nabla_defs("delta", p0)


if __name__ == '__main__':
    unittest.main()
