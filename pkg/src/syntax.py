"""Modal formulas and sequents: representation, parsing, printing, measures.

Formulas are immutable values over indexed atoms p0, p1, ...  The AST only
stores primitive connectives; ``->``, ``<->`` and ``<>`` are expanded by the
parser.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import combinations, product
from typing import FrozenSet, Iterable, Iterator, List, Tuple, Union

import pyparsing as pp

from .exceptions import FormulaSyntaxError

logger = logging.getLogger(__name__)

pp.ParserElement.enable_packrat()


class Dialect(str, Enum):
    BASIC = "basic"
    FC = "fc"


@dataclass(frozen=True)
class Atom:
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"atom index must be non-negative, got {self.index}")


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class Box:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Fc:
    """The primitive conditional ->> of the fc dialect"""
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Top, Bot, Not, Box, And, Or, Fc]

TOP = Top()
BOT = Bot()
BINARY = (And, Or, Fc)


def atom(j: int) -> Atom:
    return Atom(j)


def implies(a: Formula, b: Formula) -> Formula:
    """Material implication, ~a \\/ b"""
    return Or(Not(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def diamond(a: Formula) -> Formula:
    return Not(Box(Not(a)))


def big_and(items: Iterable[Formula]) -> Formula:
    """Left-nested conjunction in canonical order; the empty conjunction is T"""
    ordered = sort_formulas(items)
    if not ordered:
        return TOP
    result = ordered[0]
    for f in ordered[1:]:
        result = And(result, f)
    return result


def big_or(items: Iterable[Formula]) -> Formula:
    """Left-nested disjunction in canonical order; the empty disjunction is F"""
    ordered = sort_formulas(items)
    if not ordered:
        return BOT
    result = ordered[0]
    for f in ordered[1:]:
        result = Or(result, f)
    return result


# Nabla abbreviations

def nabla_bar(f: Formula) -> Formula:
    """[]f \\/ []~f: f is settled at the successor"""
    return Or(Box(f), Box(Not(f)))


def nabla(f: Formula) -> Formula:
    return Not(nabla_bar(f))


def nabla_bar_pair(f: Formula, g: Formula) -> Formula:
    return And(nabla_bar(f), nabla_bar(g))


def nabla_defs(kind: str, *args: Formula) -> Formula:
    """Expand a nabla abbreviation ('nabla-bar', 'nabla', 'nabla-bar-pair') into primitives"""
    expanders = {
        "nabla-bar": (1, nabla_bar),
        "nabla": (1, nabla),
        "nabla-bar-pair": (2, nabla_bar_pair),
    }
    if kind not in expanders:
        raise ValueError(f"unknown nabla abbreviation: {kind}")
    arity, expand = expanders[kind]
    if len(args) != arity:
        raise ValueError(f"{kind} takes {arity} formula(s), got {len(args)}")
    return expand(*args)


# Structural measures

@dataclass(frozen=True)
class FormulaStats:
    prop_set: FrozenSet[int]
    modal_depth: int
    positive_complexity: int


@lru_cache(maxsize=None)
def prop_set(f: Formula) -> FrozenSet[int]:
    if isinstance(f, Atom):
        return frozenset([f.index])
    if isinstance(f, (Top, Bot)):
        return frozenset()
    if isinstance(f, (Not, Box)):
        return prop_set(f.sub)
    return prop_set(f.left) | prop_set(f.right)


@lru_cache(maxsize=None)
def modal_depth(f: Formula) -> int:
    if isinstance(f, Box):
        return modal_depth(f.sub) + 1
    if isinstance(f, Not):
        return modal_depth(f.sub)
    if isinstance(f, BINARY):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 0


def is_literal(f: Formula) -> bool:
    return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.sub, Atom))


@lru_cache(maxsize=None)
def positive_complexity(f: Formula) -> int:
    """Complexity that counts literals and constants as zero"""
    if is_literal(f) or isinstance(f, (Top, Bot)):
        return 0
    if isinstance(f, Not):
        inner = f.sub
        if isinstance(inner, (Top, Bot)):
            return 1
        if isinstance(inner, (Not, Box)):
            return positive_complexity(inner.sub) + 1
        return max(positive_complexity(inner.left), positive_complexity(inner.right)) + 1
    if isinstance(f, Box):
        return positive_complexity(f.sub) + 1
    return max(positive_complexity(f.left), positive_complexity(f.right)) + 1


def formula_stats(f: Formula) -> FormulaStats:
    return FormulaStats(prop_set(f), modal_depth(f), positive_complexity(f))


def size(f: Formula) -> int:
    if isinstance(f, (Atom, Top, Bot)):
        return 1
    if isinstance(f, (Not, Box)):
        return size(f.sub) + 1
    return size(f.left) + size(f.right) + 1


def is_box_free(f: Formula) -> bool:
    return modal_depth(f) == 0


@lru_cache(maxsize=None)
def has_fc(f: Formula) -> bool:
    if isinstance(f, Fc):
        return True
    if isinstance(f, (Not, Box)):
        return has_fc(f.sub)
    if isinstance(f, (And, Or)):
        return has_fc(f.left) or has_fc(f.right)
    return False


def subformulas(f: Formula) -> List[Formula]:
    """All subformulas, each once, children before parents"""
    seen = {}

    def walk(g: Formula):
        if isinstance(g, (Not, Box)):
            walk(g.sub)
        elif isinstance(g, BINARY):
            walk(g.left)
            walk(g.right)
        seen.setdefault(g, None)

    walk(f)
    return list(seen)


# Printing

_BINARY_SYMBOL = {And: "/\\", Or: "\\/", Fc: "->>"}
# ->> binds loosest among the printed connectives
_PRECEDENCE = {And: 3, Or: 2, Fc: 1}


def _needs_parens(child: Formula, parent_type: type, is_left: bool) -> bool:
    if not isinstance(child, BINARY):
        return False
    child_prec = _PRECEDENCE[type(child)]
    parent_prec = _PRECEDENCE[parent_type]
    if child_prec != parent_prec:
        return child_prec < parent_prec
    if parent_type is Fc:
        return is_left
    return not is_left


@lru_cache(maxsize=None)
def to_text(f: Formula) -> str:
    """Print a formula in the ASCII grammar; parse(to_text(f)) == f"""
    if isinstance(f, Atom):
        return f"p{f.index}"
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bot):
        return "F"
    if isinstance(f, (Not, Box)):
        prefix = "~" if isinstance(f, Not) else "[]"
        inner = to_text(f.sub)
        if isinstance(f.sub, BINARY):
            inner = f"({inner})"
        return prefix + inner
    left = to_text(f.left)
    right = to_text(f.right)
    if _needs_parens(f.left, type(f), True):
        left = f"({left})"
    if _needs_parens(f.right, type(f), False):
        right = f"({right})"
    return f"{left} {_BINARY_SYMBOL[type(f)]} {right}"


def sort_formulas(items: Iterable[Formula]) -> List[Formula]:
    """Duplicate-free list in canonical (size, text) order"""
    return sorted(set(items), key=lambda g: (size(g), to_text(g)))


# Parsing

def _fold_unary(tokens):
    items = list(tokens[0])
    result = items[-1]
    for op in reversed(items[:-1]):
        if op == "~":
            result = Not(result)
        elif op == "[]":
            result = Box(result)
        else:
            result = diamond(result)
    return result


def _fold_left(builder):
    def action(tokens):
        items = list(tokens[0])
        result = items[0]
        for i in range(2, len(items), 2):
            result = builder(result, items[i])
        return result
    return action


def _fold_right(builder):
    def action(tokens):
        items = list(tokens[0])
        result = items[-1]
        for i in range(len(items) - 3, -1, -2):
            result = builder(items[i], result)
        return result
    return action


@lru_cache(maxsize=None)
def _grammar(dialect: Dialect) -> pp.ParserElement:
    atom_expr = pp.Regex(r"p\d+").set_parse_action(lambda t: Atom(int(t[0][1:])))
    top_expr = pp.Keyword("T").set_parse_action(lambda t: TOP)
    bot_expr = pp.Keyword("F").set_parse_action(lambda t: BOT)
    operand = atom_expr | top_expr | bot_expr

    unary = pp.Literal("~") | pp.Literal("[]") | pp.Literal("<>")
    levels = [
        (unary, 1, pp.OpAssoc.RIGHT, _fold_unary),
        (pp.Literal("/\\"), 2, pp.OpAssoc.LEFT, _fold_left(And)),
        (pp.Literal("\\/"), 2, pp.OpAssoc.LEFT, _fold_left(Or)),
        (pp.Regex(r"->(?!>)"), 2, pp.OpAssoc.RIGHT, _fold_right(implies)),
    ]
    if dialect is Dialect.FC:
        levels.append((pp.Literal("->>"), 2, pp.OpAssoc.RIGHT, _fold_right(Fc)))
    levels.append((pp.Literal("<->"), 2, pp.OpAssoc.LEFT, _fold_left(iff)))
    return pp.infix_notation(operand, levels)


def parse(text: str, dialect: Union[str, Dialect] = Dialect.BASIC) -> Formula:
    """Parse ASCII formula text into a Formula"""
    dialect = Dialect(dialect)
    if dialect is Dialect.BASIC and "->>" in text:
        raise FormulaSyntaxError("'->>' is only available in the fc dialect", text.index("->>"))
    try:
        result = _grammar(dialect).parse_string(text, parse_all=True)
    except pp.ParseException as e:
        raise FormulaSyntaxError(f"cannot parse {text!r}: {e.msg}", e.loc) from None
    return result[0]


def parse_sequent(text: str, dialect: Union[str, Dialect] = Dialect.BASIC) -> "Sequent":
    """Parse 'A, B => C, D'; either side may be empty"""
    if text.count("=>") != 1:
        raise FormulaSyntaxError(f"a sequent needs exactly one '=>': {text!r}")
    left, right = text.split("=>")

    def side(part: str) -> List[Formula]:
        return [parse(piece, dialect) for piece in part.split(",") if piece.strip()]

    return Sequent.of(side(left), side(right))


# Sequents

@dataclass(frozen=True)
class Sequent:
    ant: FrozenSet[Formula]
    suc: FrozenSet[Formula]

    @classmethod
    def of(cls, ant: Iterable[Formula] = (), suc: Iterable[Formula] = ()) -> "Sequent":
        return cls(frozenset(ant), frozenset(suc))

    def formulas(self) -> FrozenSet[Formula]:
        return self.ant | self.suc

    def add(self, ant: Iterable[Formula] = (), suc: Iterable[Formula] = ()) -> "Sequent":
        return Sequent(self.ant | frozenset(ant), self.suc | frozenset(suc))

    def includes(self, other: "Sequent") -> bool:
        return other.ant <= self.ant and other.suc <= self.suc

    def props(self) -> FrozenSet[int]:
        result = frozenset()
        for f in self.formulas():
            result |= prop_set(f)
        return result

    def ant_props(self) -> FrozenSet[int]:
        result = frozenset()
        for f in self.ant:
            result |= prop_set(f)
        return result

    def __str__(self) -> str:
        left = ", ".join(to_text(f) for f in sort_formulas(self.ant))
        right = ", ".join(to_text(f) for f in sort_formulas(self.suc))
        return f"{left} => {right}".strip()

    def to_dict(self) -> dict:
        return {
            "ant": [to_text(f) for f in sort_formulas(self.ant)],
            "suc": [to_text(f) for f in sort_formulas(self.suc)],
        }


# Enumeration

def enumerate_formulas(atoms: Iterable[int], max_size: int, *, fc: bool = False,
                       constants: bool = True, box: bool = True) -> List[Formula]:
    """All formulas over the given atoms with at most max_size nodes, in canonical order"""
    by_size = {1: [Atom(j) for j in sorted(set(atoms))]}
    if constants:
        by_size[1] += [TOP, BOT]
    for n in range(2, max_size + 1):
        layer = [Not(g) for g in by_size[n - 1]]
        if box:
            layer += [Box(g) for g in by_size[n - 1]]
        builders = [And, Or] + ([Fc] if fc else [])
        for k in range(1, n - 1):
            for left, right in product(by_size[k], by_size[n - 1 - k]):
                layer += [build(left, right) for build in builders]
        by_size[n] = layer
    return [f for n in sorted(by_size) for f in by_size[n]]


def iter_subsets(items: List[Formula], max_len: int) -> Iterator[Tuple[Formula, ...]]:
    """Subsets of size <= max_len as tuples, smallest first"""
    for k in range(max_len + 1):
        yield from combinations(items, k)


def sequent_corpus(atoms: Iterable[int], max_size: int, max_side: int, *,
                   fc: bool = False, box: bool = True) -> List[Sequent]:
    """Every sequent whose sides hold at most max_side formulas of size <= max_size"""
    pool = enumerate_formulas(atoms, max_size, fc=fc, box=box)
    sides = list(iter_subsets(pool, max_side))
    return [Sequent.of(a, s) for a in sides for s in sides]
