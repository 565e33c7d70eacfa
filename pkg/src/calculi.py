"""Sequent calculi FDE, KS3, K3, LP, B3, F3 and their box and blackbox extensions.

Rules are stored as shapes: the formulas a rule adds to the conclusion and
the formulas each premise adds to a shared context.  The same shapes drive
the checker, proof search, the weakening transformer and the sampler.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import DerivationError, UnknownLogic
from .manyvalued import Scheme
from .syntax import (
    And, Atom, Box, Dialect, Fc, Formula, Not, Or, Sequent, TOP, BOT,
    enumerate_formulas, has_fc, is_literal, parse, prop_set, to_text,
)

logger = logging.getLogger(__name__)


class BaseLogic(str, Enum):
    FDE = "FDE"
    KS3 = "KS3"
    K3 = "K3"
    LP = "LP"
    B3 = "B3"
    F3 = "F3"

    @property
    def scheme(self) -> Scheme:
        return Scheme(self.value.lower())

    @property
    def weak(self) -> bool:
        return self in (BaseLogic.B3, BaseLogic.F3)


class ModalKind(str, Enum):
    NONE = "none"
    BOX = "box"
    BLACKBOX = "bbox"


@dataclass(frozen=True)
class CalculusId:
    base: BaseLogic
    modal: ModalKind = ModalKind.BOX

    @classmethod
    def parse(cls, text: str) -> "CalculusId":
        """'K3', 'K3_box' or 'K3_bbox'"""
        name, _, suffix = text.partition("_")
        try:
            return cls(BaseLogic(name.upper()), ModalKind(suffix or "none"))
        except ValueError:
            raise UnknownLogic(f"unknown calculus {text!r}") from None

    @property
    def dialect(self) -> Dialect:
        return Dialect.FC if self.base is BaseLogic.F3 else Dialect.BASIC

    def __str__(self) -> str:
        return self.base.value if self.modal is ModalKind.NONE else f"{self.base.value}_{self.modal.value}"


# Rule shapes

Side = Tuple[FrozenSet[Formula], FrozenSet[Formula]]


@dataclass(frozen=True)
class RuleInstance:
    """Conclusion Gamma,A => Delta,S from premises Gamma,A_i => Delta,S_i"""
    name: str
    principal: Tuple[Formula, ...]
    ant: FrozenSet[Formula]
    suc: FrozenSet[Formula]
    premises: Tuple[Side, ...] = ()
    # atoms that must occur in the antecedent context
    side_props: FrozenSet[int] = frozenset()

    def side_record(self) -> dict:
        if not self.side_props:
            return {}
        return {"propsRequired": [f"p{j}" for j in sorted(self.side_props)]}

    def cumulative_premises(self, conclusion: Sequent) -> List[Sequent]:
        return [conclusion.add(a, s) for a, s in self.premises]


def _fs(*items: Formula) -> FrozenSet[Formula]:
    return frozenset(items)


def _left(f: Formula, *premises: Side, props: FrozenSet[int] = frozenset(), name: str) -> RuleInstance:
    return RuleInstance(name, (f,), _fs(f), frozenset(), tuple(premises), props)


def _right(f: Formula, *premises: Side, props: FrozenSet[int] = frozenset(), name: str) -> RuleInstance:
    return RuleInstance(name, (f,), frozenset(), _fs(f), tuple(premises), props)


def _ante(*items: Formula) -> Side:
    return _fs(*items), frozenset()


def _succ(*items: Formula) -> Side:
    return frozenset(), _fs(*items)


def _props(*items: Formula) -> FrozenSet[int]:
    result = frozenset()
    for f in items:
        result |= prop_set(f)
    return result


# Builders take a principal formula and return every instance with that
# principal; an empty list means the formula does not have the rule's shape.
Builder = Callable[[Formula], List[RuleInstance]]


def _dn_l(f):
    if isinstance(f, Not) and isinstance(f.sub, Not):
        return [_left(f, _ante(f.sub.sub), name="dn-l")]
    return []


def _dn_r(f):
    if isinstance(f, Not) and isinstance(f.sub, Not):
        return [_right(f, _succ(f.sub.sub), name="dn-r")]
    return []


def _neg_and_l(f):
    if isinstance(f, Not) and isinstance(f.sub, And):
        a, b = f.sub.left, f.sub.right
        return [_left(f, _ante(Not(a)), _ante(Not(b)), name="neg-and-l")]
    return []


def _neg_and_r(f):
    if isinstance(f, Not) and isinstance(f.sub, And):
        return [_right(f, _succ(Not(part)), name="neg-and-r") for part in (f.sub.left, f.sub.right)]
    return []


def _and_l(f):
    if isinstance(f, And):
        return [_left(f, _ante(part), name="and-l") for part in (f.left, f.right)]
    return []


def _and_r(f):
    if isinstance(f, And):
        return [_right(f, _succ(f.left), _succ(f.right), name="and-r")]
    return []


def _neg_or_l(f):
    if isinstance(f, Not) and isinstance(f.sub, Or):
        return [_left(f, _ante(Not(part)), name="neg-or-l") for part in (f.sub.left, f.sub.right)]
    return []


def _neg_or_r(f):
    if isinstance(f, Not) and isinstance(f.sub, Or):
        a, b = f.sub.left, f.sub.right
        return [_right(f, _succ(Not(a)), _succ(Not(b)), name="neg-or-r")]
    return []


def _or_l(f):
    if isinstance(f, Or):
        return [_left(f, _ante(f.left), _ante(f.right), name="or-l")]
    return []


def _or_r(f):
    if isinstance(f, Or):
        return [_right(f, _succ(part), name="or-r") for part in (f.left, f.right)]
    return []


def _or_r_weak(f):
    if isinstance(f, Or):
        props = _props(f.left, f.right)
        return [_right(f, _succ(part), props=props, name="or-r") for part in (f.left, f.right)]
    return []


def _neg_l(f):
    if isinstance(f, Not):
        return [_left(f, _succ(f.sub), name="neg-l")]
    return []


def _neg_r(f):
    if isinstance(f, Not):
        return [_right(f, _ante(f.sub), name="neg-r")]
    return []


def _neg_r_weak(f):
    if isinstance(f, Not):
        return [_right(f, _ante(f.sub), props=prop_set(f.sub), name="neg-r")]
    return []


def _fc_l(f):
    if isinstance(f, Fc):
        return [_left(f, _succ(f.left), _ante(f.right), name="fc-l")]
    return []


def _fc_r1(f):
    if isinstance(f, Fc):
        return [_right(f, _succ(Not(f.left)), name="fc-r1")]
    return []


def _fc_r2(f):
    if isinstance(f, Fc):
        premise = (_fs(f.left), _fs(f.right))
        return [_right(f, premise, props=_props(f.left, f.right), name="fc-r2")]
    return []


def _box_l(f):
    if isinstance(f, Box):
        return [_left(f, _ante(f.sub), name="box-l")]
    return []


def _box_r(f):
    if isinstance(f, Box):
        return [_right(f, _succ(f.sub), name="box-r")]
    return []


def _neg_box_l(f):
    if isinstance(f, Not) and isinstance(f.sub, Box):
        return [_left(f, _ante(Not(f.sub.sub)), name="neg-box-l")]
    return []


def _neg_box_r(f):
    if isinstance(f, Not) and isinstance(f.sub, Box):
        return [_right(f, _succ(Not(f.sub.sub)), name="neg-box-r")]
    return []


_FDE_LEFT = {"dn-l": _dn_l, "neg-and-l": _neg_and_l, "and-l": _and_l, "neg-or-l": _neg_or_l, "or-l": _or_l}
_FDE_RIGHT = {"dn-r": _dn_r, "neg-and-r": _neg_and_r, "and-r": _and_r, "neg-or-r": _neg_or_r, "or-r": _or_r}
_B3_LEFT = {"neg-l": _neg_l, "and-l": _and_l, "or-l": _or_l}
_B3_RIGHT = {"neg-r": _neg_r_weak, "and-r": _and_r, "or-r": _or_r_weak}
_BOX_LEFT = {"box-l": _box_l, "neg-box-l": _neg_box_l}
_BOX_RIGHT = {"box-r": _box_r, "neg-box-r": _neg_box_r}

AXIOM_RULES = ("ref", "bot", "top", "sym")
BLACKBOX_RULES = ("bbox-l", "bbox-r")


@dataclass(frozen=True)
class RuleTable:
    left: Dict[str, Builder]
    right: Dict[str, Builder]
    axioms: Tuple[str, ...]
    ref_any: bool
    ref_atoms_only: bool

    @property
    def names(self) -> Tuple[str, ...]:
        return self.axioms + ("cut",) + tuple(self.left) + tuple(self.right)


def rule_table(calc: CalculusId) -> RuleTable:
    """Logical rules of the calculus, excluding the blackbox rules"""
    base = calc.base
    if base.weak:
        left, right = dict(_B3_LEFT), dict(_B3_RIGHT)
        if base is BaseLogic.F3:
            left["fc-l"] = _fc_l
            right.update({"fc-r1": _fc_r1, "fc-r2": _fc_r2})
    else:
        left, right = dict(_FDE_LEFT), dict(_FDE_RIGHT)
        if base is BaseLogic.K3:
            left["neg-l"] = _neg_l
        if base is BaseLogic.LP:
            right["neg-r"] = _neg_r
    if calc.modal is ModalKind.BOX:
        left.update(_BOX_LEFT)
        right.update(_BOX_RIGHT)
    axioms = ("ref", "bot", "top") + (("sym",) if base is BaseLogic.KS3 else ())
    blackbox = calc.modal is ModalKind.BLACKBOX
    return RuleTable(left, right, axioms, ref_any=blackbox, ref_atoms_only=base.weak and not blackbox)


def ref_allowed(table: RuleTable, f: Formula) -> bool:
    if table.ref_any:
        return True
    if table.ref_atoms_only:
        return isinstance(f, Atom)
    return is_literal(f)


def axiom_instance(table: RuleTable, name: str, principal: Sequence[Formula]) -> Optional[RuleInstance]:
    if name not in table.axioms:
        return None
    principal = tuple(principal)
    if name == "ref" and len(principal) == 1 and ref_allowed(table, principal[0]):
        return RuleInstance("ref", principal, _fs(principal[0]), _fs(principal[0]))
    if name == "bot" and principal in ((), (BOT,)):
        return RuleInstance("bot", (BOT,), _fs(BOT), frozenset())
    if name == "top" and principal in ((), (TOP,)):
        return RuleInstance("top", (TOP,), frozenset(), _fs(TOP))
    if name == "sym" and len(principal) == 2:
        a, b = principal
        return RuleInstance("sym", principal, _fs(a, Not(a)), _fs(b, Not(b)))
    return None


def cut_instance(f: Formula) -> RuleInstance:
    return RuleInstance("cut", (f,), frozenset(), frozenset(), (_succ(f), _ante(f)))


def instances_for(table: RuleTable, name: str, principal: Sequence[Formula]) -> List[RuleInstance]:
    """Every instance of a named rule with the given principal formulas"""
    if name in AXIOM_RULES:
        found = axiom_instance(table, name, principal)
        return [found] if found else []
    if name == "cut":
        return [cut_instance(principal[0])] if len(principal) == 1 else []
    if len(principal) != 1:
        return []
    builder = table.left.get(name) or table.right.get(name)
    return builder(principal[0]) if builder else []


# Derivations

@dataclass
class RuleApplication:
    rule: str
    principal: Tuple[Formula, ...] = ()
    side: dict = field(default_factory=dict)


@dataclass
class Derivation:
    sequent: Sequent
    application: RuleApplication
    children: List["Derivation"] = field(default_factory=list)

    @property
    def rule(self) -> str:
        return self.application.rule

    def length(self) -> int:
        """Nodes on the longest branch minus one"""
        if not self.children:
            return 0
        return 1 + max(child.length() for child in self.children)

    def size(self) -> int:
        return 1 + sum(child.size() for child in self.children)

    def to_dict(self) -> dict:
        return {
            "sequent": self.sequent.to_dict(),
            "rule": self.application.rule,
            "principal": [to_text(f) for f in self.application.principal],
            "side": dict(self.application.side),
            "children": [child.to_dict() for child in self.children],
        }

    @classmethod
    def from_dict(cls, data: dict, dialect: Dialect = Dialect.BASIC) -> "Derivation":
        try:
            sequent = Sequent.of(
                [parse(text, dialect) for text in data["sequent"]["ant"]],
                [parse(text, dialect) for text in data["sequent"]["suc"]],
            )
            application = RuleApplication(
                data["rule"],
                tuple(parse(text, dialect) for text in data.get("principal", [])),
                dict(data.get("side", {})),
            )
            children = [cls.from_dict(child, dialect) for child in data.get("children", [])]
        except (KeyError, TypeError) as e:
            raise DerivationError(f"malformed derivation node: {e}") from e
        if len(children) > 2:
            raise DerivationError("derivations branch at most binarily")
        return cls(sequent, application, children)


def leaf(sequent: Sequent, instance: RuleInstance) -> Derivation:
    return Derivation(sequent, RuleApplication(instance.name, instance.principal, instance.side_record()))


def node(sequent: Sequent, instance: RuleInstance, children: List[Derivation]) -> Derivation:
    return Derivation(sequent, RuleApplication(instance.name, instance.principal, instance.side_record()),
                      children)


# Checking

def _matches(instance: RuleInstance, conclusion: Sequent, premises: List[Sequent]) -> Optional[str]:
    """None when the node is a legal instance, otherwise the reason it is not"""
    if not (instance.ant <= conclusion.ant and instance.suc <= conclusion.suc):
        return "principal formulas missing from the conclusion"
    if len(premises) != len(instance.premises):
        return f"expected {len(instance.premises)} premise(s), found {len(premises)}"
    base_ant, base_suc = conclusion.ant - instance.ant, conclusion.suc - instance.suc
    reason = "premises do not match the rule"
    # the principal formulas may also remain in the context
    for k in range(len(instance.ant) + 1):
        for keep_ant in combinations(sorted(instance.ant, key=to_text), k):
            gamma = base_ant | frozenset(keep_ant)
            if instance.side_props and not instance.side_props <= _props(*gamma):
                reason = f"side condition fails: props {sorted(instance.side_props)} not in the context"
                continue
            for m in range(len(instance.suc) + 1):
                for keep_suc in combinations(sorted(instance.suc, key=to_text), m):
                    delta = base_suc | frozenset(keep_suc)
                    if all(p.ant == gamma | a and p.suc == delta | s
                           for p, (a, s) in zip(premises, instance.premises)):
                        return None
    return reason


def _check_blackbox(d: Derivation) -> Optional[str]:
    """bbox-l: Gamma, ~f => ~Delta over []Gamma, ~[]f => ~[]Delta; bbox-r: Gamma => f, ~Delta over []Gamma => []f, ~[]Delta"""
    if len(d.children) != 1 or len(d.application.principal) != 1:
        return "blackbox rules take one principal formula and one premise"
    f = d.application.principal[0]
    conclusion, premise = d.sequent, d.children[0].sequent
    if d.rule == "bbox-l":
        if Not(Box(f)) not in conclusion.ant or Not(f) not in premise.ant:
            return f"bbox-l needs ~[]{to_text(f)} below and ~{to_text(f)} above"
        gamma, delta_part, principal_succ = premise.ant - {Not(f)}, premise.suc, frozenset()
    else:
        if Box(f) not in conclusion.suc or f not in premise.suc:
            return f"bbox-r needs []{to_text(f)} below and {to_text(f)} above"
        gamma, delta_part, principal_succ = premise.ant, premise.suc - {f}, _fs(f)
    if any(Box(g) not in conclusion.ant for g in gamma):
        return "premise antecedent is not the boxed context"
    for g in delta_part:
        if not (isinstance(g, Not) and Not(Box(g.sub)) in conclusion.suc):
            return "premise succedent is not the negated boxed context"
    return None


@dataclass
class CheckResult:
    valid: bool
    root: Sequent
    reason: Optional[str] = None
    offending: Optional[Sequent] = None
    path: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        payload = {"valid": self.valid, "root": self.root.to_dict()}
        if not self.valid:
            payload.update({"reason": self.reason, "node": self.offending.to_dict(), "path": list(self.path)})
        return payload


def _node_error(calc: CalculusId, table: RuleTable, d: Derivation) -> Optional[str]:
    rule = d.rule
    if any(has_fc(f) for f in d.sequent.formulas()) and calc.base is not BaseLogic.F3:
        return "'->>' occurs outside F3"
    if rule in BLACKBOX_RULES:
        if calc.modal is not ModalKind.BLACKBOX:
            return f"rule {rule} is not available in {calc}"
        return _check_blackbox(d)
    if rule not in table.names:
        return f"rule {rule} is not available in {calc}"
    candidates = instances_for(table, rule, d.application.principal)
    if not candidates:
        return f"{rule} does not apply to {[to_text(f) for f in d.application.principal]}"
    premises = [child.sequent for child in d.children]
    reason = None
    for instance in candidates:
        reason = _matches(instance, d.sequent, premises)
        if reason is None:
            return None
    return reason


def check_derivation(calc: CalculusId, d: Derivation) -> CheckResult:
    """Validate every node, reporting the leftmost-innermost offending one"""
    table = rule_table(calc)

    def visit(current: Derivation, path: Tuple[int, ...]) -> Optional[CheckResult]:
        for i, child in enumerate(current.children):
            failure = visit(child, path + (i,))
            if failure:
                return failure
        reason = _node_error(calc, table, current)
        if reason:
            return CheckResult(False, d.sequent, reason, current.sequent, path)
        return None

    failure = visit(d, ())
    if failure:
        logger.debug(f"{calc}: invalid node {failure.offending}: {failure.reason}")
        return failure
    return CheckResult(True, d.sequent)


# Weakening

def weaken(d: Derivation, gamma0: Iterable[Formula] = (), delta0: Iterable[Formula] = ()) -> Derivation:
    """Add gamma0/delta0 to every node; premises of blackbox steps stay as they are"""
    gamma0, delta0 = frozenset(gamma0), frozenset(delta0)
    sequent = d.sequent.add(gamma0, delta0)
    if d.rule in BLACKBOX_RULES:
        children = list(d.children)
    else:
        children = [weaken(child, gamma0, delta0) for child in d.children]
    return Derivation(sequent, d.application, children)


# Sampling

_SHAPES: Dict[str, Callable[[Formula, Formula], Formula]] = {
    "dn-l": lambda a, b: Not(Not(a)), "dn-r": lambda a, b: Not(Not(a)),
    "neg-and-l": lambda a, b: Not(And(a, b)), "neg-and-r": lambda a, b: Not(And(a, b)),
    "and-l": And, "and-r": And,
    "neg-or-l": lambda a, b: Not(Or(a, b)), "neg-or-r": lambda a, b: Not(Or(a, b)),
    "or-l": Or, "or-r": Or,
    "neg-l": lambda a, b: Not(a), "neg-r": lambda a, b: Not(a),
    "fc-l": Fc, "fc-r1": Fc, "fc-r2": Fc,
    "box-l": lambda a, b: Box(a), "box-r": lambda a, b: Box(a),
    "neg-box-l": lambda a, b: Not(Box(a)), "neg-box-r": lambda a, b: Not(Box(a)),
}


class DerivationSampler:
    """Random valid derivations, built top-down from random subderivations"""

    def __init__(self, calc: CalculusId, rng: np.random.Generator, atoms: Sequence[int] = (0, 1),
                 formula_size: int = 2):
        if calc.modal is ModalKind.BLACKBOX:
            raise DerivationError("sampling covers base and box calculi only")
        self.calc = calc
        self.rng = rng
        self.table = rule_table(calc)
        self.atoms = list(atoms)
        self.pool = enumerate_formulas(self.atoms, formula_size, fc=calc.base is BaseLogic.F3,
                                       box=calc.modal is ModalKind.BOX)
        self.rules = sorted(set(self.table.left) | set(self.table.right)) + ["cut"]

    def _formula(self) -> Formula:
        return self.pool[int(self.rng.integers(len(self.pool)))]

    def _atom(self) -> Atom:
        return Atom(self.atoms[int(self.rng.integers(len(self.atoms)))])

    def _context(self) -> List[Formula]:
        return [self._formula() for _ in range(int(self.rng.integers(2)))]

    def _axiom(self) -> Derivation:
        options = list(self.table.axioms)
        name = options[int(self.rng.integers(len(options)))]
        if name == "ref":
            a = self._atom()
            f = a if self.table.ref_atoms_only or self.rng.random() < 0.5 else Not(a)
            instance = axiom_instance(self.table, "ref", (f,))
        elif name == "sym":
            instance = axiom_instance(self.table, "sym", (self._formula(), self._formula()))
        else:
            instance = axiom_instance(self.table, name, ())
        sequent = Sequent.of(instance.ant, instance.suc).add(self._context(), self._context())
        return leaf(sequent, instance)

    def _instance(self, name: str) -> RuleInstance:
        if name == "cut":
            return cut_instance(self._formula())
        principal = _SHAPES[name](self._formula(), self._formula())
        options = instances_for(self.table, name, (principal,))
        return options[int(self.rng.integers(len(options)))]

    def sample(self, depth: int) -> Derivation:
        if depth <= 0 or self.rng.random() < 0.25:
            return self._axiom()
        name = self.rules[int(self.rng.integers(len(self.rules)))]
        instance = self._instance(name)
        subs = [self.sample(depth - 1) for _ in instance.premises]
        gamma, delta = frozenset(Atom(j) for j in instance.side_props), frozenset()
        for sub, (a, s) in zip(subs, instance.premises):
            gamma |= sub.sequent.ant - a
            delta |= sub.sequent.suc - s
        children = []
        for sub, (a, s) in zip(subs, instance.premises):
            children.append(weaken(sub, gamma | a, delta | s))
        conclusion = Sequent(gamma | instance.ant, delta | instance.suc)
        return node(conclusion, instance, children)


def sample_derivation(calc: CalculusId, rng: np.random.Generator, depth: int,
                      atoms: Sequence[int] = (0, 1)) -> Derivation:
    return DerivationSampler(calc, rng, atoms).sample(depth)
