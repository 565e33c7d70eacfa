"""Backward proof search, adequacy cross-checks and bounded refutation for S_blackbox."""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

import pandas as pd

from config.config import Config

from .calculi import (
    CalculusId, Derivation, ModalKind, RuleApplication, RuleInstance, axiom_instance,
    check_derivation, leaf, node, ref_allowed, rule_table,
)
from .exceptions import BudgetExceeded, DerivationError, InvalidModel
from .manyvalued import (
    PlainModel, Scheme, TruthValue, _evaluate, apply_connective, internal_consequence,
    legal_valuations,
)
from .syntax import (
    TOP, BOT, Atom, Bot, Box, Formula, Not, Sequent, Top, modal_depth, sort_formulas,
    subformulas,
)

logger = logging.getLogger(__name__)


@dataclass
class ProofResult:
    calculus: CalculusId
    sequent: Sequent
    derivation: Optional[Derivation]
    nodes: int

    @property
    def status(self) -> str:
        return "derivation" if self.derivation is not None else "saturated"

    def to_dict(self) -> dict:
        payload = {
            "calculus": str(self.calculus),
            "sequent": self.sequent.to_dict(),
            "status": self.status,
            "nodes": self.nodes,
        }
        if self.derivation is not None:
            payload["derivation"] = self.derivation.to_dict()
            payload["length"] = self.derivation.length()
        return payload


class ProofSearch:
    """Cut-free backward search over the cumulative form of the rules.

    A premise is the conclusion plus the rule's additions, so every rule step
    is invertible by weakening and no backtracking is needed over logical
    rules.  A step is taken only when all its premises are strictly larger.
    Blackbox steps are tried, with backtracking, once a sequent is saturated.
    """

    def __init__(self, calc: CalculusId, budget: int = Config.SEARCH_NODE_LIMIT):
        self.calc = calc
        self.table = rule_table(calc)
        self.budget = budget
        self.nodes = 0
        self.memo: Dict[Sequent, Optional[Derivation]] = {}

    def _axiom(self, seq: Sequent) -> Optional[RuleInstance]:
        if BOT in seq.ant:
            return axiom_instance(self.table, "bot", ())
        if TOP in seq.suc:
            return axiom_instance(self.table, "top", ())
        for f in sort_formulas(seq.ant & seq.suc):
            if ref_allowed(self.table, f):
                return axiom_instance(self.table, "ref", (f,))
        if "sym" in self.table.axioms:
            left = [f for f in sort_formulas(seq.ant) if Not(f) in seq.ant]
            right = [f for f in sort_formulas(seq.suc) if Not(f) in seq.suc]
            if left and right:
                return axiom_instance(self.table, "sym", (left[0], right[0]))
        return None

    def _instances(self, seq: Sequent) -> Iterator[RuleInstance]:
        for f in sort_formulas(seq.ant):
            for builder in self.table.left.values():
                yield from builder(f)
        for f in sort_formulas(seq.suc):
            for builder in self.table.right.values():
                yield from builder(f)

    def _next_step(self, seq: Sequent) -> Optional[Tuple[RuleInstance, List[Sequent]]]:
        fallback = None
        for instance in self._instances(seq):
            if instance.side_props and not instance.side_props <= seq.ant_props():
                continue
            premises = instance.cumulative_premises(seq)
            if any(p == seq for p in premises):
                continue
            if len(premises) == 1:
                return instance, premises
            if fallback is None:
                fallback = (instance, premises)
        return fallback

    def _blackbox_steps(self, seq: Sequent) -> Iterator[Tuple[str, Formula, Sequent]]:
        boxed = [f.sub for f in seq.ant if isinstance(f, Box)]
        negated = [Not(f.sub.sub) for f in seq.suc if isinstance(f, Not) and isinstance(f.sub, Box)]
        for f in sort_formulas(seq.ant):
            if isinstance(f, Not) and isinstance(f.sub, Box):
                yield "bbox-l", f.sub.sub, Sequent.of(boxed + [Not(f.sub.sub)], negated)
        for f in sort_formulas(seq.suc):
            if isinstance(f, Box):
                yield "bbox-r", f.sub, Sequent.of(boxed, negated + [f.sub])

    def search(self, seq: Sequent) -> Optional[Derivation]:
        if seq in self.memo:
            return self.memo[seq]
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"{self.calc}: more than {self.budget} search nodes")
        result = self._search(seq)
        self.memo[seq] = result
        return result

    def _search(self, seq: Sequent) -> Optional[Derivation]:
        axiom = self._axiom(seq)
        if axiom is not None:
            return leaf(seq, axiom)
        step = self._next_step(seq)
        if step is not None:
            instance, premises = step
            children = []
            for premise in premises:
                child = self.search(premise)
                if child is None:
                    return None
                children.append(child)
            return node(seq, instance, children)
        if self.calc.modal is ModalKind.BLACKBOX:
            for rule, principal, premise in self._blackbox_steps(seq):
                child = self.search(premise)
                if child is not None:
                    return Derivation(seq, RuleApplication(rule, (principal,)), [child])
        return None


def prove(calc: CalculusId, seq: Sequent, budget: int = Config.SEARCH_NODE_LIMIT) -> ProofResult:
    """Search for a cut-free derivation; raises BudgetExceeded past the node budget"""
    search = ProofSearch(calc, budget)
    derivation = search.search(seq)
    logger.debug(f"{calc}: {seq} -> {'derived' if derivation else 'saturated'} ({search.nodes} nodes)")
    return ProofResult(calc, seq, derivation, search.nodes)


# Adequacy

@dataclass
class CrosscheckReport:
    calculus: CalculusId
    both_yes: List[Sequent] = field(default_factory=list)
    both_no: List[Sequent] = field(default_factory=list)
    incomplete: List[Sequent] = field(default_factory=list)
    violations: List[Sequent] = field(default_factory=list)
    invalid_derivations: List[Sequent] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations and not self.invalid_derivations

    def summary(self) -> pd.DataFrame:
        buckets = {
            "both-yes": self.both_yes, "both-no": self.both_no,
            "search-incomplete": self.incomplete, "soundness-violation": self.violations,
            "invalid-derivation": self.invalid_derivations,
        }
        return pd.DataFrame({"bucket": list(buckets), "count": [len(v) for v in buckets.values()]})

    def to_dict(self) -> dict:
        return {
            "calculus": str(self.calculus),
            "passed": self.passed,
            "bothYes": len(self.both_yes),
            "bothNo": len(self.both_no),
            "searchIncomplete": [s.to_dict() for s in self.incomplete],
            "soundnessViolations": [s.to_dict() for s in self.violations],
            "invalidDerivations": [s.to_dict() for s in self.invalid_derivations],
        }


def crosscheck_adequacy(calc: CalculusId, corpus: Iterable[Sequent],
                        budget: int = Config.SEARCH_NODE_LIMIT) -> CrosscheckReport:
    """Compare cut-free search against consequence over idiosyncratic frames"""
    if calc.modal is ModalKind.BLACKBOX:
        raise DerivationError("cross-checks use idiosyncratic semantics; pass a base or box calculus")
    scheme = calc.base.scheme
    report = CrosscheckReport(calc)
    for seq in corpus:
        semantic = internal_consequence(seq.ant, seq.suc, scheme).holds
        try:
            result = prove(calc, seq, budget)
            derived = result.derivation is not None
        except BudgetExceeded:
            logger.warning(f"{calc}: budget exhausted on {seq}")
            result, derived = None, False
        if derived and not check_derivation(calc, result.derivation).valid:
            logger.error(f"{calc}: search produced an invalid derivation of {seq}")
            report.invalid_derivations.append(seq)
        if derived and not semantic:
            logger.error(f"{calc}: soundness violation on {seq}")
            report.violations.append(seq)
        elif derived:
            report.both_yes.append(seq)
        elif semantic:
            report.incomplete.append(seq)
        else:
            report.both_no.append(seq)
    if report.incomplete:
        logger.warning(f"{calc}: {len(report.incomplete)} valid sequent(s) not found by cut-free search")
    logger.info(f"{calc}: crosscheck over {len(report.both_yes) + len(report.both_no) + len(report.incomplete) + len(report.violations)} sequents")
    return report


# Bounded refutation over tree models

@dataclass(frozen=True)
class _WorldType:
    valuation: Tuple[Tuple[int, TruthValue], ...]
    children: Tuple["_WorldType", ...]
    signature: Tuple[TruthValue, ...]


@dataclass
class RefutationResult:
    calculus: CalculusId
    sequent: Sequent
    frame_bound: int
    model: Optional[PlainModel] = None
    root: Optional[str] = None
    types_explored: int = 0

    @property
    def found(self) -> bool:
        return self.model is not None

    def to_dict(self) -> dict:
        payload = {
            "calculus": str(self.calculus),
            "sequent": self.sequent.to_dict(),
            "frameBound": self.frame_bound,
            "found": self.found,
            "typesExplored": self.types_explored,
        }
        if self.model is not None:
            payload["countermodel"] = {
                "root": self.root,
                "worlds": {
                    str(u): {f"p{j}": v.value for j, v in sorted(self.model.valuation[u].items())}
                    for u in self.model.worlds
                },
                "relation": sorted([list(pair) for pair in self.model.relation]),
            }
        return payload


def _signature(closure: List[Formula], valuation: Dict[int, TruthValue],
               children: Tuple[_WorldType, ...], s: Scheme) -> Tuple[TruthValue, ...]:
    values: Dict[Formula, TruthValue] = {}
    position = {f: i for i, f in enumerate(closure)}
    for f in closure:
        if isinstance(f, Atom):
            values[f] = valuation[f.index]
        elif isinstance(f, Top):
            values[f] = TruthValue.ONE
        elif isinstance(f, Bot):
            values[f] = TruthValue.ZERO
        elif isinstance(f, Box):
            values[f] = s.order.inf(child.signature[position[f.sub]] for child in children)
        elif isinstance(f, Not):
            values[f] = apply_connective(f, (values[f.sub],), s)
        else:
            values[f] = apply_connective(f, (values[f.left], values[f.right]), s)
    return tuple(values[f] for f in closure)


def _materialize(root: _WorldType) -> Tuple[PlainModel, str]:
    worlds, relation, valuation = [], set(), {}

    def visit(t: _WorldType) -> str:
        name = f"u{len(worlds)}"
        worlds.append(name)
        valuation[name] = dict(t.valuation)
        for child in t.children:
            relation.add((name, visit(child)))
        return name

    root_name = visit(root)
    return PlainModel(tuple(worlds), frozenset(relation), valuation), root_name


def blackbox_refute(calc: CalculusId, seq: Sequent,
                    frame_bound: int = Config.REFUTE_FRAME_BOUND) -> RefutationResult:
    """Look for a tree model of height <= modal depth and branching <= frame_bound refuting seq.

    Worlds are enumerated bottom-up as types: the values of every subformula
    of the sequent, given a valuation and a set of lower types as successors.
    """
    if frame_bound < 1:
        raise ValueError("frame_bound must be at least 1")
    scheme = calc.base.scheme
    closure: List[Formula] = []
    for f in sort_formulas(seq.formulas()):
        for g in subformulas(f):
            if g not in closure:
                closure.append(g)
    position = {f: i for i, f in enumerate(closure)}
    atoms = sorted({f.index for f in closure if isinstance(f, Atom)})
    height = max([modal_depth(f) for f in seq.formulas()] + [0])
    result = RefutationResult(calc, seq, frame_bound)

    def refutes(t: _WorldType) -> bool:
        return all(t.signature[position[g]].designated for g in seq.ant) and \
            not any(t.signature[position[d]].designated for d in seq.suc)

    known: Dict[Tuple[TruthValue, ...], _WorldType] = {}
    for level in range(height + 1):
        lower = list(known.values())
        successor_sets = [()] + [c for k in range(1, frame_bound + 1) for c in combinations(lower, k)]
        for valuation in legal_valuations(atoms, scheme.valuation_class):
            for children in successor_sets:
                signature = _signature(closure, valuation, children, scheme)
                if signature in known:
                    continue
                t = _WorldType(tuple(sorted(valuation.items())), children, signature)
                known[signature] = t
                if refutes(t):
                    result.model, result.root = _materialize(t)
                    result.types_explored = len(known)
                    _confirm(result, scheme)
                    return result
        logger.debug(f"{calc}: {len(known)} world types after level {level}")
    result.types_explored = len(known)
    return result


def _confirm(result: RefutationResult, scheme: Scheme) -> None:
    m, root = result.model, result.root
    ok = all(_evaluate(m, root, g, scheme).designated for g in result.sequent.ant) and \
        not any(_evaluate(m, root, d, scheme).designated for d in result.sequent.suc)
    if not ok:
        logger.error(f"{result.calculus}: reconstructed model does not refute {result.sequent}")
        raise InvalidModel(f"reconstructed model does not refute {result.sequent}")
