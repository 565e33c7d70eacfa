"""Mixed idiosyncratic models and the classical modal logics of truth.

A mixed model has classical worlds W, each seeing exactly one nonclassical
world in Z, and every world in Z sees only itself.  Theoremhood in each
classical logic is decided by enumerating single-rooted models (one w, one z).
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

from config.config import Config

from .exceptions import IllegalConnective, InvalidModel, TooManyAtoms, UnknownLogic
from .manyvalued import (
    CLASSICAL_VALUES, PlainModel, Scheme, TruthValue, ValuationClass, _evaluate,
    check_formula_for_scheme, legal_valuations,
)
from .syntax import (
    TOP, BOT, And, Atom, Bot, Box, Fc, Formula, Not, Or, Top, atom, enumerate_formulas,
    has_fc, iff, implies, nabla_bar_pair, prop_set, to_text,
)
from .utils import format_valuation

logger = logging.getLogger(__name__)


@dataclass
class MixedModel:
    classical_worlds: Tuple[str, ...]
    nonclassical_worlds: Tuple[str, ...]
    relation: FrozenSet[Tuple[str, str]]
    valuation: Dict[str, Dict[int, TruthValue]]
    valuation_class: ValuationClass
    nonclassical_part: PlainModel = field(init=False, repr=False)

    def __post_init__(self):
        self.validate()
        z_pairs = frozenset((z, z) for z in self.nonclassical_worlds)
        self.nonclassical_part = PlainModel(
            self.nonclassical_worlds, z_pairs,
            {z: self.valuation[z] for z in self.nonclassical_worlds},
        )

    def validate(self) -> None:
        """Functionality, idiosyncrasy, classical values at W, class constraints on Z"""
        if not self.classical_worlds or not self.nonclassical_worlds:
            raise InvalidModel("both W and Z must be nonempty")
        w_set, z_set = set(self.classical_worlds), set(self.nonclassical_worlds)
        if w_set & z_set:
            raise InvalidModel(f"W and Z overlap: {sorted(w_set & z_set)}")
        for u, v in self.relation:
            if v not in z_set or u not in w_set | z_set:
                raise InvalidModel(f"relation pair ({u}, {v}) must end in Z")
            if u in z_set and u != v:
                raise InvalidModel(f"nonclassical world {u} may only see itself")
        for z in self.nonclassical_worlds:
            if (z, z) not in self.relation:
                raise InvalidModel(f"nonclassical world {z} must see itself")
        for w in self.classical_worlds:
            seen = [v for u, v in self.relation if u == w]
            if len(seen) != 1:
                raise InvalidModel(f"classical world {w} must see exactly one world, sees {len(seen)}")
            if any(not value.classical for value in self.valuation.get(w, {}).values()):
                raise InvalidModel(f"classical world {w} has a nonclassical value")
        for z in self.nonclassical_worlds:
            if not self.valuation_class.admits(self.valuation.get(z, {}).values()):
                raise InvalidModel(f"valuation at {z} is not {self.valuation_class.value}")

    def successor(self, w: str) -> str:
        return next(v for u, v in sorted(self.relation) if u == w)

    def atoms(self) -> List[int]:
        found = set()
        for values in self.valuation.values():
            found |= set(values)
        return sorted(found)

    def unfaithful_pairs(self) -> List[Tuple[str, int]]:
        """(w, atom) pairs where a classical value at the successor does not carry over"""
        pairs = []
        for w in self.classical_worlds:
            z = self.successor(w)
            for j, value in sorted(self.valuation[z].items()):
                if value.classical and self.valuation[w].get(j) is not value:
                    pairs.append((w, j))
        return pairs

    def is_faithful(self) -> bool:
        return not self.unfaithful_pairs()

    def to_dict(self, scheme: Optional[Scheme] = None, fails_at: Optional[str] = None) -> dict:
        """Countermodel rendering; single-rooted models use the flat w/z layout"""
        if len(self.classical_worlds) == 1 and len(self.nonclassical_worlds) == 1:
            w, z = self.classical_worlds[0], self.nonclassical_worlds[0]
            payload = {
                "w": {k: int(v.value) for k, v in format_valuation(self.valuation[w]).items()},
                "z": {k: v.value for k, v in format_valuation(self.valuation[z]).items()},
            }
        else:
            payload = {
                "worlds": {
                    u: {k: v.value for k, v in format_valuation(self.valuation[u]).items()}
                    for u in self.classical_worlds + self.nonclassical_worlds
                },
                "relation": sorted([list(pair) for pair in self.relation]),
            }
        payload["class"] = self.valuation_class.value
        payload["faithful"] = self.is_faithful()
        if scheme is not None:
            payload["scheme"] = Scheme(scheme).value
        if fails_at is not None:
            payload["failsAt"] = fails_at
        return payload


def single_rooted(w_values: Dict[int, TruthValue], z_values: Dict[int, TruthValue],
                  valuation_class: ValuationClass = ValuationClass.FOUR_VALUED) -> MixedModel:
    """The model ({w}, {z}, {(w,z),(z,z)}, V)"""
    return MixedModel(
        ("w",), ("z",), frozenset([("w", "z"), ("z", "z")]),
        {"w": dict(w_values), "z": dict(z_values)}, ValuationClass(valuation_class),
    )


def _eval_classical(m: MixedModel, w: str, f: Formula, s: Scheme) -> bool:
    if isinstance(f, Atom):
        value = m.valuation[w].get(f.index)
        if value is None:
            raise InvalidModel(f"no value for p{f.index} at world {w}")
        return value is TruthValue.ONE
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Not):
        return not _eval_classical(m, w, f.sub, s)
    if isinstance(f, And):
        return _eval_classical(m, w, f.left, s) and _eval_classical(m, w, f.right, s)
    if isinstance(f, Or):
        return _eval_classical(m, w, f.left, s) or _eval_classical(m, w, f.right, s)
    if isinstance(f, Fc):
        # externally ->> is material
        return (not _eval_classical(m, w, f.left, s)) or _eval_classical(m, w, f.right, s)
    if isinstance(f, Box):
        z = m.successor(w)
        return _evaluate(m.nonclassical_part, z, f.sub, s).designated
    raise TypeError(f"not a formula: {f!r}")


def eval_mixed(m: MixedModel, world: str, f: Formula, s: Scheme) -> TruthValue:
    """Value of f at any world of a mixed model; classical worlds only yield 0 or 1"""
    s = Scheme(s)
    check_formula_for_scheme(f, s)
    if world in m.nonclassical_worlds:
        return _evaluate(m.nonclassical_part, world, f, s)
    if world not in m.classical_worlds:
        raise InvalidModel(f"unknown world {world}")
    return TruthValue.ONE if _eval_classical(m, world, f, s) else TruthValue.ZERO


# Logics

class ClassicalLogic(str, Enum):
    BM_MINUS = "BM-"
    BM = "BM"
    M_MINUS = "M-"
    M = "M"
    MN = "Mn"
    MB = "Mb"
    MW_MINUS = "Mw-"
    MW = "Mw"
    MF_MINUS = "Mf-"
    MF = "Mf"
    BM_MINUS_D = "BM-+D"
    BM_MINUS_DC = "BM-+Dc"

    @classmethod
    def from_name(cls, name: str) -> "ClassicalLogic":
        normalized = _ALIASES.get(name, name)
        try:
            return cls(normalized)
        except ValueError:
            raise UnknownLogic(f"unknown logic {name!r}; choose from {[x.value for x in cls]}") from None

    @property
    def profile(self) -> "LogicProfile":
        return LOGIC_PROFILES[self]


_ALIASES = {
    "BM⁻": "BM-", "M⁻": "M-", "Mⁿ": "Mn", "Mᵇ": "Mb", "Mʷ": "Mw", "Mᶠ": "Mf",
    "Mʷ⁻": "Mw-", "Mᶠ⁻": "Mf-", "Mw^-": "Mw-", "Mf^-": "Mf-",
}


@dataclass(frozen=True)
class LogicProfile:
    scheme: Scheme
    faithful: bool
    axioms: Tuple[str, ...]
    inner: str

    @property
    def fc(self) -> bool:
        return self.scheme.allows_fc


_BM_CORE = ("top", "bot", "neg", "and1", "and2", "or1", "or2", "box1", "box2")
_MW_CORE = ("top", "bot", "neg", "and1", "or2", "box1", "box2", "D", "or3", "and3")

LOGIC_PROFILES: Dict[ClassicalLogic, LogicProfile] = {
    ClassicalLogic.BM_MINUS: LogicProfile(Scheme.FDE, False, _BM_CORE, "FDE"),
    ClassicalLogic.BM: LogicProfile(Scheme.FDE, True, _BM_CORE + ("faith",), "FDE"),
    ClassicalLogic.M_MINUS: LogicProfile(Scheme.KS3, False, _BM_CORE + ("DDc",), "KS3"),
    ClassicalLogic.M: LogicProfile(Scheme.KS3, True, _BM_CORE + ("faith", "DDc"), "KS3"),
    ClassicalLogic.MN: LogicProfile(Scheme.K3, True, _BM_CORE + ("faith", "D"), "K3"),
    ClassicalLogic.MB: LogicProfile(Scheme.LP, True, _BM_CORE + ("faith", "Dc"), "LP"),
    ClassicalLogic.BM_MINUS_D: LogicProfile(Scheme.K3, False, _BM_CORE + ("D",), "K3"),
    ClassicalLogic.BM_MINUS_DC: LogicProfile(Scheme.LP, False, _BM_CORE + ("Dc",), "LP"),
    ClassicalLogic.MW_MINUS: LogicProfile(Scheme.B3, False, _MW_CORE, "B3"),
    ClassicalLogic.MW: LogicProfile(Scheme.B3, True, _MW_CORE + ("faith",), "B3"),
    ClassicalLogic.MF_MINUS: LogicProfile(Scheme.F3, False, _MW_CORE + ("fc1", "fc2"), "F3"),
    ClassicalLogic.MF: LogicProfile(Scheme.F3, True, _MW_CORE + ("faith", "fc1", "fc2"), "F3"),
}

# (inner base calculus, classical logic) pairs related by the connecting property
CONNECTING_PAIRS: Tuple[Tuple[str, ClassicalLogic], ...] = (
    ("K3", ClassicalLogic.MN),
    ("LP", ClassicalLogic.MB),
    ("KS3", ClassicalLogic.M),
    ("FDE", ClassicalLogic.BM),
    ("B3", ClassicalLogic.MW),
    ("F3", ClassicalLogic.MF),
)


def inner_logic(logic: ClassicalLogic) -> str:
    """Base calculus whose box extension governs reasoning under [] in the logic"""
    return ClassicalLogic(logic).profile.inner


def connecting_pairs() -> Tuple[Tuple[str, ClassicalLogic], ...]:
    return CONNECTING_PAIRS


# Axiom schemas, keyed by name: (arity, builder)

def _box_neg(f: Formula) -> Formula:
    return Box(Not(f))


AXIOM_SCHEMAS: Dict[str, Tuple[int, Callable[..., Formula]]] = {
    "top": (0, lambda: Box(TOP)),
    "bot": (0, lambda: Not(Box(BOT))),
    "neg": (1, lambda a: iff(Box(a), Box(Not(Not(a))))),
    "and1": (2, lambda a, b: iff(Box(And(a, b)), And(Box(a), Box(b)))),
    "and2": (2, lambda a, b: iff(_box_neg(And(a, b)), Or(_box_neg(a), _box_neg(b)))),
    "or1": (2, lambda a, b: iff(Box(Or(a, b)), Or(Box(a), Box(b)))),
    "or2": (2, lambda a, b: iff(_box_neg(Or(a, b)), And(_box_neg(a), _box_neg(b)))),
    "box1": (1, lambda a: iff(Box(a), Box(Box(a)))),
    "box2": (1, lambda a: iff(_box_neg(a), _box_neg(Box(a)))),
    "faith": (1, lambda a: implies(And(Box(a), Not(_box_neg(a))), a)),
    "D": (1, lambda a: Or(Not(_box_neg(a)), Not(Box(a)))),
    "Dc": (1, lambda a: Or(_box_neg(a), Box(a))),
    "DDc": (2, lambda a, b: Or(Or(Not(_box_neg(a)), Not(Box(a))), Or(_box_neg(b), Box(b)))),
    "or3": (2, lambda a, b: iff(Box(Or(a, b)), And(nabla_bar_pair(a, b), Or(Box(a), Box(b))))),
    "and3": (2, lambda a, b: iff(_box_neg(And(a, b)),
                                 And(nabla_bar_pair(a, b), Or(_box_neg(a), _box_neg(b))))),
    "fc1": (2, lambda a, b: iff(Box(Fc(a, b)), Or(_box_neg(a), And(Box(a), Box(b))))),
    "fc2": (2, lambda a, b: iff(Box(Not(Fc(a, b))), And(Box(a), _box_neg(b)))),
}


def axiom_instance(name: str, *args: Formula) -> Formula:
    arity, build = AXIOM_SCHEMAS[name]
    if len(args) != arity:
        raise ValueError(f"axiom {name} takes {arity} formula(s)")
    return build(*args)


# Decision

@dataclass
class Verdict:
    logic: ClassicalLogic
    formula: Formula
    theorem: bool
    countermodel: Optional[MixedModel] = None
    models_checked: int = 0

    def to_dict(self) -> dict:
        payload = {
            "logic": self.logic.value,
            "formula": to_text(self.formula),
            "verdict": "theorem" if self.theorem else "countermodel",
            "modelsChecked": self.models_checked,
        }
        if self.countermodel is not None:
            payload["countermodel"] = self.countermodel.to_dict(self.logic.profile.scheme, "w")
        return payload


def _check_language(profile: LogicProfile, formulas: Iterable[Formula]) -> List[int]:
    atoms = set()
    for f in formulas:
        if has_fc(f) and not profile.fc:
            raise IllegalConnective(f"'->>' is only available in Mf and Mf-: {to_text(f)}")
        atoms |= prop_set(f)
    return sorted(atoms)


def single_rooted_models(atoms: Iterable[int], profile: LogicProfile) -> Iterator[MixedModel]:
    """Every single-rooted model for the logic's class, z-valuation major, canonical order"""
    atoms = sorted(set(atoms))
    cls = profile.scheme.valuation_class
    for z_values in legal_valuations(atoms, cls):
        choices = []
        for j in atoms:
            if profile.faithful and z_values[j].classical:
                choices.append((z_values[j],))
            else:
                choices.append(CLASSICAL_VALUES)
        for w_tuple in product(*choices):
            yield single_rooted(dict(zip(atoms, w_tuple)), z_values, cls)


def _guard_atoms(atoms: List[int], max_atoms: int) -> None:
    if len(atoms) > max_atoms:
        raise TooManyAtoms(f"{len(atoms)} atoms exceed the enumeration limit of {max_atoms}")


def decide(logic: ClassicalLogic, f: Formula, max_atoms: int = Config.MAX_ATOMS) -> Verdict:
    """Theoremhood of f in the logic, with a minimal countermodel when it fails"""
    logic = ClassicalLogic(logic)
    profile = logic.profile
    atoms = _check_language(profile, [f])
    _guard_atoms(atoms, max_atoms)
    checked = 0
    for m in single_rooted_models(atoms, profile):
        checked += 1
        if not _eval_classical(m, "w", f, profile.scheme):
            logger.debug(f"{logic.value} refutes {to_text(f)} after {checked} models")
            return Verdict(logic, f, False, m, checked)
    return Verdict(logic, f, True, None, checked)


@dataclass
class ConsequenceVerdict:
    logic: ClassicalLogic
    gamma: Tuple[Formula, ...]
    formula: Formula
    holds: bool
    countermodel: Optional[MixedModel] = None

    def to_dict(self) -> dict:
        payload = {
            "logic": self.logic.value,
            "gamma": [to_text(g) for g in self.gamma],
            "formula": to_text(self.formula),
            "verdict": "holds" if self.holds else "countermodel",
        }
        if self.countermodel is not None:
            payload["countermodel"] = self.countermodel.to_dict(self.logic.profile.scheme, "w")
        return payload


def consequence_classical(logic: ClassicalLogic, gamma: Iterable[Formula], f: Formula,
                          max_atoms: int = Config.MAX_ATOMS) -> ConsequenceVerdict:
    """Whether truth at the classical root is preserved from gamma to f"""
    logic = ClassicalLogic(logic)
    profile = logic.profile
    gamma = tuple(gamma)
    atoms = _check_language(profile, gamma + (f,))
    _guard_atoms(atoms, max_atoms)
    for m in single_rooted_models(atoms, profile):
        if all(_eval_classical(m, "w", g, profile.scheme) for g in gamma) and \
                not _eval_classical(m, "w", f, profile.scheme):
            return ConsequenceVerdict(logic, gamma, f, False, m)
    return ConsequenceVerdict(logic, gamma, f, True)


# Faithfulness

_CLASS_SCHEME = {
    ValuationClass.FOUR_VALUED: Scheme.FDE,
    ValuationClass.CONSISTENT: Scheme.K3,
    ValuationClass.COMPLETE: Scheme.LP,
    ValuationClass.SYMMETRIC: Scheme.KS3,
}


@dataclass
class FaithfulnessReport:
    agree: bool
    axiom_side: bool
    valuation_side: bool
    failing_instances: List[Tuple[str, int]]
    unfaithful_pairs: List[Tuple[str, int]]

    def to_dict(self) -> dict:
        return {
            "agree": self.agree,
            "axiomSide": self.axiom_side,
            "valuationSide": self.valuation_side,
            "failingInstances": [[w, f"p{j}"] for w, j in self.failing_instances],
            "unfaithfulPairs": [[w, f"p{j}"] for w, j in self.unfaithful_pairs],
        }


def check_faithfulness_equivalence(m: MixedModel) -> FaithfulnessReport:
    """Compare 'faith holds for every literal at every w' with 'V is faithful'"""
    scheme = _CLASS_SCHEME[m.valuation_class]
    failing = []
    for w in m.classical_worlds:
        for j in m.atoms():
            literals = (atom(j), Not(atom(j)))
            if not all(_eval_classical(m, w, axiom_instance("faith", lit), scheme) for lit in literals):
                failing.append((w, j))
    unfaithful = m.unfaithful_pairs()
    axiom_side, valuation_side = not failing, not unfaithful
    if axiom_side != valuation_side:
        logger.error(f"faithfulness mismatch: instances {failing}, pairs {unfaithful}")
    return FaithfulnessReport(axiom_side == valuation_side, axiom_side, valuation_side, failing, unfaithful)


# Axiom audit

@dataclass
class AxiomAuditEntry:
    axiom: str
    instances: int
    failures: List[str] = field(default_factory=list)


@dataclass
class AxiomAudit:
    logic: ClassicalLogic
    bound: int
    entries: List[AxiomAuditEntry]

    @property
    def passed(self) -> bool:
        return all(not e.failures for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "logic": self.logic.value,
            "bound": self.bound,
            "passed": self.passed,
            "axioms": [
                {"axiom": e.axiom, "instances": e.instances, "failures": e.failures}
                for e in self.entries
            ],
        }


def axiom_audit(logic: ClassicalLogic, bound: int = Config.AUDIT_SIZE_BOUND,
                atoms: Iterable[int] = (0, 1)) -> AxiomAudit:
    """Instantiate each axiom schema of the logic and decide every instance"""
    logic = ClassicalLogic(logic)
    profile = logic.profile
    atoms = list(atoms)
    unary_pool = enumerate_formulas(atoms, bound, fc=profile.fc)
    # pairs grow quadratically, so binary schemas draw from one size smaller
    pair_pool = enumerate_formulas(atoms, max(bound - 1, 1), fc=profile.fc)
    entries = []
    for name in profile.axioms:
        arity, build = AXIOM_SCHEMAS[name]
        if arity == 0:
            instances = [build()]
        elif arity == 1:
            instances = [build(a) for a in unary_pool]
        else:
            instances = [build(a, b) for a in pair_pool for b in pair_pool]
        entry = AxiomAuditEntry(name, len(instances))
        for instance in instances:
            if not decide(logic, instance).theorem:
                entry.failures.append(to_text(instance))
        if entry.failures:
            logger.error(f"{logic.value}: axiom {name} fails on {len(entry.failures)} instance(s)")
        entries.append(entry)
    logger.info(f"axiom audit for {logic.value} at bound {bound}: {sum(e.instances for e in entries)} instances")
    return AxiomAudit(logic, bound, entries)
