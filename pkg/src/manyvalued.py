"""Truth values, lattice orders and evaluation schemata at nonclassical worlds.

Lattice meets and joins are precomputed numpy tables indexed by value code.
The internal logics over idiosyncratic frames are decided by enumerating
valuations at a single reflexive world, where [] is transparent.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .exceptions import IllegalConnective, IllegalValueForScheme, InvalidModel
from .syntax import (
    And, Atom, Bot, Box, Fc, Formula, Not, Or, Top, has_fc, is_box_free, prop_set, to_text,
)
from .utils import atom_name

logger = logging.getLogger(__name__)


class TruthValue(str, Enum):
    ZERO = "0"
    ONE = "1"
    N = "n"
    B = "b"

    @property
    def designated(self) -> bool:
        return self in (TruthValue.ONE, TruthValue.B)

    @property
    def classical(self) -> bool:
        return self in (TruthValue.ZERO, TruthValue.ONE)

    @property
    def code(self) -> int:
        return _CODE[self]

    def negate(self) -> "TruthValue":
        return _NEGATION.get(self, self)

    @classmethod
    def parse(cls, text) -> "TruthValue":
        return cls(str(text).strip().lower())


_CODE = {TruthValue.ZERO: 0, TruthValue.ONE: 1, TruthValue.N: 2, TruthValue.B: 3}
_BY_CODE = {code: v for v, code in _CODE.items()}
_NEGATION = {TruthValue.ZERO: TruthValue.ONE, TruthValue.ONE: TruthValue.ZERO}

# Countermodels are minimal in this per-atom order
CANONICAL_ORDER = (TruthValue.N, TruthValue.B, TruthValue.ZERO, TruthValue.ONE)
CLASSICAL_VALUES = (TruthValue.ZERO, TruthValue.ONE)


class LatticeOrder:
    """A partial order on truth values given by meet/join tables (-1 marks undefined)"""

    def __init__(self, tag: str, meet_table: np.ndarray, join_table: np.ndarray):
        self.tag = tag
        self.meet_table = meet_table
        self.join_table = join_table

    def _lookup(self, table: np.ndarray, a: TruthValue, b: TruthValue) -> TruthValue:
        code = int(table[a.code, b.code])
        if code < 0:
            raise IllegalValueForScheme(f"{a.value} and {b.value} are not comparable in the {self.tag} order")
        return _BY_CODE[code]

    def meet(self, a: TruthValue, b: TruthValue) -> TruthValue:
        return self._lookup(self.meet_table, a, b)

    def join(self, a: TruthValue, b: TruthValue) -> TruthValue:
        return self._lookup(self.join_table, a, b)

    def inf(self, values: Iterable[TruthValue]) -> TruthValue:
        """Infimum; the infimum of nothing is the top element 1"""
        result = TruthValue.ONE
        for v in values:
            result = self.meet(result, v)
        return result


def _table(pairs: Dict[Tuple[TruthValue, TruthValue], TruthValue]) -> np.ndarray:
    table = np.full((4, 4), -1, dtype=np.int8)
    for (a, b), v in pairs.items():
        table[a.code, b.code] = v.code
        table[b.code, a.code] = v.code
    return table


def _logic_order() -> LatticeOrder:
    z, o, n, b = TruthValue.ZERO, TruthValue.ONE, TruthValue.N, TruthValue.B
    meet, join = {}, {}
    for x in TruthValue:
        meet[(z, x)], join[(z, x)] = z, x
        meet[(o, x)], join[(o, x)] = x, o
        meet[(x, x)], join[(x, x)] = x, x
    meet[(n, b)], join[(n, b)] = z, o
    return LatticeOrder("logic", _table(meet), _table(join))


def _weak_order() -> LatticeOrder:
    # linear n < 0 < 1; b has no place in it
    ranked = [TruthValue.N, TruthValue.ZERO, TruthValue.ONE]
    meet, join = {}, {}
    for i, x in enumerate(ranked):
        for y in ranked[i:]:
            meet[(x, y)], join[(x, y)] = x, y
    return LatticeOrder("weak", _table(meet), _table(join))


LOGIC_ORDER = _logic_order()
WEAK_ORDER = _weak_order()


class ValuationClass(str, Enum):
    FOUR_VALUED = "fourValued"
    CONSISTENT = "consistent"
    COMPLETE = "complete"
    SYMMETRIC = "symmetric"

    def admits(self, values: Iterable[TruthValue]) -> bool:
        """Whether the values assigned at one world fit the class"""
        present = set(values)
        if self is ValuationClass.FOUR_VALUED:
            return True
        if self is ValuationClass.CONSISTENT:
            return TruthValue.B not in present
        if self is ValuationClass.COMPLETE:
            return TruthValue.N not in present
        return not (TruthValue.N in present and TruthValue.B in present)

    def polarity_of(self, values: Iterable[TruthValue]) -> "ValuationClass":
        """For symmetric valuations, the class one world actually falls in"""
        if self is not ValuationClass.SYMMETRIC:
            return self
        if TruthValue.B in set(values):
            return ValuationClass.COMPLETE
        return ValuationClass.CONSISTENT


class Scheme(str, Enum):
    FDE = "fde"
    K3 = "k3"
    LP = "lp"
    KS3 = "ks3"
    B3 = "b3"
    F3 = "f3"

    @property
    def weak(self) -> bool:
        return self in (Scheme.B3, Scheme.F3)

    @property
    def order(self) -> LatticeOrder:
        return WEAK_ORDER if self.weak else LOGIC_ORDER

    @property
    def valuation_class(self) -> ValuationClass:
        return _SCHEME_CLASS[self]

    @property
    def allows_fc(self) -> bool:
        return self is Scheme.F3


_SCHEME_CLASS = {
    Scheme.FDE: ValuationClass.FOUR_VALUED,
    Scheme.K3: ValuationClass.CONSISTENT,
    Scheme.LP: ValuationClass.COMPLETE,
    Scheme.KS3: ValuationClass.SYMMETRIC,
    Scheme.B3: ValuationClass.CONSISTENT,
    Scheme.F3: ValuationClass.CONSISTENT,
}


def check_formula_for_scheme(f: Formula, scheme: Scheme) -> None:
    if has_fc(f) and not scheme.allows_fc:
        raise IllegalConnective(f"'->>' needs the f3 scheme, got {scheme.value}: {to_text(f)}")


@dataclass
class PlainModel:
    """A model (Z, R, V) over an arbitrary frame"""
    worlds: Tuple[Hashable, ...]
    relation: FrozenSet[Tuple[Hashable, Hashable]]
    valuation: Dict[Hashable, Dict[int, TruthValue]]
    successors: Dict[Hashable, Tuple[Hashable, ...]] = field(init=False, repr=False)

    def __post_init__(self):
        world_set = set(self.worlds)
        succ = {u: [] for u in self.worlds}
        for u, v in sorted(self.relation, key=repr):
            if u not in world_set or v not in world_set:
                raise InvalidModel(f"relation pair ({u}, {v}) leaves the set of worlds")
            succ[u].append(v)
        self.successors = {u: tuple(vs) for u, vs in succ.items()}

    def value(self, atom_index: int, world: Hashable) -> TruthValue:
        try:
            return self.valuation[world][atom_index]
        except KeyError:
            raise InvalidModel(f"no value for {atom_name(atom_index)} at world {world}") from None

    def check_legal(self, scheme: Scheme) -> None:
        cls = scheme.valuation_class
        for u in self.worlds:
            values = self.valuation.get(u, {}).values()
            if not cls.admits(values):
                raise IllegalValueForScheme(
                    f"valuation at {u} is not {cls.value}: {sorted(v.value for v in values)}"
                )

    def polarity(self, world: Hashable) -> ValuationClass:
        return ValuationClass.SYMMETRIC.polarity_of(self.valuation.get(world, {}).values())


def idiosyncratic_model(valuation: Dict[int, TruthValue], world: Hashable = "z") -> PlainModel:
    """A single world that sees exactly itself"""
    return PlainModel((world,), frozenset([(world, world)]), {world: dict(valuation)})


def fc_clause(a: TruthValue, b: TruthValue) -> TruthValue:
    """The f3 conditional: 1 if a is 0 or both are 1; 0 if a is 1 and b is 0; else n"""
    if a is TruthValue.ZERO or WEAK_ORDER.meet(a, b) is TruthValue.ONE:
        return TruthValue.ONE
    if a is TruthValue.ONE and b is TruthValue.ZERO:
        return TruthValue.ZERO
    return TruthValue.N


def apply_connective(f: Formula, values: Sequence[TruthValue], s: Scheme) -> TruthValue:
    """Value of a non-modal compound from the values of its immediate parts"""
    if isinstance(f, Not):
        return values[0].negate()
    if isinstance(f, And):
        return s.order.meet(values[0], values[1])
    if isinstance(f, Or):
        if s.weak:
            return WEAK_ORDER.meet(values[0].negate(), values[1].negate()).negate()
        return LOGIC_ORDER.join(values[0], values[1])
    if isinstance(f, Fc):
        if not s.allows_fc:
            raise IllegalConnective(f"'->>' needs the f3 scheme, got {s.value}")
        return fc_clause(values[0], values[1])
    raise TypeError(f"not a compound formula: {f!r}")


def _evaluate(m: PlainModel, world: Hashable, f: Formula, s: Scheme) -> TruthValue:
    if isinstance(f, Atom):
        return m.value(f.index, world)
    if isinstance(f, Top):
        return TruthValue.ONE
    if isinstance(f, Bot):
        return TruthValue.ZERO
    if isinstance(f, Box):
        return s.order.inf(_evaluate(m, v, f.sub, s) for v in m.successors[world])
    if isinstance(f, Not):
        return apply_connective(f, (_evaluate(m, world, f.sub, s),), s)
    return apply_connective(f, (_evaluate(m, world, f.left, s), _evaluate(m, world, f.right, s)), s)


def evaluate(m: PlainModel, world: Hashable, f: Formula, s: Scheme) -> TruthValue:
    """Value of f at a world of a plain model under scheme s"""
    s = Scheme(s)
    check_formula_for_scheme(f, s)
    m.check_legal(s)
    return _evaluate(m, world, f, s)


def legal_valuations(atoms: Iterable[int], valuation_class: ValuationClass) -> Iterator[Dict[int, TruthValue]]:
    """Valuations of one world over the atoms, in canonical lexicographic order"""
    atoms = sorted(set(atoms))
    for values in product(CANONICAL_ORDER, repeat=len(atoms)):
        if valuation_class.admits(values):
            yield dict(zip(atoms, values))


@dataclass
class ConsequenceResult:
    holds: bool
    witness: Optional[Dict[int, TruthValue]] = None
    checked: int = 0


def internal_consequence(gamma: Iterable[Formula], delta: Iterable[Formula], s: Scheme) -> ConsequenceResult:
    """Decide gamma |= delta over s-models on idiosyncratic frames"""
    s = Scheme(s)
    gamma, delta = list(gamma), list(delta)
    atoms = set()
    for f in gamma + delta:
        check_formula_for_scheme(f, s)
        atoms |= prop_set(f)
    checked = 0
    for valuation in legal_valuations(atoms, s.valuation_class):
        checked += 1
        m = idiosyncratic_model(valuation)
        if all(_evaluate(m, "z", g, s).designated for g in gamma) and \
                not any(_evaluate(m, "z", d, s).designated for d in delta):
            logger.debug(f"internal consequence fails in {s.value} at {valuation}")
            return ConsequenceResult(False, valuation, checked)
    return ConsequenceResult(True, None, checked)


def eval_truth_table(f: Formula, s: Scheme) -> pd.DataFrame:
    """Value table of a box-free formula over all legal valuations of its atoms"""
    s = Scheme(s)
    if not is_box_free(f):
        raise ValueError(f"truth tables are for box-free formulas: {to_text(f)}")
    check_formula_for_scheme(f, s)
    atoms = sorted(prop_set(f))
    rows = []
    for valuation in legal_valuations(atoms, s.valuation_class):
        value = _evaluate(idiosyncratic_model(valuation), "z", f, s)
        row = {atom_name(j): valuation[j].value for j in atoms}
        row["value"] = value.value
        rows.append(row)
    return pd.DataFrame(rows, columns=[atom_name(j) for j in atoms] + ["value"])


def truth_table_json(f: Formula, s: Scheme) -> dict:
    table = eval_truth_table(f, s)
    atoms = [c for c in table.columns if c != "value"]
    rows = [
        {"v": {a: record[a] for a in atoms}, "value": record["value"]}
        for record in table.to_dict(orient="records")
    ]
    return {"atoms": atoms, "rows": rows}


def value_column(f: Formula, s: Scheme) -> List[TruthValue]:
    """Just the value column of the truth table"""
    return [TruthValue(v) for v in eval_truth_table(f, s)["value"]]
