"""Quantifier-free truth-theoretic sentences over finite universes and their Kripke jumps.

Sentences are interned in a SentenceUniverse; a code is a table index, so
T(c) refers to the sentence at position c.  Truth-tellers and the liar are
built self-referentially.  Fixed points of the strong Kleene (sk), weak
Kleene (wk) and Aczel-Feferman (af) jumps are computed by seeded iteration.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .exceptions import NotAFixedPoint, UniverseError

logger = logging.getLogger(__name__)


class Kind(str, Enum):
    EQ = "eq"
    TR = "tr"
    NEG = "neg"
    CONJ = "conj"
    DISJ = "disj"
    FC = "fc"


@dataclass(frozen=True)
class TSentence:
    kind: Kind
    # numerals for EQ, a code for TR, sentence ids otherwise
    args: Tuple[int, ...]


class Jump(str, Enum):
    SK = "sk"
    WK = "wk"
    AF = "af"

    @property
    def guarded(self) -> bool:
        return self is not Jump.SK


class SentenceUniverse:
    """A finite table of sentences closed under the jump clauses' lookups.

    Closure: T(c) brings in sentence c and its negation; compounds bring in
    the negations of their components; a negated compound brings in the
    components and their negations.  A disjunction b \\/ c also brings in
    ~b /\\ ~c, its normal form under the jump.
    """

    def __init__(self):
        self.table: List[TSentence] = []
        self.index: Dict[TSentence, int] = {}
        self.labels: Dict[int, str] = {}
        self.truth_tellers: Dict[int, int] = {}
        self.liar_id: Optional[int] = None

    def __len__(self) -> int:
        return len(self.table)

    def __contains__(self, sid: int) -> bool:
        return isinstance(sid, int) and 0 <= sid < len(self.table)

    def __getitem__(self, sid: int) -> TSentence:
        if sid not in self:
            raise UniverseError(f"no sentence with id {sid}")
        return self.table[sid]

    def _store(self, s: TSentence) -> int:
        sid = len(self.table)
        self.table.append(s)
        self.index[s] = sid
        return sid

    def _add(self, s: TSentence) -> int:
        if s in self.index:
            return self.index[s]
        for ref in (s.args if s.kind is not Kind.EQ else ()):
            if ref not in self:
                raise UniverseError(f"sentence refers to unknown id {ref}")
        sid = self._store(s)
        self._close(sid)
        return sid

    def _close(self, sid: int) -> None:
        s = self.table[sid]
        if s.kind is Kind.TR:
            self.neg(s.args[0])
        elif s.kind in (Kind.CONJ, Kind.DISJ, Kind.FC):
            for part in s.args:
                self.neg(part)
            if s.kind is Kind.DISJ:
                # b \/ c is jumped as ~(~b /\ ~c)
                self.conj(self.neg(s.args[0]), self.neg(s.args[1]))
        elif s.kind is Kind.NEG:
            inner = self.table[s.args[0]]
            if inner.kind in (Kind.CONJ, Kind.DISJ, Kind.FC):
                for part in inner.args:
                    self.neg(part)

    # constructors

    def eq(self, m: int, n: int) -> int:
        return self._add(TSentence(Kind.EQ, (m, n)))

    def verum(self) -> int:
        return self.eq(0, 0)

    def falsum(self) -> int:
        return self.eq(0, 1)

    def tr(self, code: int) -> int:
        return self._add(TSentence(Kind.TR, (code,)))

    def neg(self, sid: int) -> int:
        return self._add(TSentence(Kind.NEG, (sid,)))

    def conj(self, a: int, b: int) -> int:
        return self._add(TSentence(Kind.CONJ, (a, b)))

    def disj(self, a: int, b: int) -> int:
        return self._add(TSentence(Kind.DISJ, (a, b)))

    def fc(self, a: int, b: int) -> int:
        return self._add(TSentence(Kind.FC, (a, b)))

    def truth_teller(self, i: int) -> int:
        """tau_i: the sentence T(k) sitting at id k"""
        if i in self.truth_tellers:
            return self.truth_tellers[i]
        k = len(self.table)
        self._store(TSentence(Kind.TR, (k,)))
        self.truth_tellers[i] = k
        self.labels[k] = f"t{i}"
        self._close(k)
        return k

    def liar(self) -> int:
        """lambda: the sentence ~T(l) sitting at id l"""
        if self.liar_id is not None:
            return self.liar_id
        l = len(self.table)
        self._store(TSentence(Kind.NEG, (l + 1,)))
        self._store(TSentence(Kind.TR, (l,)))
        self.liar_id = l
        self.labels[l] = "lam"
        self._close(l + 1)
        self._close(l)
        return l

    # lookups

    def negation_of(self, sid: int) -> int:
        s = TSentence(Kind.NEG, (sid,))
        if s not in self.index:
            raise UniverseError(f"the negation of {self.form(sid)} is not in the universe")
        return self.index[s]

    def has_fc(self) -> bool:
        return any(s.kind is Kind.FC for s in self.table)

    def form(self, sid: int) -> str:
        s = self[sid]
        if s.kind is Kind.EQ:
            return f"{s.args[0]}={s.args[1]}"
        if s.kind is Kind.TR:
            return f"T({s.args[0]})"
        if s.kind is Kind.NEG:
            return f"not {self.form(s.args[0])}"
        symbol = {Kind.CONJ: "and", Kind.DISJ: "or", Kind.FC: "->>"}[s.kind]
        return f"({self.form(s.args[0])} {symbol} {self.form(s.args[1])})"

    def label(self, sid: int) -> str:
        """Short name: t<i>, lam, or the form"""
        if sid in self.labels:
            return self.labels[sid]
        s = self[sid]
        if s.kind is Kind.NEG and s.args[0] in self.labels:
            return f"~{self.labels[s.args[0]]}"
        return self.form(sid)

    def check_subset(self, ids: Iterable[int]) -> FrozenSet[int]:
        ids = frozenset(ids)
        missing = sorted(i for i in ids if i not in self)
        if missing:
            raise UniverseError(f"ids {missing} are not in the universe")
        return ids

    def to_dict(self) -> List[dict]:
        return [{"id": i, "form": self.form(i), "label": self.label(i)} for i in range(len(self.table))]


def truth_teller_universe(count: int) -> SentenceUniverse:
    u = SentenceUniverse()
    for i in range(count):
        u.truth_teller(i)
    return u


def liar_universe() -> SentenceUniverse:
    u = SentenceUniverse()
    u.liar()
    return u


# Jumps

def _determined(u: SentenceUniverse, s: FrozenSet[int], sid: int) -> bool:
    return sid in s or u.negation_of(sid) in s


def _negated_conj(u: SentenceUniverse, tag: Jump, s: FrozenSet[int], b: int, c: int) -> bool:
    """~(b /\\ c); the guarded jumps also need b and c determined"""
    found = u.negation_of(b) in s or u.negation_of(c) in s
    if tag.guarded:
        found = found and _determined(u, s, b) and _determined(u, s, c)
    return found


def _normal_form(u: SentenceUniverse, b: int, c: int) -> int:
    """Id of ~b /\\ ~c, present whenever b \\/ c is"""
    return u.index[TSentence(Kind.CONJ, (u.negation_of(b), u.negation_of(c)))]


def _in_jump(u: SentenceUniverse, tag: Jump, s: FrozenSet[int], sid: int) -> bool:
    sentence = u.table[sid]
    kind, args = sentence.kind, sentence.args
    if kind is Kind.EQ:
        return args[0] == args[1]
    if kind is Kind.TR:
        return args[0] in s
    if kind is Kind.CONJ:
        return args[0] in s and args[1] in s
    if kind is Kind.DISJ:
        b, c = args
        return _negated_conj(u, tag, s, u.negation_of(b), u.negation_of(c))
    if kind is Kind.FC:
        b, c = args
        return u.negation_of(b) in s or (b in s and c in s)
    # negations
    inner = u.table[args[0]]
    if inner.kind is Kind.EQ:
        return inner.args[0] != inner.args[1]
    if inner.kind is Kind.TR:
        return u.negation_of(inner.args[0]) in s
    if inner.kind is Kind.NEG:
        return inner.args[0] in s
    b, c = inner.args
    if inner.kind is Kind.CONJ:
        return _negated_conj(u, tag, s, b, c)
    if inner.kind is Kind.DISJ:
        return _normal_form(u, b, c) in s
    return b in s and u.negation_of(c) in s


def jump(u: SentenceUniverse, tag: Jump, s: Iterable[int]) -> FrozenSet[int]:
    """One application of the jump, restricted to the universe"""
    tag = Jump(tag)
    s = u.check_subset(s)
    if u.has_fc() and tag is not Jump.AF:
        raise UniverseError(f"'->>' sentences need the af jump, got {tag.value}")
    return frozenset(sid for sid in range(len(u)) if _in_jump(u, tag, s, sid))


@dataclass
class FixedPoint:
    universe: SentenceUniverse
    members: FrozenSet[int]
    tag: Jump
    seed: FrozenSet[int] = field(default_factory=frozenset)
    iterations: int = 0

    def __contains__(self, sid: int) -> bool:
        return sid in self.members

    @property
    def consistent(self) -> bool:
        return not any(self.universe.negation_of(sid) in self.members
                       for sid in self.members if TSentence(Kind.NEG, (sid,)) in self.universe.index)

    @property
    def complete_over_universe(self) -> bool:
        """Every sentence whose negation is also in the universe is decided"""
        u = self.universe
        for sid in range(len(u)):
            neg = TSentence(Kind.NEG, (sid,))
            if neg in u.index and sid not in self.members and u.index[neg] not in self.members:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "sentences": self.universe.to_dict(),
            "S": sorted(self.members),
            "seed": sorted(self.seed),
            "jump": self.tag.value,
            "consistent": self.consistent,
            "completeOverU": self.complete_over_universe,
            "iterations": self.iterations,
        }


def lfp(u: SentenceUniverse, tag: Jump, seed: Iterable[int] = ()) -> FixedPoint:
    """Iterate S = seed | jump(S) from the seed and verify the limit is a fixed point"""
    tag = Jump(tag)
    seed = u.check_subset(seed)
    current, iterations = seed, 0
    while True:
        iterations += 1
        following = seed | jump(u, tag, current)
        if following == current:
            break
        current = following
    if jump(u, tag, current) != current:
        extra = sorted(current - jump(u, tag, current))
        raise NotAFixedPoint(f"seed members {[u.label(i) for i in extra]} are not supported by the {tag.value} jump")
    logger.debug(f"{tag.value} fixed point with {len(current)} members after {iterations} rounds")
    return FixedPoint(u, current, tag, seed, iterations)


def liar_seed(u: SentenceUniverse, kind: str) -> FrozenSet[int]:
    """'gap' leaves the liar undecided; 'glut' puts both the liar and its negation in"""
    l = u.liar()
    if kind == "gap":
        return frozenset()
    if kind == "glut":
        return frozenset([l, u.negation_of(l)])
    raise ValueError(f"liar seed kind must be 'gap' or 'glut', got {kind!r}")


def parse_seed(u: SentenceUniverse, text: str) -> FrozenSet[int]:
    """'+t0,-t1' -> {tau_0, ~tau_1}; 'lam' names the liar"""
    ids: Set[int] = set()
    for item in (part.strip() for part in text.split(",")):
        if not item:
            continue
        sign, name = (item[0], item[1:]) if item[0] in "+-" else ("+", item)
        if name == "lam":
            sid = u.liar()
        elif name.startswith("t") and name[1:].isdigit():
            sid = u.truth_teller(int(name[1:]))
        else:
            raise UniverseError(f"seed items are t<i> or lam, got {item!r}")
        ids.add(sid if sign == "+" else u.negation_of(sid))
    return frozenset(ids)


def enumerate_fixed_points(u: SentenceUniverse, tag: Jump) -> List[FixedPoint]:
    """Fixed points reachable from every truth-teller literal seed, plus both liar seeds"""
    tag = Jump(tag)
    tellers = [u.truth_tellers[i] for i in sorted(u.truth_tellers)]
    choices = []
    for k in tellers:
        neg = u.negation_of(k)
        choices.append([(), (k,), (neg,), (k, neg)])
    liar_options = [frozenset()]
    if u.liar_id is not None:
        liar_options.append(liar_seed(u, "glut"))
    found: Dict[FrozenSet[int], FixedPoint] = {}
    for combo in product(*choices):
        base = frozenset(sid for part in combo for sid in part)
        for extra in liar_options:
            fp = lfp(u, tag, base | extra)
            found.setdefault(fp.members, fp)
    logger.info(f"{len(found)} distinct {tag.value} fixed points over {len(u)} sentences")
    return [found[key] for key in sorted(found, key=lambda m: (len(m), sorted(m)))]


def classical_sat(fp: FixedPoint, sid: int) -> bool:
    """Classical truth in the model whose truth predicate is fp; ->> is material"""
    u = fp.universe
    s = u[sid]
    if s.kind is Kind.EQ:
        return s.args[0] == s.args[1]
    if s.kind is Kind.TR:
        return s.args[0] in fp.members
    if s.kind is Kind.NEG:
        return not classical_sat(fp, s.args[0])
    left, right = (classical_sat(fp, part) for part in s.args)
    if s.kind is Kind.CONJ:
        return left and right
    if s.kind is Kind.DISJ:
        return left or right
    return (not left) or right
