"""Truth realizations of modal formulas and the bridges from mixed models to fixed points."""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional

import pyparsing as pp

from .exceptions import RealizationError
from .kftruth import FixedPoint, Jump, SentenceUniverse, classical_sat, lfp, liar_seed
from .manyvalued import Scheme, TruthValue
from .mixed import MixedModel, eval_mixed
from .syntax import (
    And, Atom, Bot, Box, Fc, Formula, Not, Or, Top, prop_set, sort_formulas, subformulas, to_text,
)
from .utils import atom_name

logger = logging.getLogger(__name__)

JUMP_FOR_SCHEME = {
    Scheme.FDE: Jump.SK, Scheme.KS3: Jump.SK, Scheme.K3: Jump.SK, Scheme.LP: Jump.SK,
    Scheme.B3: Jump.WK, Scheme.F3: Jump.AF,
}

REALIZATION_KINDS = ("witness", "circ", "dagger", "dagger-printed")


@dataclass
class Realization:
    universe: SentenceUniverse
    mapping: Dict[int, int]
    kind: str = "custom"

    def of(self, j: int) -> int:
        if j not in self.mapping:
            raise RealizationError(f"the realization does not cover {atom_name(j)}")
        return self.mapping[j]

    def to_dict(self) -> Dict[str, str]:
        return {atom_name(j): self.universe.form(sid) for j, sid in sorted(self.mapping.items())}


def translate(star: Realization, f: Formula) -> int:
    """Structural translation; [] becomes T applied to the code of the translated body"""
    u = star.universe
    if isinstance(f, Atom):
        return star.of(f.index)
    if isinstance(f, Top):
        return u.verum()
    if isinstance(f, Bot):
        return u.falsum()
    if isinstance(f, Not):
        return u.neg(translate(star, f.sub))
    if isinstance(f, Box):
        return u.tr(translate(star, f.sub))
    left, right = translate(star, f.left), translate(star, f.right)
    if isinstance(f, And):
        return u.conj(left, right)
    if isinstance(f, Or):
        return u.disj(left, right)
    if isinstance(f, Fc):
        return u.fc(left, right)
    raise TypeError(f"not a formula: {f!r}")


def witness_realization(u: SentenceUniverse, atoms: Iterable[int]) -> Realization:
    """p_j -> t_2j /\\ ~t_2j+1"""
    mapping = {}
    for j in sorted(set(atoms)):
        even, odd = u.truth_teller(2 * j), u.truth_teller(2 * j + 1)
        mapping[j] = u.conj(even, u.neg(odd))
    return Realization(u, mapping, "witness")


def _single_root(m: MixedModel):
    if len(m.classical_worlds) != 1 or len(m.nonclassical_worlds) != 1:
        raise RealizationError("realizations are built from single-rooted models")
    w, z = m.classical_worlds[0], m.nonclassical_worlds[0]
    return m.valuation[w], m.valuation[z]


def seed_from_model(m: MixedModel, u: SentenceUniverse, scheme: Scheme, atoms: Optional[Iterable[int]] = None):
    """Truth-teller literals read off the model, one clause per literal kind.

    Only the fde, ks3, k3 and lp schemes are read this way; the weak schemes
    have no truth-teller clauses.

    t_2j iff w |- p_j or z |- p_j;  ~t_2j iff z |- ~p_j;
    t_2j+1 iff w |- ~p_j and z |- p_j;  ~t_2j+1 iff z |- p_j.
    """
    scheme = Scheme(scheme)
    if scheme.weak:
        raise RealizationError(f"truth-teller seeds cover the fde, ks3, k3 and lp schemes, not {scheme.value}")
    v_w, v_z = _single_root(m)
    atoms = sorted(set(m.atoms() if atoms is None else atoms))
    seed = set()
    for j in atoms:
        if j not in v_z or j not in v_w:
            raise RealizationError(f"the model has no value for {atom_name(j)}")
        z_pos, z_neg = v_z[j].designated, v_z[j].negate().designated
        w_pos = v_w[j] is TruthValue.ONE
        even, odd = u.truth_teller(2 * j), u.truth_teller(2 * j + 1)
        if w_pos or z_pos:
            seed.add(even)
        if z_neg:
            seed.add(u.negation_of(even))
        if not w_pos and z_pos:
            seed.add(odd)
        if z_pos:
            seed.add(u.negation_of(odd))
    return frozenset(seed)


def _circ_case(u: SentenceUniverse, w: TruthValue, z: TruthValue) -> int:
    if z is TruthValue.B:
        raise RealizationError("the circ realization needs a consistent valuation")
    if z is TruthValue.ONE:
        return u.verum()
    if z is TruthValue.N:
        return u.liar() if w is TruthValue.ONE else u.neg(u.liar())
    return u.falsum()


def _dagger_case(u: SentenceUniverse, w: TruthValue, z: TruthValue, printed: bool) -> int:
    if z is TruthValue.N:
        raise RealizationError("the dagger realization needs a complete valuation")
    if z is TruthValue.ZERO:
        return u.falsum()
    if z is TruthValue.B:
        return u.neg(u.liar()) if w is TruthValue.ONE else u.liar()
    # the printed table sends V_z(p)=1 to 0=1 as well
    return u.falsum() if printed else u.verum()


def circ_realization(m: MixedModel, kind: str, u: Optional[SentenceUniverse] = None) -> Realization:
    """Realizations by fixed sentences: circ for consistent, dagger for complete valuations"""
    if kind not in ("circ", "dagger", "dagger-printed"):
        raise RealizationError(f"unknown realization kind {kind!r}")
    u = u if u is not None else SentenceUniverse()
    u.liar()
    v_w, v_z = _single_root(m)
    mapping = {}
    for j in sorted(v_z):
        if kind == "circ":
            mapping[j] = _circ_case(u, v_w[j], v_z[j])
        else:
            mapping[j] = _dagger_case(u, v_w[j], v_z[j], printed=kind == "dagger-printed")
    return Realization(u, mapping, kind)


# Surface syntax for user realizations

def _surface_grammar() -> pp.ParserElement:
    teller = pp.Regex(r"t(\d+)").set_parse_action(lambda t: _leaf(lambda u, i=int(t[0][1:]): u.truth_teller(i)))
    liar = pp.Keyword("lam").set_parse_action(lambda t: _leaf(lambda u: u.liar()))
    equation = pp.Regex(r"(\d+)\s*=\s*(\d+)").set_parse_action(
        lambda t: _leaf(lambda u, m=t[0]: u.eq(*(int(x) for x in m.split("="))))
    )
    operand = teller | liar | equation
    return pp.infix_notation(operand, [
        (pp.Literal("~"), 1, pp.OpAssoc.RIGHT, _unary),
        (pp.Literal("/\\"), 2, pp.OpAssoc.LEFT, _binary("conj")),
        (pp.Literal("\\/"), 2, pp.OpAssoc.LEFT, _binary("disj")),
        (pp.Literal("->>"), 2, pp.OpAssoc.RIGHT, _binary("fc")),
    ])


Build = Callable[[SentenceUniverse], int]


def _leaf(build: Build) -> List[Build]:
    return [build]


def _unary(tokens) -> Build:
    items = list(tokens[0])
    inner = items[-1]
    count = len(items) - 1

    def build(u):
        sid = inner(u)
        for _ in range(count):
            sid = u.neg(sid)
        return sid
    return build


def _binary(method: str):
    def action(tokens) -> Build:
        items = list(tokens[0])
        operands = items[::2]

        def build(u):
            ids = [part(u) for part in operands]
            if method == "fc":
                result = ids[-1]
                for sid in reversed(ids[:-1]):
                    result = u.fc(sid, result)
                return result
            result = ids[0]
            for sid in ids[1:]:
                result = getattr(u, method)(result, sid)
            return result
        return build
    return action


_SURFACE = None


def parse_sentence(u: SentenceUniverse, text: str) -> int:
    """Parse t<i>, lam, m=n, ~, /\\, \\/, ->> into the universe; T(...) is rejected"""
    global _SURFACE
    if "T(" in text.replace(" ", ""):
        raise RealizationError("codes are internal; write sentences without T(...)")
    if _SURFACE is None:
        _SURFACE = _surface_grammar()
    try:
        build = _SURFACE.parse_string(text, parse_all=True)[0]
    except pp.ParseException as e:
        raise RealizationError(f"cannot parse sentence {text!r}: {e.msg} at column {e.col}") from e
    return build(u)


def load_realization(u: SentenceUniverse, data: Dict[str, str]) -> Realization:
    """Realization from a {"p0": "t0 /\\ ~t1", ...} mapping"""
    mapping = {}
    for key, text in data.items():
        if not (key.startswith("p") and key[1:].isdigit()):
            raise RealizationError(f"realization keys are atoms p<i>, got {key!r}")
        mapping[int(key[1:])] = parse_sentence(u, text)
    return Realization(u, mapping, "custom")


# Bridges

@dataclass
class BridgeEntry:
    formula: str
    translation: str
    z_designated: bool
    in_fixed_point: bool
    w_true: bool
    classical: bool

    @property
    def z_agrees(self) -> bool:
        return self.z_designated == self.in_fixed_point

    @property
    def w_preserved(self) -> bool:
        return self.classical or not self.w_true

    @property
    def passed(self) -> bool:
        return self.z_agrees and self.w_preserved


@dataclass
class BridgeReport:
    mode: str
    scheme: Scheme
    formula: str
    realization: Dict[str, str]
    fixed_point: FixedPoint
    entries: List[BridgeEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "scheme": self.scheme.value,
            "formula": self.formula,
            "passed": self.passed,
            "realization": self.realization,
            "jump": self.fixed_point.tag.value,
            "consistent": self.fixed_point.consistent,
            "entries": [
                {
                    "formula": e.formula, "translation": e.translation,
                    "zDesignated": e.z_designated, "inFixedPoint": e.in_fixed_point,
                    "wTrue": e.w_true, "classicallyTrue": e.classical, "passed": e.passed,
                }
                for e in self.entries
            ],
        }


_DEFAULT_SCHEME = {
    "witness": Scheme.FDE, "circ": Scheme.K3, "dagger": Scheme.LP, "dagger-printed": Scheme.LP,
}


def build_bridge(m: MixedModel, f: Formula, mode: str, scheme: Optional[Scheme] = None,
                 star: Optional[Realization] = None):
    """Realization, translated subformulas and the fixed point used to check them"""
    if mode not in REALIZATION_KINDS and star is None:
        raise RealizationError(f"unknown realization mode {mode!r}")
    scheme = Scheme(scheme or _DEFAULT_SCHEME.get(mode, Scheme.FDE))
    tag = JUMP_FOR_SCHEME[scheme]
    u = star.universe if star is not None else SentenceUniverse()
    parts = sort_formulas(set(subformulas(f)))
    missing = prop_set(f) - set(m.atoms())
    if missing:
        raise RealizationError(f"the model has no value for {[atom_name(j) for j in sorted(missing)]}")
    if star is None and mode == "witness":
        star = witness_realization(u, m.atoms())
        seed = seed_from_model(m, u, scheme)
        translations = {g: translate(star, g) for g in parts}
    elif star is None:
        star = circ_realization(m, mode, u)
        translations = {g: translate(star, g) for g in parts}
        seed = liar_seed(u, "glut") if mode.startswith("dagger") else frozenset()
    else:
        translations = {g: translate(star, g) for g in parts}
        seed = frozenset()
    return star, translations, lfp(u, tag, seed), scheme


def verify_bridge(m: MixedModel, f: Formula, mode: str = "witness", scheme: Optional[Scheme] = None,
                  star: Optional[Realization] = None) -> BridgeReport:
    """For each subformula: z designates it iff its translation is in S, and truth at w carries over"""
    star, translations, fp, scheme = build_bridge(m, f, mode, scheme, star)
    report = BridgeReport(mode, scheme, to_text(f), star.to_dict(), fp)
    w, z = m.classical_worlds[0], m.nonclassical_worlds[0]
    for g, sid in translations.items():
        entry = BridgeEntry(
            formula=to_text(g),
            translation=fp.universe.form(sid),
            z_designated=eval_mixed(m, z, g, scheme).designated,
            in_fixed_point=sid in fp,
            w_true=eval_mixed(m, w, g, scheme) is TruthValue.ONE,
            classical=classical_sat(fp, sid),
        )
        if not entry.passed:
            logger.warning(f"{mode} bridge fails on {entry.formula} in {m.to_dict()}")
        report.entries.append(entry)
    return report
