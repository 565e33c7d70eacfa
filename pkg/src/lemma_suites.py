"""Bounded verification suites for the metatheory of the toolkit's logics.

Each suite sweeps every model or formula up to a size bound and reports the
instances that break the property it checks.  The bound is a formula size
over atoms p0, p1, except in faith and modfxp, where it counts atoms (at most two).
"""
import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from config.config import Config

from .calculi import BaseLogic, CalculusId, DerivationSampler, ModalKind, check_derivation, weaken
from .exceptions import BudgetExceeded, RealizationError, UnknownSuite
from .kftruth import Jump, SentenceUniverse, classical_sat, enumerate_fixed_points, lfp, truth_teller_universe
from .manyvalued import (
    CLASSICAL_VALUES, Scheme, TruthValue, ValuationClass, internal_consequence, legal_valuations,
)
from .mixed import (
    ClassicalLogic, axiom_audit, axiom_instance, check_faithfulness_equivalence, connecting_pairs,
    decide, eval_mixed, single_rooted, single_rooted_models,
)
from .proof_search import blackbox_refute, crosscheck_adequacy, prove
from .realizations import seed_from_model, verify_bridge, witness_realization
from .syntax import (
    Box, Fc, Formula, Not, Sequent, atom, big_and, big_or, enumerate_formulas, iff, implies, nabla,
    nabla_bar, prop_set, sequent_corpus, to_text,
)

logger = logging.getLogger(__name__)

ATOMS = (0, 1)


@dataclass
class SuiteResult:
    name: str
    bound: int
    seed: int
    checked: int = 0
    failures: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    rows: List[dict] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, group: str, ok: bool, failure: Optional[str] = None) -> None:
        self.checked += 1
        self.rows.append({"group": group, "ok": ok})
        if not ok:
            self.failures.append(f"{group}: {failure}" if failure else group)

    def summary(self) -> pd.DataFrame:
        """Checked and failed counts per group"""
        if not self.rows:
            return pd.DataFrame(columns=["group", "checked", "failed"])
        frame = pd.DataFrame(self.rows)
        grouped = frame.groupby("group", sort=True)["ok"].agg(["count", "sum"]).reset_index()
        grouped["failed"] = grouped["count"] - grouped["sum"]
        return grouped.rename(columns={"count": "checked"})[["group", "checked", "failed"]]

    def to_dict(self) -> dict:
        details = dict(self.details)
        if self.rows:
            details["groups"] = {
                row["group"]: {"checked": int(row["checked"]), "failed": int(row["failed"])}
                for row in self.summary().to_dict(orient="records")
            }
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "bound": self.bound,
            "seed": self.seed,
            "failures": self.failures,
            "details": details,
        }


def _model_text(m) -> str:
    return str(m.to_dict())


# Faithfulness

def suite_faith(bound: int, seed: int) -> SuiteResult:
    """faith holds at w for every literal iff the valuation is faithful, in every class"""
    result = SuiteResult("faith", bound, seed)
    atoms = list(range(max(1, min(bound, len(ATOMS)))))
    for cls in ValuationClass:
        for z_values in legal_valuations(atoms, cls):
            for w_tuple in product(CLASSICAL_VALUES, repeat=len(atoms)):
                m = single_rooted(dict(zip(atoms, w_tuple)), z_values, cls)
                report = check_faithfulness_equivalence(m)
                result.record(cls.value, report.agree, _model_text(m))
    return result


# Connecting property

def _connecting_formula(seq: Sequent) -> Formula:
    return implies(big_and(Box(g) for g in seq.ant), big_or(Box(d) for d in seq.suc))


def suite_connecting(bound: int, seed: int) -> SuiteResult:
    """Every sequent valid in a box calculus has a boxed reading that the paired logic proves"""
    result = SuiteResult("connecting", bound, seed)
    size = min(bound, Config.CONNECTING_SIZE_BOUND)
    valid_total = 0
    for base, logic in connecting_pairs():
        calc = CalculusId(BaseLogic(base), ModalKind.BOX)
        corpus = sequent_corpus(ATOMS, size, Config.SWEEP_MAX_SIDE, fc=calc.base is BaseLogic.F3)
        for seq in corpus:
            if not internal_consequence(seq.ant, seq.suc, calc.base.scheme).holds:
                continue
            valid_total += 1
            target = _connecting_formula(seq)
            verdict = decide(logic, target)
            result.record(f"{calc}/{logic.value}", verdict.theorem, f"{seq} but not {to_text(target)}")
    result.details["validSequents"] = valid_total
    result.details["sizeBound"] = size
    return result


# Nabla

def suite_nabla(bound: int, seed: int) -> SuiteResult:
    """Undeterminedness of a formula is theorem-level iff it is for one of its atoms"""
    result = SuiteResult("nabla", bound, seed)
    size = min(bound, Config.NABLA_SIZE_BOUND)
    for logic in (ClassicalLogic.MW, ClassicalLogic.MF):
        fc = logic.profile.fc
        atom_theorem = {j: decide(logic, nabla(atom(j))).theorem for j in ATOMS}
        atom_settled = {j: decide(logic, nabla_bar(atom(j))).theorem for j in ATOMS}
        for f in enumerate_formulas(ATOMS, size, fc=fc, constants=False):
            props = sorted(prop_set(f))
            lhs = decide(logic, nabla(f)).theorem
            rhs = any(atom_theorem[j] for j in props)
            result.record(f"{logic.value}/iff", lhs == rhs, to_text(f))
            settled = decide(logic, nabla_bar(f)).theorem
            result.record(f"{logic.value}/settled-iff", settled == any(atom_settled[j] for j in props), to_text(f))
            spread = implies(nabla(f), big_or(nabla(atom(j)) for j in props))
            result.record(f"{logic.value}/spread", decide(logic, spread).theorem, to_text(spread))
    result.details["sizeBound"] = size
    return result


# Modal fixed points

_FIXED_POINT_LOGICS = (ClassicalLogic.BM, ClassicalLogic.M, ClassicalLogic.MN, ClassicalLogic.MB)


def _teller_clauses(m, u: SentenceUniverse, j: int, s: Scheme) -> Dict[int, bool]:
    """Expected membership of the four truth-teller literals for p_j"""
    p = atom(j)
    w_pos = eval_mixed(m, "w", p, s) is TruthValue.ONE
    w_neg = not w_pos
    z_pos = eval_mixed(m, "z", p, s).designated
    z_neg = eval_mixed(m, "z", Not(p), s).designated
    even, odd = u.truth_teller(2 * j), u.truth_teller(2 * j + 1)
    return {
        even: w_pos or z_pos,
        u.negation_of(even): z_neg,
        odd: w_neg and z_pos,
        u.negation_of(odd): z_pos,
    }


def suite_modfxp(bound: int, seed: int) -> SuiteResult:
    """Every faithful model yields an sk fixed point whose truth-tellers follow the model"""
    result = SuiteResult("modfxp", bound, seed)
    atoms = list(range(max(1, min(bound, len(ATOMS)))))
    lp_complete, lp_models = 0, 0
    for logic in _FIXED_POINT_LOGICS:
        scheme = logic.profile.scheme
        for m in single_rooted_models(atoms, logic.profile):
            u = SentenceUniverse()
            witness_realization(u, atoms)
            fp = lfp(u, Jump.SK, seed_from_model(m, u, scheme))
            for j in atoms:
                for sid, expected in _teller_clauses(m, u, j, scheme).items():
                    result.record(f"{scheme.value}/clauses", (sid in fp) == expected,
                                  f"{u.label(sid)} in {_model_text(m)}")
            if scheme is Scheme.K3:
                result.record("k3/consistent", fp.consistent, _model_text(m))
            if scheme is Scheme.LP:
                lp_models += 1
                lp_complete += all(
                    sid in fp or u.negation_of(sid) in fp for sid in u.truth_tellers.values()
                )
    # with the clauses as given, a z-false atom leaves its odd truth-teller open
    result.details["lpCompleteModels"] = lp_complete
    result.details["lpModels"] = lp_models
    return result


# Bridges between the modal and truth-theoretic readings

def _bridge_sweep(name: str, bound: int, seed: int, check: Callable) -> SuiteResult:
    result = SuiteResult(name, bound, seed)
    for logic in _FIXED_POINT_LOGICS:
        scheme = logic.profile.scheme
        pool = enumerate_formulas(ATOMS, bound)
        for m in single_rooted_models(ATOMS, logic.profile):
            for f in pool:
                report = verify_bridge(m, f, "witness", scheme)
                for entry in report.entries:
                    result.record(scheme.value, check(entry), f"{entry.formula} in {_model_text(m)}")
    return result


def suite_extnrp(bound: int, seed: int) -> SuiteResult:
    """z designates a formula iff its witness translation is in the fixed point"""
    return _bridge_sweep("extnrp", bound, seed, lambda e: e.z_agrees)


def suite_maintc(bound: int, seed: int) -> SuiteResult:
    """Truth at w carries over to classical truth of the witness translation"""
    return _bridge_sweep("maintc", bound, seed, lambda e: e.w_preserved)


# Liar

def suite_liar(bound: int, seed: int) -> SuiteResult:
    """Consistent fixed points leave the liar open; fixed points containing it make it a true falsehood"""
    result = SuiteResult("liar", bound, seed)
    for tag in Jump:
        u = truth_teller_universe(max(0, min(bound, 2)))
        l = u.liar()
        neg_l = u.negation_of(l)
        tr_l, tr_neg_l = u.tr(l), u.tr(neg_l)
        not_tr_l, not_tr_neg_l = u.neg(tr_l), u.neg(tr_neg_l)
        fixed_points = enumerate_fixed_points(u, tag)
        for fp in fixed_points:
            if fp.consistent:
                undecided = l not in fp and neg_l not in fp
                result.record(f"{tag.value}/gap", undecided, str(sorted(fp.members)))
                result.record(f"{tag.value}/gap-classical",
                              classical_sat(fp, l) and classical_sat(fp, not_tr_l)
                              and classical_sat(fp, not_tr_neg_l),
                              str(sorted(fp.members)))
            if l in fp:
                result.record(f"{tag.value}/glut",
                              classical_sat(fp, tr_l) and not classical_sat(fp, l),
                              str(sorted(fp.members)))
        least = lfp(u, tag)
        result.record(f"{tag.value}/least-consistent", least.consistent, str(sorted(least.members)))
        result.details[f"{tag.value}FixedPoints"] = len(fixed_points)
    return result


# Truth-in / truth-out

def suite_tito(bound: int, seed: int) -> SuiteResult:
    """Over BM-, p -> []p entails Dc and faith; []p -> p entails D and faith"""
    result = SuiteResult("tito", bound, seed)
    logic = ClassicalLogic.BM_MINUS
    scheme = logic.profile.scheme
    # hypotheses must reach ~p0, so they never go below size 2
    hypotheses = enumerate_formulas([0], max(bound, 2))
    goals = enumerate_formulas([0], max(bound - 1, 1))
    converse = 0

    def holds(m, f: Formula) -> bool:
        return eval_mixed(m, "w", f, scheme) is TruthValue.ONE

    for m in single_rooted_models([0], logic.profile):
        truth_in = all(holds(m, implies(f, Box(f))) for f in hypotheses)
        truth_out = all(holds(m, implies(Box(f), f)) for f in hypotheses)
        dc_faith = all(holds(m, axiom_instance("Dc", f)) and holds(m, axiom_instance("faith", f)) for f in goals)
        d_faith = all(holds(m, axiom_instance("D", f)) and holds(m, axiom_instance("faith", f)) for f in goals)
        if truth_in:
            result.record("truth-in", dc_faith, _model_text(m))
        if truth_out:
            result.record("truth-out", d_faith, _model_text(m))
        if dc_faith and not truth_in:
            converse += 1
    result.details["converseCounterexamples"] = converse
    return result


# Fc at the classical root

def suite_extfcon(bound: int, seed: int) -> SuiteResult:
    """At w ->> is material; under [] it can differ from the material conditional"""
    result = SuiteResult("extfcon", bound, seed)
    logic = ClassicalLogic.MF
    pool = enumerate_formulas(ATOMS, max(bound - 1, 1), fc=True)
    boxed_witness = None
    for a in pool:
        for b in pool:
            outer = iff(Fc(a, b), implies(a, b))
            result.record("material", decide(logic, outer).theorem, to_text(outer))
            if boxed_witness is None:
                boxed = iff(Box(Fc(a, b)), Box(implies(a, b)))
                if not decide(logic, boxed).theorem:
                    boxed_witness = to_text(boxed)
    result.record("boxed-differs", boxed_witness is not None, "no instance separates the boxed forms")
    if boxed_witness:
        result.details["boxedWitness"] = boxed_witness
    return result


# Realizations by fixed sentences

_INTRE_CASES = (
    (ClassicalLogic.MN, "circ"),
    (ClassicalLogic.MW, "circ"),
    (ClassicalLogic.MF, "circ"),
    (ClassicalLogic.MB, "dagger"),
)


def suite_intre(bound: int, seed: int) -> SuiteResult:
    """The circ and dagger realizations satisfy both bridge directions on faithful models"""
    result = SuiteResult("intre", bound, seed)
    printed_failures = 0
    for logic, mode in _INTRE_CASES:
        profile = logic.profile
        pool = enumerate_formulas(ATOMS, bound, fc=profile.fc)
        for m in single_rooted_models(ATOMS, profile):
            for f in pool:
                report = verify_bridge(m, f, mode, profile.scheme)
                result.record(f"{profile.scheme.value}/{mode}", report.passed, f"{to_text(f)} in {_model_text(m)}")
                if mode == "dagger":
                    try:
                        printed = verify_bridge(m, f, "dagger-printed", profile.scheme)
                    except RealizationError:
                        continue
                    printed_failures += not printed.passed
    result.details["printedDaggerFailures"] = printed_failures
    return result


# Axiom audit

def suite_axioms(bound: int, seed: int) -> SuiteResult:
    """Every axiom instance up to the bound is a theorem of its logic"""
    result = SuiteResult("axioms", bound, seed)
    for logic in ClassicalLogic:
        audit = axiom_audit(logic, bound)
        for entry in audit.entries:
            result.checked += entry.instances
            for failure in entry.failures:
                result.failures.append(f"{logic.value}/{entry.axiom}: {failure}")
            result.rows.append({"group": logic.value, "ok": not entry.failures})
    return result


# Calculi

def suite_calculi(bound: int, seed: int) -> SuiteResult:
    """Sampled derivations are valid, sound and weakenable; search agrees with the semantics"""
    result = SuiteResult("calculi", bound, seed)
    rng = np.random.default_rng(seed)
    samples = max(1, Config.SAMPLED_DERIVATIONS // 10)
    incomplete = 0
    for base in BaseLogic:
        for modal in (ModalKind.NONE, ModalKind.BOX):
            calc = CalculusId(base, modal)
            sampler = DerivationSampler(calc, rng)
            for _ in range(samples):
                d = sampler.sample(Config.SAMPLE_DEPTH)
                root = d.sequent
                result.record(f"{calc}/valid", check_derivation(calc, d).valid, str(root))
                sound = internal_consequence(root.ant, root.suc, base.scheme).holds
                result.record(f"{calc}/sound", sound, str(root))
                extra = sampler.pool[int(rng.integers(len(sampler.pool)))]
                weakened = weaken(d, [extra], [])
                result.record(f"{calc}/weakening",
                              check_derivation(calc, weakened).valid and weakened.length() == d.length(),
                              str(root))
            corpus = sequent_corpus([0], bound, 1, fc=base is BaseLogic.F3, box=modal is ModalKind.BOX)
            report = crosscheck_adequacy(calc, corpus)
            result.record(f"{calc}/crosscheck", report.passed, f"{len(report.violations)} violation(s)")
            incomplete += len(report.incomplete)
        bbox = CalculusId(base, ModalKind.BLACKBOX)
        for seq in sequent_corpus([0], bound, 1, fc=base is BaseLogic.F3):
            try:
                derived = prove(bbox, seq).derivation is not None
            except BudgetExceeded:
                continue
            refuted = blackbox_refute(bbox, seq, frame_bound=1).found
            result.record(f"{bbox}/agree", not (derived and refuted), str(seq))
    result.details["searchIncomplete"] = incomplete
    return result


SUITES: Dict[str, Callable[[int, int], SuiteResult]] = {
    "faith": suite_faith,
    "connecting": suite_connecting,
    "nabla": suite_nabla,
    "modfxp": suite_modfxp,
    "extnrp": suite_extnrp,
    "maintc": suite_maintc,
    "liar": suite_liar,
    "tito": suite_tito,
    "extfcon": suite_extfcon,
    "intre": suite_intre,
    "axioms": suite_axioms,
    "calculi": suite_calculi,
}


def run_suite(name: str, bound: Optional[int] = None, seed: int = Config.RANDOM_SEED) -> SuiteResult:
    """Run one named suite; a missing bound means Config.DEFAULT_BOUND"""
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    bound = Config.DEFAULT_BOUND if bound is None else bound
    if bound < 1:
        raise ValueError("bound must be at least 1")
    logger.info(f"running suite {name} at bound {bound} with seed {seed}")
    result = SUITES[name](bound, seed)
    if result.failures:
        logger.error(f"suite {name}: {len(result.failures)} failure(s) out of {result.checked}")
    return result
