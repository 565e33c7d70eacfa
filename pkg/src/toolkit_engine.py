import logging
from typing import Any, Callable, Dict, List, Optional

import pandas as pd

from .calculi import CalculusId, Derivation, ModalKind, check_derivation
from .exceptions import InvalidModel, ToolkitError
from .kftruth import Jump, SentenceUniverse, enumerate_fixed_points, lfp, parse_seed
from .lemma_suites import run_suite
from .manyvalued import Scheme, TruthValue, eval_truth_table, internal_consequence, truth_table_json
from .mixed import ClassicalLogic, consequence_classical, decide, single_rooted
from .proof_search import blackbox_refute, prove
from .realizations import (
    circ_realization, load_realization, translate, verify_bridge, witness_realization,
)
from .schemas import (
    BridgeReport, CheckReport, ConsequenceReport, DecisionReport, FixedPointDump, FixedPointList,
    ProofReport, RefutationReport, SuiteReport, TranslationReport, TruthTableReport, ValuationWitness,
    json_schemas,
)
from .syntax import Dialect, parse, parse_sequent, prop_set, to_text
from .utils import format_valuation

logger = logging.getLogger(__name__)


def parse_valuation(text: str) -> Dict[int, TruthValue]:
    """'p0=1,p1=n' -> {0: 1, 1: n}"""
    valuation = {}
    for item in (part.strip() for part in text.split(",")):
        if not item:
            continue
        name, _, value = item.partition("=")
        name = name.strip()
        if not (name.startswith("p") and name[1:].isdigit()):
            raise InvalidModel(f"valuation entries look like p0=1, got {item!r}")
        try:
            valuation[int(name[1:])] = TruthValue.parse(value)
        except ValueError:
            raise InvalidModel(f"{value.strip()!r} is not a truth value (0, 1, n, b)") from None
    return valuation


_MODEL_SCHEME = {"circ": Scheme.K3, "dagger": Scheme.LP, "dagger-printed": Scheme.LP}


def _render_model(countermodel: Dict[str, Any]) -> str:
    w = ", ".join(f"{k}={v}" for k, v in countermodel["w"].items())
    z = ", ".join(f"{k}={v}" for k, v in countermodel["z"].items())
    return f"w: {w}; z: {z}"


class ToolkitEngine:
    """Orchestrates the decision procedures, proof tools and suites behind the CLI.

    Every public method returns {'status': 'ok' | 'fail', 'payload': ..., 'text': ...}
    or, for bad input, {'status': 'error', 'message': ...}.
    """

    def __init__(self, config):
        self.config = config
        logger.info("ToolkitEngine initialized")

    def _run(self, label: str, work: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
        try:
            return work()
        except (ToolkitError, ValueError) as e:
            logger.error(f"Error during {label}: {e}")
            return {'status': 'error', 'message': str(e)}

    @staticmethod
    def _result(ok: bool, payload: Dict[str, Any], text: str) -> Dict[str, Any]:
        return {'status': 'ok' if ok else 'fail', 'payload': payload, 'text': text}

    # Classical logics

    def decide(self, logic: str, formula: str) -> Dict[str, Any]:
        """Theoremhood in one of the classical modal logics"""
        def work():
            tag = ClassicalLogic.from_name(logic)
            f = parse(formula, Dialect.FC if tag.profile.fc else Dialect.BASIC)
            verdict = decide(tag, f, self.config.MAX_ATOMS)
            payload = DecisionReport.model_validate(verdict.to_dict()).dump()
            text = f"{tag.value} |- {to_text(f)}: {payload['verdict']} ({verdict.models_checked} models)"
            if verdict.countermodel is not None:
                text += "\n" + _render_model(payload["countermodel"])
            return self._result(verdict.theorem, payload, text)
        return self._run("decide", work)

    def consequence(self, logic: str, gamma: List[str], formula: str) -> Dict[str, Any]:
        def work():
            tag = ClassicalLogic.from_name(logic)
            dialect = Dialect.FC if tag.profile.fc else Dialect.BASIC
            premises = [parse(g, dialect) for g in gamma]
            verdict = consequence_classical(tag, premises, parse(formula, dialect), self.config.MAX_ATOMS)
            payload = ConsequenceReport.model_validate(verdict.to_dict()).dump()
            text = f"{tag.value}: {payload['verdict']}"
            if verdict.countermodel is not None:
                text += "\n" + _render_model(payload["countermodel"])
            return self._result(verdict.holds, payload, text)
        return self._run("consequence", work)

    # Many-valued schemes

    def internal(self, scheme: str, gamma: List[str], delta: List[str]) -> Dict[str, Any]:
        """Consequence over idiosyncratic frames in one scheme"""
        def work():
            s = Scheme(scheme)
            dialect = Dialect.FC if s.allows_fc else Dialect.BASIC
            left = [parse(g, dialect) for g in gamma]
            right = [parse(d, dialect) for d in delta]
            result = internal_consequence(left, right, s)
            witness = None
            if result.witness is not None:
                witness = {k: v.value for k, v in format_valuation(result.witness).items()}
            payload = ValuationWitness(
                scheme=s.value, gamma=[to_text(g) for g in left], delta=[to_text(d) for d in right],
                verdict="holds" if result.holds else "countermodel", checked=result.checked,
                witness=witness,
            ).dump()
            text = f"{s.value}: {payload['verdict']} ({result.checked} valuations)"
            if witness:
                text += "\n" + ", ".join(f"{k}={v}" for k, v in witness.items())
            return self._result(result.holds, payload, text)
        return self._run("internal consequence", work)

    def table(self, scheme: str, formula: str) -> Dict[str, Any]:
        def work():
            s = Scheme(scheme)
            f = parse(formula, Dialect.FC if s.allows_fc else Dialect.BASIC)
            payload = TruthTableReport.model_validate(
                {"formula": to_text(f), "scheme": s.value, **truth_table_json(f, s)}
            ).dump()
            text = eval_truth_table(f, s).to_string(index=False)
            return self._result(True, payload, text)
        return self._run("truth table", work)

    # Calculi

    def prove(self, calculus: str, sequent: str, budget: Optional[int] = None,
              refute: bool = False) -> Dict[str, Any]:
        """Cut-free search; on a saturated blackbox sequent optionally look for a tree countermodel"""
        def work():
            calc = CalculusId.parse(calculus)
            seq = parse_sequent(sequent, calc.dialect)
            result = prove(calc, seq, budget or self.config.SEARCH_NODE_LIMIT)
            payload = ProofReport.model_validate(result.to_dict()).dump()
            text = f"{calc}: {seq}: {result.status} ({result.nodes} nodes)"
            if result.derivation is not None:
                text += f", length {result.derivation.length()}"
            elif refute and calc.modal is ModalKind.BLACKBOX:
                refutation = blackbox_refute(calc, seq, self.config.REFUTE_FRAME_BOUND)
                payload["refutation"] = RefutationReport.model_validate(refutation.to_dict()).dump()
                text += f"\ncountermodel {'found' if refutation.found else 'not found'}" \
                        f" among {refutation.types_explored} world types"
            return self._result(result.derivation is not None, payload, text)
        return self._run("proof search", work)

    def check(self, calculus: str, derivation: Dict[str, Any]) -> Dict[str, Any]:
        def work():
            calc = CalculusId.parse(calculus)
            d = Derivation.from_dict(derivation, calc.dialect)
            result = check_derivation(calc, d)
            payload = CheckReport.model_validate({"calculus": str(calc), **result.to_dict()}).dump()
            if result.valid:
                text = f"{calc}: valid derivation of {d.sequent} (length {d.length()})"
            else:
                text = f"{calc}: invalid at {result.offending}: {result.reason}"
            return self._result(result.valid, payload, text)
        return self._run("derivation check", work)

    # Truth

    def _model(self, w_text: str, z_text: str, scheme: Scheme):
        return single_rooted(parse_valuation(w_text), parse_valuation(z_text), scheme.valuation_class)

    def translate(self, formula: str, realization: str = "witness", data: Optional[Dict[str, str]] = None,
                  w: Optional[str] = None, z: Optional[str] = None, scheme: Optional[str] = None,
                  verify: bool = False) -> Dict[str, Any]:
        """Translate a modal formula into a truth-theoretic sentence, optionally checking the bridge"""
        def work():
            s = Scheme(scheme) if scheme else None
            f = parse(formula, Dialect.FC)
            u = SentenceUniverse()
            m = None
            if w is not None or z is not None:
                m = self._model(w or "", z or "", s or _MODEL_SCHEME.get(realization, Scheme.FDE))
            if data is not None:
                star = load_realization(u, data)
            elif realization == "witness":
                star = witness_realization(u, m.atoms() if m else prop_set(f))
            elif m is None:
                raise InvalidModel(f"the {realization} realization is read off a model; pass --w and --z")
            else:
                star = circ_realization(m, realization, u)
            if verify:
                if m is None:
                    raise InvalidModel("bridge verification needs a model; pass --w and --z")
                if data is None:
                    report = verify_bridge(m, f, realization, s)
                else:
                    report = verify_bridge(m, f, "custom", s, star)
                payload = BridgeReport.model_validate(report.to_dict()).dump()
                frame = pd.DataFrame([
                    {"formula": e["formula"], "translation": e["translation"], "passed": e["passed"]}
                    for e in payload["entries"]
                ])
                text = frame.to_string(index=False) + f"\nbridge {'holds' if report.passed else 'fails'}"
                return self._result(report.passed, payload, text)
            sid = translate(star, f)
            payload = TranslationReport.model_validate({
                "formula": to_text(f), "realization": star.to_dict(), "sentenceId": sid,
                "translation": u.form(sid), "sentences": u.to_dict(),
            }).dump()
            text = f"{to_text(f)} -> {u.form(sid)}"
            return self._result(True, payload, text)
        return self._run("translation", work)

    def fixpoint(self, jump: str, seed: str = "", tellers: int = 0, liar: bool = False,
                 list_all: bool = False) -> Dict[str, Any]:
        def work():
            tag = Jump(jump)
            u = SentenceUniverse()
            for i in range(tellers):
                u.truth_teller(i)
            if liar:
                u.liar()
            if list_all:
                points = enumerate_fixed_points(u, tag)
                payload = FixedPointList.model_validate({
                    "jump": tag.value, "count": len(points), "fixedPoints": [fp.to_dict() for fp in points],
                }).dump()
                frame = pd.DataFrame([
                    {"S": " ".join(u.label(i) for i in sorted(fp.members)) or "-",
                     "consistent": fp.consistent, "complete": fp.complete_over_universe}
                    for fp in points
                ])
                return self._result(True, payload, frame.to_string(index=False))
            fp = lfp(u, tag, parse_seed(u, seed))
            payload = FixedPointDump.model_validate(fp.to_dict()).dump()
            members = ", ".join(u.label(i) for i in sorted(fp.members))
            text = f"{tag.value} fixed point after {fp.iterations} rounds: {{{members}}}" \
                   f"\nconsistent: {fp.consistent}, complete: {fp.complete_over_universe}"
            return self._result(True, payload, text)
        return self._run("fixed point", work)

    # Suites

    def verify_lemma(self, name: str, bound: Optional[int] = None, seed: Optional[int] = None) -> Dict[str, Any]:
        def work():
            result = run_suite(name, bound, self.config.RANDOM_SEED if seed is None else seed)
            payload = SuiteReport.model_validate(result.to_dict()).dump()
            lines = [f"{name}: {'pass' if result.passed else 'FAIL'} ({result.checked} checked)"]
            summary = result.summary()
            if not summary.empty:
                lines.append(summary.to_string(index=False))
            lines += [f"  {failure}" for failure in result.failures[:10]]
            if len(result.failures) > 10:
                lines.append(f"  ... {len(result.failures) - 10} more")
            return self._result(result.passed, payload, "\n".join(lines))
        return self._run(f"suite {name}", work)

    def schemas(self) -> Dict[str, Any]:
        payload = json_schemas()
        return self._result(True, payload, "\n".join(sorted(payload)))
