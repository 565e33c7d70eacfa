import contextlib
import io
import json
import logging
import os
import shutil
import tempfile
import unittest
import sys
from pathlib import Path
from unittest import mock

# Add project root to path for testing
sys.path.append(str(Path(__file__).parent.parent))
from config.config import Config
from main import run
from src.toolkit_engine import ToolkitEngine, parse_valuation
from src.exceptions import InvalidModel
from src.manyvalued import TruthValue


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class TestToolkitEngine(unittest.TestCase):
    """Engine methods behind the command line"""

    def setUp(self):
        self.engine = ToolkitEngine(Config())

    def test_parse_valuation(self):
        self.assertEqual(parse_valuation("p0=1, p1=n"), {0: TruthValue.ONE, 1: TruthValue.N})
        with self.assertRaises(InvalidModel):
            parse_valuation("q0=1")
        with self.assertRaises(InvalidModel):
            parse_valuation("p0=2")

    def test_decide(self):
        result = self.engine.decide("Mn", "[]p0 -> p0")
        self.assertEqual(result["status"], "ok")
        self.assertEqual(result["payload"]["verdict"], "theorem")

    def test_bad_input_is_an_error(self):
        """Parse errors and unknown names come back as status 'error'"""
        self.assertEqual(self.engine.decide("Mn", "[]p0 ->")["status"], "error")
        self.assertEqual(self.engine.decide("S5", "p0")["status"], "error")
        self.assertEqual(self.engine.internal("k4", [], ["p0"])["status"], "error")

    def test_translate_needs_model_for_circ(self):
        result = self.engine.translate("p0", "circ")
        self.assertEqual(result["status"], "error")
        result = self.engine.translate("p0", "circ", w="p0=1", z="p0=n")
        self.assertEqual(result["payload"]["realization"], {"p0": "not T(0)"})

    def test_translate_verify(self):
        result = self.engine.translate("[]p0", "witness", w="p0=1", z="p0=b", verify=True)
        self.assertEqual(result["status"], "ok")
        self.assertTrue(result["payload"]["passed"])
        self.assertIn("bridge holds", result["text"])

    def test_fixpoint_list(self):
        result = self.engine.fixpoint("sk", liar=True, list_all=True)
        self.assertEqual(result["payload"]["count"], 2)

    def test_check(self):
        derivation = {
            "sequent": {"ant": ["p0", "~p0"], "suc": []}, "rule": "neg-l", "principal": ["~p0"],
            "children": [{"sequent": {"ant": ["p0"], "suc": ["p0"]}, "rule": "ref", "principal": ["p0"]}],
        }
        self.assertEqual(self.engine.check("K3", derivation)["status"], "ok")
        failed = self.engine.check("FDE", derivation)
        self.assertEqual(failed["status"], "fail")
        self.assertEqual(failed["payload"]["calculus"], "FDE")


class TestCommandLine(unittest.TestCase):
    """Exit codes and output of the kf-modal command"""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        if os.path.exists(self.test_dir):
            shutil.rmtree(self.test_dir)

    def test_log_file_creates_log_directory(self):
        """With LOG_FILE set, run() creates LOG_DIR before logging to it"""
        log_dir = Path(self.test_dir) / "logs"
        with mock.patch.object(Config, "LOG_DIR", log_dir), \
                mock.patch.object(Config, "LOG_FILE", str(log_dir / "kf_modal.log")):
            code, _, _ = invoke("decide", "--logic", "Mn", "--formula", "p0 -> p0")
            for handler in logging.getLogger().handlers[:]:
                handler.close()
                logging.getLogger().removeHandler(handler)
        self.assertEqual(code, 0)
        self.assertTrue(log_dir.is_dir())
        self.assertTrue((log_dir / "kf_modal.log").exists())

    def test_realization_help_names_dagger_tables(self):
        out = io.StringIO()
        with contextlib.redirect_stdout(out), self.assertRaises(SystemExit):
            run(["translate", "--help"])
        self.assertIn("dagger-printed", out.getvalue())
        self.assertIn("0=0", out.getvalue())
        self.assertIn("0=1", out.getvalue())

    def test_theorem_exits_zero(self):
        code, out, _ = invoke("decide", "--logic", "Mn", "--formula", "[]p0 -> p0")
        self.assertEqual(code, 0)
        self.assertIn("theorem", out)

    def test_countermodel_exits_one(self):
        code, out, _ = invoke("decide", "--logic", "BM", "--formula", "[]p0 -> p0", "--format", "json")
        self.assertEqual(code, 1)
        payload = json.loads(out)
        self.assertEqual(payload["countermodel"]["z"], {"p0": "b"})
        self.assertEqual(payload["modelsChecked"], 3)

    def test_bad_input_exits_two(self):
        code, _, err = invoke("decide", "--logic", "BM", "--formula", "[]p0 ->")
        self.assertEqual(code, 2)
        self.assertTrue(err.startswith("error:"))
        self.assertEqual(invoke("frobnicate")[0], 2)
        self.assertEqual(invoke("decide", "--logic", "BM")[0], 2)

    def test_output_is_deterministic(self):
        argv = ("decide", "--logic", "M", "--formula", "([]p0 -> p0) \\/ (p1 -> []p1)", "--format", "json")
        self.assertEqual(invoke(*argv)[1], invoke(*argv)[1])

    def test_internal(self):
        self.assertEqual(invoke("internal", "--scheme", "k3", "--gamma", "p0", "--gamma", "~p0")[0], 0)
        self.assertEqual(invoke("internal", "--scheme", "fde", "--gamma", "p0", "--gamma", "~p0")[0], 1)

    def test_prove(self):
        self.assertEqual(invoke("prove", "--calculus", "LP", "--sequent", "=> p0 \\/ ~p0")[0], 0)
        self.assertEqual(invoke("prove", "--calculus", "B3", "--sequent", "=> p0 \\/ ~p0")[0], 1)

    def test_prove_refute(self):
        code, out, _ = invoke("prove", "--calculus", "K3_bbox", "--sequent", "[]p0 => p0", "--refute",
                              "--format", "json")
        self.assertEqual(code, 1)
        self.assertTrue(json.loads(out)["refutation"]["found"])

    def test_check_from_file(self):
        path = Path(self.test_dir) / "derivation.json"
        path.write_text(json.dumps({
            "sequent": {"ant": [], "suc": ["p0", "~p0"]}, "rule": "neg-r", "principal": ["~p0"],
            "children": [{"sequent": {"ant": ["p0"], "suc": ["p0"]}, "rule": "ref", "principal": ["p0"]}],
        }))
        self.assertEqual(invoke("check", "--calculus", "LP", "--derivation", str(path))[0], 0)
        self.assertEqual(invoke("check", "--calculus", "K3", "--derivation", str(path))[0], 1)
        self.assertEqual(invoke("check", "--calculus", "K3", "--derivation", str(path) + ".missing")[0], 2)

    def test_translate_custom_realization(self):
        path = Path(self.test_dir) / "star.json"
        path.write_text(json.dumps({"p0": "t0 /\\ ~t1"}))
        code, out, _ = invoke("translate", "--formula", "[]p0", "--realization", f"@{path}", "--format", "json")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["translation"], "T(4)")

    def test_fixpoint(self):
        code, out, _ = invoke("fixpoint", "--tellers", "1", "--seed-set", "+t0", "--format", "json")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["S"], [0])

    def test_verify_lemma(self):
        self.assertEqual(invoke("verify-lemma", "--name", "liar", "--bound", "1")[0], 0)
        code, out, _ = invoke("verify-lemma", "--name", "faith", "--bound", "1", "--format", "json")
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(out)["passed"])
        self.assertEqual(invoke("verify-lemma", "--name", "faith", "--bound", "0")[0], 2)

    def test_schemas(self):
        code, out, _ = invoke("schemas", "--format", "json")
        self.assertEqual(code, 0)
        self.assertIn("SuiteReport", json.loads(out))


if __name__ == '__main__':
    unittest.main()
