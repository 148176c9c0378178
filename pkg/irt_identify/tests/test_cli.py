"""Tests for the irt-identify command line and its file formats."""

import argparse
import io
import json
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import numpy as np

from irt_identify.commands.shared import start_manifest
from irt_identify.errors import DomainError, ModelValidationError
from irt_identify.files import format_csv, format_model, parse_model_text, read_response_matrix
from irt_identify.irf import IrtFamily
from irt_identify.main import main


def run_cli(*argv: str) -> tuple[int, str, str]:
    stdout, stderr = io.StringIO(), io.StringIO()
    with redirect_stdout(stdout), redirect_stderr(stderr):
        code = main(list(argv))
    return code, stdout.getvalue(), stderr.getvalue()


def csv_body(text: str) -> tuple[list[str], np.ndarray]:
    lines = [line for line in text.splitlines() if line and not line.startswith("#")]
    header = lines[0].split(",")
    return header, np.array([[float(cell) for cell in line.split(",")] for line in lines[1:]])


class PlotIrfCommandTests(unittest.TestCase):
    def test_identity_table(self):
        code, out, _ = run_cli("plot-irf", "--family", "normal-ogive", "--a", "1", "--b", "0", "--points", "50")
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("theta,p,p_prime\n"))
        header, rows = csv_body(out)
        self.assertEqual(header, ["theta", "p", "p_prime"])
        self.assertEqual(rows.shape, (150, 3))
        np.testing.assert_allclose(rows[:, 1], rows[:, 0], rtol=1e-9)
        np.testing.assert_allclose(rows[:, 2], 1.0, rtol=1e-9)

    def test_four_pl_stays_between_asymptotes(self):
        code, out, _ = run_cli("plot-irf", "--family", "4pl", "--c", "0.2", "--d", "0.8", "--points", "40")
        self.assertEqual(code, 0)
        _, rows = csv_body(out)
        self.assertTrue(np.all((rows[:, 1] >= 0.2) & (rows[:, 1] <= 0.8)))
        self.assertTrue(np.all(rows[:, 2] > 0.0))


class CheckCommandTests(unittest.TestCase):
    def setUp(self):
        self.workdir = tempfile.TemporaryDirectory()
        self.addCleanup(self.workdir.cleanup)

    def _model_file(self, text: str) -> str:
        path = Path(self.workdir.name) / "model.txt"
        path.write_text(text, encoding="utf-8")
        return str(path)

    def test_flat_item_is_a_usage_error(self):
        path = self._model_file("normal-ogive 1 0\nnormal-ogive 0 1\n")
        code, _, err = run_cli("check", "--model", path)
        self.assertEqual(code, 2)
        self.assertIn("item 2", err)

    def test_normal_ogive_preset_passes(self):
        code, out, _ = run_cli("check", "--preset", "homogeneous-normal-ogive", "--n-items", "5")
        self.assertEqual(code, 0)
        payload = json.loads(out)
        self.assertTrue(payload["report"]["passed"])
        self.assertEqual(payload["manifest"]["command"], "check")

    def test_missing_model_source(self):
        code, _, err = run_cli("check")
        self.assertEqual(code, 2)
        self.assertIn("--model", err)


class RecoverCommandTests(unittest.TestCase):
    def test_identity_oracle_table(self):
        code, out, _ = run_cli(
            "recover", "--preset", "homogeneous-identity", "--n-items", "11", "--alpha", "0.05", "--beta", "0.95"
        )
        self.assertEqual(code, 0)
        header, rows = csv_body(out)
        self.assertEqual(header, ["k", "theta_k", "p_hat", "p_true"])
        np.testing.assert_array_equal(rows[:, 0], np.arange(1, 10))
        np.testing.assert_allclose(rows[:, 2], (rows[:, 0] + 1) / 12, atol=1e-10)
        self.assertTrue(out.splitlines()[-1].startswith("# max_abs_error="))

    def test_two_items_fail_with_empty_grid(self):
        code, _, err = run_cli("recover", "--preset", "homogeneous-identity", "--n-items", "2")
        self.assertEqual(code, 1)
        self.assertIn("recovery grid empty", err)

    def test_item_flag_is_one_based(self):
        code, _, err = run_cli("recover", "--preset", "homogeneous-identity", "--n-items", "5", "--item", "0")
        self.assertEqual(code, 2)
        self.assertIn("--item", err)


class SimulateAndRecoverTests(unittest.TestCase):
    def test_simulation_is_deterministic_and_feeds_recovery(self):
        with tempfile.TemporaryDirectory() as workdir:
            first, second = Path(workdir) / "first.csv", Path(workdir) / "second.csv"
            for path in (first, second):
                code, _, _ = run_cli(
                    "simulate",
                    "--preset", "homogeneous-identity",
                    "--n-items", "6",
                    "--respondents", "2000",
                    "--seed", "11",
                    "--out", str(path),
                )
                self.assertEqual(code, 0)
            self.assertEqual(first.read_bytes(), second.read_bytes())
            sidecar = json.loads(Path(f"{first}.manifest.json").read_text(encoding="utf-8"))
            self.assertEqual(sidecar["command"], "simulate")
            self.assertEqual(sidecar["seed"], 11)
            self.assertEqual(read_response_matrix(first).shape, (2000, 6))

            code, out, _ = run_cli("recover", "--data", str(first), "--item", "2")
            self.assertEqual(code, 0)
            header, rows = csv_body(out)
            self.assertEqual(header, ["rest_low", "rest_high", "count", "theta_k", "p_hat"])
            self.assertTrue(np.all(np.diff(rows[:, 3]) > 0))

            code, _, _ = run_cli("recover", "--data", str(first), "--model", str(first))
            self.assertEqual(code, 2)

    def test_simulation_can_save_its_generating_model(self):
        with tempfile.TemporaryDirectory() as workdir:
            data, items = Path(workdir) / "data.csv", Path(workdir) / "items.txt"
            code, _, _ = run_cli(
                "simulate",
                "--preset", "heterogeneous-4pl",
                "--n-items", "8",
                "--respondents", "500",
                "--seed", "5",
                "--out", str(data),
                "--model-out", str(items),
            )
            self.assertEqual(code, 0)
            saved = parse_model_text(items.read_text(encoding="utf-8"))
            self.assertEqual(saved.n, 8)
            self.assertTrue(all(params.family is IrtFamily.LOGISTIC_4PL for params in saved.params))
            sidecar = json.loads(Path(f"{data}.manifest.json").read_text(encoding="utf-8"))
            self.assertNotIn("model_out", sidecar["config"])

            code, out, _ = run_cli("check", "--model", str(items))
            self.assertEqual(code, 0)
            self.assertEqual(len(json.loads(out)["report"]["items"]), 8)


class ConvergeAndBoundsCommandTests(unittest.TestCase):
    def test_unknown_preset_is_rejected_by_parser(self):
        with redirect_stderr(io.StringIO()), self.assertRaises(SystemExit) as raised:
            main(["converge", "--preset", "rasch-family"])
        self.assertEqual(raised.exception.code, 2)

    def test_converge_csv_with_sidecar(self):
        with tempfile.TemporaryDirectory() as workdir:
            out = Path(workdir) / "converge.csv"
            code, _, _ = run_cli(
                "converge", "--preset", "homogeneous-identity", "--n-grid", "11,21", "--format", "csv", "--out", str(out)
            )
            self.assertEqual(code, 0)
            header, rows = csv_body(out.read_text(encoding="utf-8"))
            self.assertEqual(header, ["n", "max_sup_error", "tail_low", "tail_high", "tail_sup_error", "full_bound"])
            self.assertGreater(rows[0, 1], rows[1, 1])
            np.testing.assert_allclose(rows[:, 2:4], [[0.05, 0.95], [0.05, 0.95]], rtol=1e-12)
            np.testing.assert_array_equal(rows[:, 5], np.maximum(0.1, rows[:, 4]))
            self.assertTrue(Path(f"{out}.manifest.json").exists())

    def test_converge_json_reports_whole_interval_bound(self):
        code, out, _ = run_cli(
            "converge", "--preset", "homogeneous-identity", "--n-grid", "11,41", "--epsilon", "0.02"
        )
        self.assertEqual(code, 0)
        report = json.loads(out)["report"]
        self.assertEqual(report["epsilon"], 0.02)
        self.assertEqual(len(report["full_bounds"]), 2)
        for bound, tail_error in zip(report["full_bounds"], report["tail_errors"]):
            self.assertEqual(bound, max(0.04, tail_error))
        self.assertAlmostEqual(report["tail_intervals"][0][0], 0.02, places=12)

    def test_hoeffding_report(self):
        code, out, _ = run_cli("bounds", "hoeffding", "--trials", "2000")
        self.assertEqual(code, 0)
        report = json.loads(out)["reports"][0]
        self.assertAlmostEqual(report["c_tilde_estimate"], 0.2706705664732254, places=15)
        self.assertTrue(report["passed"])

    def test_invalid_delta_is_a_usage_error(self):
        code, _, _ = run_cli("bounds", "lemma2", "--delta", "0.6")
        self.assertEqual(code, 2)


class FileFormatTests(unittest.TestCase):
    def test_model_text_with_comments(self):
        model = parse_model_text("# bank\nnormal-ogive 1 0  # anchor\n\n4pl 1.5 -0.5 0.1 0.95\n")
        self.assertEqual(model.n, 2)
        self.assertIs(model.params[1].family, IrtFamily.LOGISTIC_4PL)
        self.assertEqual(model.params[1].c, 0.1)

    def test_formatted_model_parses_back(self):
        model = parse_model_text("normal-ogive 1 0\n4pl 1.5 -0.5 0.1 0.95\n")
        text = format_model(model.params)
        self.assertTrue(text.startswith("# family a b c d\n"))
        self.assertEqual(parse_model_text(text).params, model.params)

    def test_malformed_line_reports_item(self):
        with self.assertRaises(ModelValidationError) as raised:
            parse_model_text("normal-ogive 1 0\n4pl 1 0 0.1\n")
        self.assertEqual(raised.exception.item_index, 1)
        with self.assertRaises(ModelValidationError):
            parse_model_text("# nothing here\n")

    def test_non_binary_responses(self):
        with tempfile.TemporaryDirectory() as workdir:
            path = Path(workdir) / "bad.csv"
            path.write_text("0,1\n1,2\n", encoding="utf-8")
            with self.assertRaises(DomainError):
                read_response_matrix(path)

    def test_csv_header_first_and_comments_last(self):
        text = format_csv(("n", "value"), [(1, 0.1)], comments=("note",))
        self.assertEqual(text, "n,value\n1,0.10000000000000001\n# note\n")

    def test_manifest_digest_ignores_output_plumbing(self):
        base = {"preset": "homogeneous-identity", "n_items": 11, "seed": 3, "handler": print, "log_level": None}
        first = start_manifest("recover", argparse.Namespace(**base, out=None, format="csv"))
        second = start_manifest("recover", argparse.Namespace(**base, out="x.csv", format="csv"))
        third = start_manifest("recover", argparse.Namespace(**{**base, "seed": 4}, out=None, format="csv"))
        self.assertEqual(first.config_digest, second.config_digest)
        self.assertNotEqual(first.config_digest, third.config_digest)
        self.assertNotIn("out", first.config)


if __name__ == "__main__":
    unittest.main()
