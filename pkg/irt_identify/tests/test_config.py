"""Tests for laboratory configuration parsing and resolution."""

import importlib
import os
import unittest
from unittest.mock import patch

from irt_identify import config


class IdentifyConfigTests(unittest.TestCase):
    def test_resolve_identify_env_strips_quotes_and_falls_back(self):
        self.assertEqual(config.resolve_identify_env(' "Development" ', None), "development")
        self.assertEqual(config.resolve_identify_env(None, "'staging'"), "staging")
        self.assertEqual(config.resolve_identify_env(None, None), "production")

    def test_resolve_worker_threads_defaults_to_capped_cpu_count(self):
        self.assertEqual(config.resolve_worker_threads(None, 32), 8)
        self.assertEqual(config.resolve_worker_threads(None, 2), 2)
        self.assertEqual(config.resolve_worker_threads(None, None), 1)

    def test_resolve_worker_threads_honors_explicit_value_and_rejects_garbage(self):
        self.assertEqual(config.resolve_worker_threads(' "12" ', 4), 12)
        self.assertEqual(config.resolve_worker_threads("zero", 4), 1)
        self.assertEqual(config.resolve_worker_threads("-3", 4), 1)

    def test_resolve_log_level_prefers_override_then_environment(self):
        self.assertEqual(config.resolve_log_level("info", "production"), "INFO")
        self.assertEqual(config.resolve_log_level("chatty", "development"), "DEBUG")
        self.assertEqual(config.resolve_log_level(None, "production"), "WARNING")

    def test_parse_settings_fall_back_below_minimum_or_non_positive(self):
        self.assertEqual(config._parse_int_setting("4", 32, 8), 32)
        self.assertEqual(config._parse_int_setting("64", 32, 8), 64)
        self.assertEqual(config._parse_float_setting("-1e-9", 1e-9), 1e-9)
        self.assertEqual(config._parse_float_setting("'1e-6'", 1e-9), 1e-6)

    def test_quadrature_settings_follow_environment_on_reload(self):
        with patch.dict(
            os.environ,
            {
                "IRT_IDENTIFY_QUAD_PANELS": "48",
                "IRT_IDENTIFY_QUAD_NODES": "2",
                "IRT_IDENTIFY_MIN_BIN_SIZE": "40",
            },
            clear=False,
        ):
            importlib.reload(config)
            try:
                self.assertEqual(config.QUADRATURE_PANELS, 48)
                self.assertEqual(config.QUADRATURE_NODES, 32)
                self.assertEqual(config.MIN_BIN_SIZE, 40)
            finally:
                importlib.reload(config)


if __name__ == "__main__":
    unittest.main()
