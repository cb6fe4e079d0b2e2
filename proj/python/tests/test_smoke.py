"""Smoke tests for the compiled Python module (stdlib unittest only)."""

import os
import unittest

import nilgeom


class Smoke(unittest.TestCase):
    def test_builtin_checks(self):
        status, text = nilgeom.run(["check", "jacobi", "--family", "I"])
        self.assertEqual(status, 0)
        self.assertIn("jacobi: pass", text)

        status, text = nilgeom.run(
            ["compute", "p1", "--connection", "chern", "--family", "I"]
        )
        self.assertEqual(status, 0)
        self.assertEqual(
            text.strip(), "(-2/(r**4*pi2))*e1^e2^e3^e4 + (-2/(r**4*pi2))*e1^e2^e5^e6"
        )

        status, text = nilgeom.run(
            ["check", "instanton", "--connection", "chern", "--family", "II"]
        )
        self.assertEqual(status, 1)

    def test_model_roundtrip(self):
        text = "coframe complex: w1 w2 w3\nd w2 = w1^w3 + w1^~w3\n"
        canon = nilgeom.canonical_model(text)
        self.assertEqual(nilgeom.canonical_model(canon), canon)
        self.assertTrue(nilgeom.models_equal(text, canon))

    def test_errors_surface_as_exceptions(self):
        with self.assertRaises(nilgeom.NilgeomError):
            nilgeom.canonical_model("not a model line\n")

    def test_shipped_model_files(self):
        model_dir = os.environ.get("NILGEOM_MODEL_DIR")
        if not model_dir:
            self.skipTest("NILGEOM_MODEL_DIR not set")
        model = os.path.join(model_dir, "family1.model")
        rules = os.path.join(model_dir, "family1.rules")

        status, text = nilgeom.run(["check", "balanced", model])
        self.assertEqual(status, 0)

        status, text = nilgeom.run(["solve", "anomaly", "--rules", rules, model])
        self.assertEqual(status, 0)
        self.assertIn("alpha' = 2*r**2*s**2", text)


if __name__ == "__main__":
    unittest.main()
