"""End-to-end checks of the wfparadox binary: exit codes, schemas, determinism."""

import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema
from referencing import Registry, Resource

BINARY = None
SCHEMAS = None


def load_registry(directory):
    resources = []
    schemas = {}
    for name in sorted(os.listdir(directory)):
        with open(os.path.join(directory, name)) as f:
            doc = json.load(f)
        resources.append((doc["$id"], Resource.from_contents(doc)))
        schemas[doc["$id"].rsplit(":", 1)[1]] = doc
    return Registry().with_resources(resources), schemas


class Cli(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.registry, cls.schemas = load_registry(SCHEMAS)
        cls.tmp = tempfile.TemporaryDirectory()
        cls.files = {}
        for preset in ["fr", "kcbs", "compat-a", "compat-b-computational", "compat-b-bell",
                       "fr-model", "kcbs-model", "prbox", "prbox-model", "liar", "yablo"]:
            path = os.path.join(cls.tmp.name, preset + ".json")
            cls.run_cli("export-preset", preset, "-o", path)
            cls.files[preset] = path

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    @staticmethod
    def run_cli(*args, expect=0):
        p = subprocess.run([BINARY, *args], capture_output=True, text=True)
        if p.returncode != expect:
            raise AssertionError(
                f"{args}: exit {p.returncode}, expected {expect}\n{p.stdout}\n{p.stderr}")
        return p

    def validate(self, doc, schema):
        validator = jsonschema.Draft202012Validator(self.schemas[schema], registry=self.registry)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        self.assertEqual([], [f"{list(e.path)}: {e.message}" for e in errors])

    def report(self, *args, expect=0):
        doc = json.loads(self.run_cli(*args, expect=expect).stdout)
        self.validate(doc, "report")
        return doc

    def path(self, name):
        return self.files[name]

    def test_exports_match_their_schemas(self):
        kinds = {"wfp-setup/1": "setup", "wfp-model/1": "model", "wfp-ncycle/1": "ncycle",
                 "wfp-classical/1": "classical"}
        for name, path in self.files.items():
            with open(path) as f:
                doc = json.load(f)
            with self.subTest(preset=name):
                self.validate(doc, kinds[doc["format"]])

    def test_fr_simulate(self):
        r = self.report("simulate", self.path("fr"), "--mention", "u,w")["results"]
        probs = {b["outcomes"]["text"]: b["probability"] for b in r["branches"]}
        self.assertEqual(probs["u=ok,w=ok"]["fraction"], "1/12")
        self.assertEqual(probs["u=fail,w=fail"]["fraction"], "3/4")
        self.assertAlmostEqual(sum(p["value"] for p in probs.values()), 1.0, places=9)

    def test_simulate_settings(self):
        r = self.report("simulate", self.path("kcbs"), "--settings", "10000", "--states")
        self.assertEqual(len(r["results"]["branches"]), 2)
        self.run_cli("simulate", self.path("kcbs"), "--settings", "101", expect=2)
        self.run_cli("simulate", self.path("fr"), "--mention", "zed", expect=2)

    def test_contextuality_verdicts(self):
        expected = {"fr": "logically-contextual", "kcbs": "logically-contextual",
                    "fr-model": "logically-contextual", "compat-a": "noncontextual-logically",
                    "prbox": "strongly-contextual", "prbox-model": "strongly-contextual"}
        for name, verdict in expected.items():
            with self.subTest(preset=name):
                r = self.report("contextuality", self.path(name), "--oracle")["results"]
                self.assertEqual(r["verdict"], verdict)
        r = self.report("contextuality", self.path("fr"))["results"]
        self.assertEqual(r["witness"]["text"], "u=ok,w=ok")

    def test_kcbs_paradox_and_dot(self):
        dot = os.path.join(self.tmp.name, "kcbs.dot")
        r = self.report("paradox", self.path("kcbs"), "--dot", dot)["results"]
        self.assertTrue(r["found"])
        self.assertEqual(r["p_postselection"]["fraction"], "1/9")
        self.assertEqual(r["certificate"]["postselection"]["text"], "a5=0,a1=1")
        self.assertTrue(r["graph_has_cycle"])
        with open(dot) as f:
            self.assertIn("digraph", f.read())

    def test_paradox_none_and_bound(self):
        self.assertFalse(self.report("paradox", self.path("compat-a"))["results"]["found"])
        r = self.report("paradox", self.path("kcbs"), "--max-chain-length", "3")
        self.assertFalse(r["results"]["found"])

    def test_classical(self):
        liar = self.report("paradox", self.path("liar"))["results"]
        self.assertTrue(liar["paradoxical"])
        self.assertTrue(liar["graph_has_cycle"])
        yablo = self.report("paradox", self.path("yablo"))["results"]
        self.assertFalse(yablo["paradoxical"])
        self.assertFalse(yablo["graph_has_cycle"])

    def test_ncycle(self):
        pr = self.report("ncycle", self.path("prbox"))["results"]
        self.assertEqual(pr["extremal_gamma"], [1, 1, 1, -1])
        self.assertEqual(len(pr["ps_free_paradox"]), 2)
        for name, n in [("fr", 4), ("kcbs-model", 5)]:
            with self.subTest(preset=name):
                r = self.report("ncycle", self.path(name))["results"]
                self.assertEqual(r["n"], n)
                self.assertLess(r["max_omega"]["value"], n)
                self.assertIsNone(r["extremal_gamma"])
                self.assertIsNone(r["ps_free_paradox"])

    def test_verify(self):
        r = self.report("verify", "negation", "--seed", "7")
        self.assertTrue(r["results"]["passed"])
        self.assertEqual(r["results"]["suites"][0]["cases"], 200)
        self.run_cli("verify", "nosuch", expect=2)

    def test_reports_are_deterministic(self):
        for args in [("paradox", self.path("fr")), ("contextuality", self.path("kcbs")),
                     ("ncycle", self.path("prbox-model"))]:
            with self.subTest(command=args[0]):
                a = self.run_cli(*args).stdout
                b = self.run_cli(*args).stdout
                self.assertEqual(a, b)
                self.assertNotIn("timings", json.loads(a))
        timed = self.report("--timings", "ncycle", self.path("prbox"))
        self.assertIn("timings", timed)

    def test_text_format(self):
        out = self.run_cli("--format", "text", "paradox", self.path("fr")).stdout
        self.assertIn("u=ok => b=1", out)
        self.assertIn("1/12", out)

    def test_exit_codes(self):
        with open(self.path("fr")) as f:
            fr = json.load(f)

        def write(name, doc):
            path = os.path.join(self.tmp.name, name)
            with open(path, "w") as f:
                f.write(doc if isinstance(doc, str) else json.dumps(doc))
            return path

        self.run_cli("simulate", write("broken.json", "{ not json"), expect=2)
        self.run_cli("simulate", os.path.join(self.tmp.name, "missing.json"), expect=2)
        self.run_cli("frobnicate", expect=2)
        self.run_cli("export-preset", "nosuch", expect=2)
        no_agents = dict(fr, agents=[])
        self.run_cli("simulate", write("no_agents.json", no_agents), expect=2)
        wrong_format = dict(fr, format="wfp-setup/9")
        self.run_cli("simulate", write("format.json", wrong_format), expect=2)
        unnormalized = json.loads(json.dumps(fr))
        unnormalized["initial_state"]["amplitudes"] = [1, 0, 1, 1]
        unnormalized["initial_state"].pop("normalize", None)
        self.run_cli("simulate", write("norm.json", unnormalized), expect=3)
        bad_projector = json.loads(json.dumps(fr))
        bad_projector["agents"][0]["projectors"][0] = bad_projector["agents"][0]["projectors"][1]
        self.run_cli("contextuality", write("proj.json", bad_projector), expect=3)
        self.run_cli("--version")


if __name__ == "__main__":
    BINARY, SCHEMAS = sys.argv[1], sys.argv[2]
    unittest.main(argv=sys.argv[:1], verbosity=2)
