# Copyright 2026 The lpx Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end tests of the lpx and lpx-synth executables."""

import argparse
import json
import os
import signal
import socket
import subprocess
import sys
import tempfile
import time
import unittest
import urllib.error
import urllib.request

import jsonschema

ARGS = None


def run(*argv, env=None, stdin=None):
    full_env = dict(os.environ)
    full_env.pop("LPX_LOG", None)
    if env:
        full_env.update(env)
    return subprocess.run([ARGS.lpx, *argv], capture_output=True, text=True, env=full_env,
                          input=stdin, timeout=300)


def fixture(name):
    return os.path.join(ARGS.fixtures, name)


def schema(name):
    with open(os.path.join(ARGS.docs, name)) as f:
        return json.load(f)


class ExplainCommand(unittest.TestCase):

    def test_table_shows_diagonal_pairing(self):
        r = run("explain", fixture("sec32.json"), "--format", "table")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertIn("MV1 → CV1 (HI)", r.stdout)
        self.assertIn("MV2 → CV2 (LO)", r.stdout)

    def test_json_validates_against_schema(self):
        r = run("explain", fixture("sec32.json"), "--format", "json")
        self.assertEqual(r.returncode, 0, r.stderr)
        doc = json.loads(r.stdout)
        jsonschema.validate(doc, schema("explanation.schema.json"))
        self.assertEqual(doc["schema_version"], "lpx.explanation/1")

    def test_output_file_matches_stdout(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "out.json")
            r = run("explain", fixture("sec32.json"), "-o", path)
            self.assertEqual(r.returncode, 0, r.stderr)
            self.assertEqual(r.stdout, "")
            with open(path) as f:
                self.assertEqual(f.read(), run("explain", fixture("sec32.json")).stdout)

    def test_missing_file_exit_2_names_path(self):
        r = run("explain", "/no/such/snapshot.json")
        self.assertEqual(r.returncode, 2)
        self.assertIn("/no/such/snapshot.json", r.stderr)

    def test_invalid_snapshot_exit_2(self):
        with open(fixture("sec32.json")) as f:
            doc = json.load(f)
        doc["cv_bounds"][0] = {"lower": 4.0, "upper": 3.0}
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
            json.dump(doc, f)
        try:
            r = run("explain", f.name)
        finally:
            os.unlink(f.name)
        self.assertEqual(r.returncode, 2)
        self.assertIn("BoundOrderViolation", r.stderr)
        self.assertIn("/cv_bounds/0", r.stderr)

    def test_unbounded_exit_3(self):
        r = run("explain", fixture("unbounded.json"))
        self.assertEqual(r.returncode, 3)
        self.assertIn("Unbounded", r.stderr)
        self.assertIn("MV3", r.stderr)
        self.assertEqual(r.stdout, "")

    def test_deterministic(self):
        a = run("explain", fixture("sec32.json")).stdout
        b = run("explain", fixture("sec32.json")).stdout
        self.assertEqual(a, b)


class HistoryCommand(unittest.TestCase):

    def test_markdown_has_three_data_columns(self):
        r = run("history", fixture("history3.jsonl"))
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertIn("| MV | S1 | S2 | S3 | S∞ |", r.stdout)
        row = next(line for line in r.stdout.splitlines() if line.startswith("| MV1 |"))
        cells = [c.strip() for c in row.strip("|").split("|")]
        self.assertEqual(cells[1:4], ["CV1-HI (33.3%)", "CV2-HI (33.3%)", "OOS (33.3%)"])

    def test_empty_file_exit_2(self):
        with tempfile.NamedTemporaryFile("w", suffix=".jsonl") as f:
            r = run("history", f.name)
        self.assertEqual(r.returncode, 2)
        self.assertIn("EmptyHistory", r.stderr)

    def test_live_and_intent_add_colors(self):
        r = run("history", fixture("history3.jsonl"), "--live", fixture("live.json"),
                "--intent", fixture("intent.json"), "--format", "json")
        self.assertEqual(r.returncode, 0, r.stderr)
        report = json.loads(r.stdout)
        colors = {row["mv"]: row["live"]["color"] for row in report["rows"]}
        self.assertEqual(colors, {"MV1": "GREEN", "MV2": "YELLOW"})
        self.assertTrue(report["intent_configured"])

    def test_out_of_order_exit_2(self):
        with open(fixture("history3.jsonl")) as f:
            lines = f.read().splitlines()
        with tempfile.NamedTemporaryFile("w", suffix=".jsonl", delete=False) as f:
            f.write("\n".join(reversed(lines)) + "\n")
        try:
            r = run("history", f.name)
        finally:
            os.unlink(f.name)
        self.assertEqual(r.returncode, 2)
        self.assertIn("OutOfOrderTimestamp", r.stderr)

    def test_csv_and_columns(self):
        r = run("history", fixture("history3.jsonl"), "--format", "csv", "--columns", "2")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(r.stdout.splitlines()[0], "MV,S1,S2,S_inf")

    def test_jobs_do_not_change_output(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "h.jsonl")
            synth = subprocess.run([ARGS.synth, "-n", "300", "--mvs", "6", "--cvs", "12",
                                    "--seed", "9", "-o", path], capture_output=True, text=True)
            self.assertEqual(synth.returncode, 0, synth.stderr)
            outs = [run("history", path, "--format", "json", "--jobs", str(j)).stdout
                    for j in (1, 3)]
        self.assertEqual(outs[0], outs[1])
        self.assertEqual(json.loads(outs[0])["window"]["intervals"], 300)


class SweepCommand(unittest.TestCase):

    def test_four_regions(self):
        r = run("sweep", fixture("sec32.json"), "--mvs", "0,1", "--steps", "360")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(len(json.loads(r.stdout)["regions"]), 4)

    def test_ids_accepted(self):
        r = run("sweep", fixture("sec32.json"), "--mvs", "MV1,MV2")
        self.assertEqual(r.returncode, 0, r.stderr)

    def test_too_few_steps_exit_2(self):
        r = run("sweep", fixture("sec32.json"), "--mvs", "0,1", "--steps", "7")
        self.assertEqual(r.returncode, 2)
        self.assertIn("steps", r.stderr)

    def test_csv_rows_match_samples(self):
        doc = json.loads(run("sweep", fixture("sec32.json"), "--mvs", "0,1").stdout)
        csv = run("sweep", fixture("sec32.json"), "--mvs", "0,1", "--format", "csv").stdout
        rows = csv.splitlines()
        self.assertEqual(rows[0], "theta,vertex,pairing_signature,degenerate,refined")
        self.assertEqual(len(rows) - 1, len(doc["samples"]))
        self.assertGreater(len(doc["samples"]), 360)


class WhatIfCommand(unittest.TestCase):

    def test_clamp_reports_diff(self):
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
            json.dump([{"id": "MV1", "lower": 50, "upper": 50}], f)
        try:
            r = run("whatif", fixture("sec32.json"), "--overrides", f.name)
        finally:
            os.unlink(f.name)
        self.assertEqual(r.returncode, 0, r.stderr)
        diff = json.loads(r.stdout)["diff"]
        self.assertTrue(any(p["mv"] == "MV1" for p in diff["pairs"]))

    def test_no_overrides_empty_diff(self):
        r = run("whatif", fixture("sec32.json"))
        out = json.loads(r.stdout)
        self.assertEqual(out["before"], out["after"])
        self.assertEqual(out["diff"]["pairs"], [])


class Usage(unittest.TestCase):

    def test_no_subcommand_exit_2(self):
        self.assertEqual(run().returncode, 2)

    def test_unknown_format_exit_2(self):
        self.assertEqual(run("explain", fixture("sec32.json"), "--format", "xml").returncode, 2)

    def test_help_exit_0(self):
        r = run("--help")
        self.assertEqual(r.returncode, 0)
        self.assertIn("explain", r.stdout)

    def test_log_levels(self):
        quiet = run("explain", "/missing.json", env={"LPX_LOG": "quiet"})
        self.assertEqual(quiet.returncode, 2)
        self.assertEqual(quiet.stderr, "")
        info = run("explain", fixture("sec32.json"), env={"LPX_LOG": "info"})
        self.assertIn("info:", info.stderr)
        default = run("explain", fixture("sec32.json"))
        self.assertEqual(default.stderr, "")


class Fixtures(unittest.TestCase):

    def test_snapshots_match_schema(self):
        s = schema("snapshot.schema.json")
        for name in ("sec32.json", "live.json", "unbounded.json"):
            with open(fixture(name)) as f:
                jsonschema.validate(json.load(f), s)
        with open(fixture("history3.jsonl")) as f:
            for line in f:
                jsonschema.validate(json.loads(line), s)

    def test_synth_is_seeded(self):
        a = subprocess.run([ARGS.synth, "-n", "5", "--seed", "3"], capture_output=True, text=True)
        b = subprocess.run([ARGS.synth, "-n", "5", "--seed", "3"], capture_output=True, text=True)
        c = subprocess.run([ARGS.synth, "-n", "5", "--seed", "4"], capture_output=True, text=True)
        self.assertEqual(a.stdout, b.stdout)
        self.assertNotEqual(a.stdout, c.stdout)
        lines = a.stdout.splitlines()
        self.assertEqual(len(lines), 5)
        jsonschema.validate(json.loads(lines[0]), schema("snapshot.schema.json"))


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class ServeCommand(unittest.TestCase):

    def fetch(self, port, path, body=None):
        req = urllib.request.Request(f"http://127.0.0.1:{port}{path}", data=body,
                                     headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(req, timeout=10) as resp:
                return resp.status, resp.read().decode()
        except urllib.error.HTTPError as e:
            return e.code, e.read().decode()

    def start(self, *extra):
        port = free_port()
        proc = subprocess.Popen([ARGS.lpx, "serve", "--port", str(port), *extra],
                                stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
        self.addCleanup(lambda: proc.poll() is None and proc.kill())
        for _ in range(100):
            try:
                if self.fetch(port, "/api/v1/health")[0] == 200:
                    return proc, port
            except OSError:
                time.sleep(0.05)
        self.fail("server did not come up: " + proc.stderr.read())

    def test_serve_with_history(self):
        proc, port = self.start("--history", fixture("history3.jsonl"),
                                "--intent", fixture("intent.json"))
        status, body = self.fetch(port, "/api/v1/history/summary")
        self.assertEqual(status, 200)
        self.assertEqual(len(json.loads(body)["rows"]), 2)
        with open(fixture("live.json"), "rb") as f:
            self.assertEqual(self.fetch(port, "/api/v1/live", f.read())[0], 200)
        report = json.loads(self.fetch(port, "/api/v1/history/summary")[1])
        self.assertEqual(report["rows"][0]["live"]["color"], "GREEN")
        with open(fixture("unbounded.json"), "rb") as f:
            status, body = self.fetch(port, "/api/v1/explain", f.read())
        self.assertEqual(status, 409)
        self.assertEqual(json.loads(body)["error"]["code"], "Unbounded")
        proc.send_signal(signal.SIGTERM)
        self.assertEqual(proc.wait(timeout=10), 0)

    def test_serve_without_history(self):
        proc, port = self.start()
        self.assertEqual(self.fetch(port, "/api/v1/history/summary")[0], 404)
        proc.send_signal(signal.SIGINT)
        self.assertEqual(proc.wait(timeout=10), 0)

    def test_bad_history_exit_2(self):
        r = run("serve", "--port", str(free_port()), "--history", "/no/history.jsonl")
        self.assertEqual(r.returncode, 2)


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--lpx", required=True)
    parser.add_argument("--synth", required=True)
    parser.add_argument("--fixtures", required=True)
    parser.add_argument("--docs", required=True)
    ARGS, rest = parser.parse_known_args()
    unittest.main(argv=[sys.argv[0], *rest], verbosity=2)
