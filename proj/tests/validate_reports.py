#!/usr/bin/env python3
# Copyright 2026 The SplitNash Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Validates CLI JSON reports and shipped input files against the schemas.

usage: validate_reports.py <splitnash binary> <schemas dir> <data dir>
"""

import json
import pathlib
import subprocess
import sys

import jsonschema

COMMANDS = [
    ["verify-nash", "example-4.1:E2", "--profile", "9,12"],
    ["verify-nash", "example-4.1:E1", "--profile", "1,2,4"],
    ["solve-nash", "quadratic-sanity:N"],
    ["verify-split", "example-4.1", "--profile", "1,2,4"],
    ["solve-split", "quadratic-sanity"],
    ["solve-split", "quadratic-mismatch"],
    ["cdp-check", "convex-counterexample", "--samples", "200"],
    ["cdp-check", "quadratic-sanity", "--samples", "200"],
    ["kkm-probe", "quadratic-sanity", "--points", "5"],
    ["bertrand-enumerate", "--costs", "1,2", "--range", "0,5", "--grid-step", "0.05"],
    ["audit", "example-4.1"],
    ["audit", "bertrand", "--grid-step", "0.05"],
    ["audit", "thm-6.2"],
    ["audit", "cdp", "--samples", "200"],
    ["audit", "kkm", "--points", "5"],
]


def run(binary, args):
    proc = subprocess.run([binary, *args, "--format", "json", "--deterministic"],
                          capture_output=True, text=True, check=False)
    return proc.returncode, proc.stdout


def main():
    binary, schemas, data = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    report_schema = json.loads((schemas / "report.schema.json").read_text())
    problem_schema = json.loads((schemas / "problem.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(report_schema)
    jsonschema.Draft202012Validator.check_schema(problem_schema)
    failures = []

    for args in COMMANDS:
        label = " ".join(args)
        code, out = run(binary, args)
        try:
            report = json.loads(out)
            jsonschema.validate(report, report_schema, cls=jsonschema.Draft202012Validator)
        except (json.JSONDecodeError, jsonschema.ValidationError) as exc:
            failures.append(f"{label}: {exc}")
            continue
        if report["exit_code"] != code:
            failures.append(f"{label}: report exit_code {report['exit_code']} != process exit {code}")
        if run(binary, args)[1] != out:
            failures.append(f"{label}: deterministic rerun differs")
        print(f"ok   {label} (exit {code})")

    for path in sorted(data.glob("*.json")):
        try:
            jsonschema.validate(json.loads(path.read_text()), problem_schema,
                                cls=jsonschema.Draft202012Validator)
            print(f"ok   {path.name}")
        except jsonschema.ValidationError as exc:
            failures.append(f"{path.name}: {exc.message}")

    for f in failures:
        print(f"FAIL {f}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
