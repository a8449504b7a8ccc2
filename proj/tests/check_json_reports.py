#!/usr/bin/env python3
"""Validate `qeta --json` output against docs/report.schema.json and check
that the text and JSON renderings agree on every task's status.

usage: check_json_reports.py QETA_BINARY SCHEMA JOB_FILE
"""
import json
import re
import subprocess
import sys

import jsonschema

TEXT_LINE = re.compile(r"^(PASS|FAIL|ERROR)  (.*?)  \(checked (\d+)\)(?:  .*)?$")


def run(binary, args):
    proc = subprocess.run([binary, *args], capture_output=True, text=True, check=False)
    return proc.returncode, proc.stdout


def main():
    binary, schema_path, job = sys.argv[1:4]
    with open(schema_path, encoding="utf-8") as fh:
        schema = json.load(fh)
    validator = jsonschema.Draft202012Validator(schema)

    commands = [
        ["certify", "--level", "18", "--eta", "9:1,18:1,1:-1,2:-1"],
        ["certify", "--level", "2", "--eta", "1:1,2:-1"],
        ["orders", "--level", "6", "--eta", "3:4,6:4,1:-4,2:-4", "--expect", "-1,-1,1,2"],
        ["expand", "--level", "6", "--eta", "3:4,6:4,1:-4,2:-4", "--terms", "12"],
        ["u", "--level", "18", "--eta", "9:1,18:1,1:-1,2:-1", "--terms", "12"],
        ["decompose", "--level", "18", "--eta", "9:1,18:1,1:-1,2:-1", "--u", "3"],
        ["theorem11", "--terms", "100"],
        ["theorem12", "--alpha-max", "2", "--upto", "1000"],
        ["watson", "--k-max", "2", "--upto", "1000"],
        ["replay3"],
        ["newton", "--i-max", "4", "--precision", "60", "--depth", "3"],
        ["run", job],
    ]
    failures = 0
    for args in commands:
        code_json, out_json = run(binary, ["--json", *args])
        code_text, out_text = run(binary, args)
        if code_json != code_text:
            print(f"{args}: exit codes differ ({code_json} vs {code_text})")
            failures += 1
        json_status = []
        for line in out_json.splitlines():
            report = json.loads(line)
            errors = sorted(validator.iter_errors(report), key=str)
            for err in errors:
                print(f"{args}: schema violation: {err.message}")
                failures += 1
            json_status.append((report["task"], report["status"], report["checked"]))
        text_status = []
        for line in out_text.splitlines():
            m = TEXT_LINE.match(line)
            if m:
                text_status.append((m.group(2), m.group(1).lower(), int(m.group(3))))
        if json_status != text_status:
            print(f"{args}: text and JSON disagree\n  json: {json_status}\n  text: {text_status}")
            failures += 1
        if not json_status:
            print(f"{args}: no reports")
            failures += 1
    print(f"{len(commands)} commands checked, {failures} problems")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
