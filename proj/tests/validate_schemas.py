#!/usr/bin/env python3
"""Validate shipped problem files and generated reports against the schemas."""

import argparse
import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema


def load(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def check(validator, doc, label, failures):
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
    for e in errors:
        failures.append(f"{label}: {'/'.join(map(str, e.path)) or '<root>'}: {e.message}")
    print(f"{'ok  ' if not errors else 'FAIL'} {label}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tool", required=True, help="path to the ulamkit binary")
    ap.add_argument("--source", required=True, help="source tree")
    ap.add_argument("--work", required=True, help="scratch directory")
    args = ap.parse_args()

    src = pathlib.Path(args.source)
    work = pathlib.Path(args.work)
    shutil.rmtree(work, ignore_errors=True)
    work.mkdir(parents=True)

    cls = jsonschema.Draft202012Validator
    problem_schema = load(src / "schemas" / "problem.schema.json")
    report_schema = load(src / "schemas" / "report.schema.json")
    cls.check_schema(problem_schema)
    cls.check_schema(report_schema)
    problem_v = cls(problem_schema)
    report_v = cls(report_schema)

    failures = []
    problems = sorted((src / "problems").glob("*.json"))
    if not problems:
        failures.append("no problem files found")
    for p in problems:
        check(problem_v, load(p), f"problem {p.name}", failures)

    runs = []
    for p in problems:
        runs.append(("analyze", p, ["--best"]))
        runs.append(("empirical", p, ["--trials", "4"]))
    runs.append(("analyze", src / "problems" / "const_1_3_2.json", ["--fast-path", "--best"]))
    runs.append(("analyze", src / "problems" / "exeq01.json",
                 ["--solve-rho", "t0=0.5,rho0=-2"]))

    for k, (cmd, p, extra) in enumerate(runs):
        out = work / f"run{k:02d}"
        res = subprocess.run(
            [args.tool, cmd, str(p), "--reproducible", "--out", str(out)] + extra,
            capture_output=True, text=True, timeout=240)
        label = f"{cmd} {p.stem} {' '.join(extra)}".strip()
        if res.returncode == 1:
            failures.append(f"{label}: input error: {res.stderr.strip()}")
            continue
        reports = list(out.glob("*.report.json"))
        if len(reports) != 1:
            failures.append(f"{label}: expected one report, found {len(reports)}")
            continue
        doc = load(reports[0])
        if json.loads(res.stdout) != doc:
            failures.append(f"{label}: stdout and report file differ")
        check(report_v, doc, f"report {label}", failures)

    if failures:
        print("\n".join(failures), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
