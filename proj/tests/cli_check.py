#!/usr/bin/env python3
"""Golden, schema and exit-code checks for the ordapprox CLI.

usage: cli_check.py BINARY GOLDEN_DIR SCHEMA [--update]
"""
import json
import os
import subprocess
import sys

import jsonschema


def run(binary, case, cwd):
    env = {k: v for k, v in os.environ.items() if k != "ORDAPPROX_CONFIG"}
    env.update(case.get("env", {}))
    p = subprocess.run([binary] + case["args"], cwd=cwd, env=env, capture_output=True)
    return p.returncode, p.stdout


def main():
    binary, golden, schema_path = (os.path.abspath(a) for a in sys.argv[1:4])
    update = "--update" in sys.argv[4:]
    with open(schema_path) as f:
        schema = json.load(f)
    with open(os.path.join(golden, "cases.json")) as f:
        cases = json.load(f)

    failures = []
    for case in cases:
        name = case["name"]
        code1, out1 = run(binary, case, golden)
        code2, out2 = run(binary, case, golden)
        want = case.get("exit", 0)
        if code1 != want:
            failures.append(f"{name}: exit {code1}, expected {want}")
        if (code1, out1) != (code2, out2):
            failures.append(f"{name}: output differs between two runs")
        expected_file = os.path.join(golden, "expected", name + ".out")
        if update:
            with open(expected_file, "wb") as f:
                f.write(out1)
        elif not os.path.exists(expected_file):
            failures.append(f"{name}: missing {expected_file}")
        else:
            with open(expected_file, "rb") as f:
                if f.read() != out1:
                    failures.append(f"{name}: output differs from golden file")
        if want == 2:
            if out1:
                failures.append(f"{name}: usage errors must not write to stdout")
            continue
        if case.get("csv"):
            header = out1.decode().splitlines()[0] if out1 else ""
            if header != "s,r,residual,scaled_residual":
                failures.append(f"{name}: bad CSV header {header!r}")
            continue
        try:
            doc = json.loads(out1)
            jsonschema.validate(doc, dict(schema, **{"$ref": "#/$defs/" + case["schema"]}))
        except (ValueError, jsonschema.ValidationError) as e:
            failures.append(f"{name}: {str(e).splitlines()[0]}")

    for f in failures:
        print("FAIL", f)
    print(f"{len(cases)} cases, {len(failures)} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
