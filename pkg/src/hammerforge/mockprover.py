"""Deterministic stand-in for an external theorem prover.

Reads a TPTP problem file, looks up its `% problem:` id in a verdict table
(JSON, path given by --table or the HAMMERFORGE_MOCK_TABLE environment
variable), and prints an SZS result.  Table entries look like::

    {"bushy_and_comm_2": {"status": "Theorem",
                          "cite": ["andI", "H"],
                          "sleep": 0}}

`cite` lists source-level names; the mock resolves them against the
problem's own axiom lines so the citation format matches a real prover's
proof output.  Problems missing from the table get GaveUp.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time

from .tptp import UnmangleError, recover_formula_name

_FORMULA = re.compile(r"^\s*(thf|tff|fof|cnf)\(\s*([^,\s]+)\s*,\s*(\w+)")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="mockprover")
    ap.add_argument("problem")
    ap.add_argument("--table", default=os.environ.get("HAMMERFORGE_MOCK_TABLE"))
    ap.add_argument("--timeout", type=float, default=None)
    opts = ap.parse_args(argv)

    try:
        text = open(opts.problem).read()
    except OSError as exc:
        print(f"% SZS status Error for {opts.problem}: {exc}")
        return 2

    problem_id = None
    for line in text.splitlines():
        if line.startswith("% problem:"):
            problem_id = line.split(":", 1)[1].strip()
            break

    table = {}
    if opts.table:
        with open(opts.table) as f:
            table = json.load(f)
    entry = table.get(problem_id, {})
    time.sleep(float(entry.get("sleep", 0)))

    status = entry.get("status", "GaveUp")
    print(f"% SZS status {status} for {opts.problem}")
    if status not in ("Theorem", "Unsatisfiable"):
        return 0

    cited = set(entry.get("cite", []))
    axiom_lines = []
    names_in_file = set()
    for line in text.splitlines():
        m = _FORMULA.match(line)
        if m and m.group(3) in ("axiom", "definition"):
            names_in_file.add(m.group(2).strip("'"))
    # resolve source-level citations to emitted formula names
    keep = set()
    for emitted in names_in_file:
        try:
            src, _ = recover_formula_name(emitted, cited)
        except UnmangleError:
            continue
        keep.add(emitted)
    for line in text.splitlines():
        m = _FORMULA.match(line)
        if m and m.group(2).strip("'") in keep:
            axiom_lines.append(line.strip())

    print(f"% SZS output start Proof for {opts.problem}")
    for line in axiom_lines:
        print(line)
    print(f"% SZS output end Proof for {opts.problem}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
