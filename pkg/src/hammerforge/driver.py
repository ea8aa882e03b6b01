"""External prover execution: registry files, single runs with hard
timeouts, schedules over problem directories, and JSONL result persistence.
"""

from __future__ import annotations

import configparser
import json
import os
import re
import shlex
import subprocess
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .tptp import NotFirstOrder, fof_from_parsed, parse_th0

REGISTRY_ENV = "HAMMERFORGE_PROVERS"


class RegistryError(Exception):
    pass


@dataclass(frozen=True)
class ProverSpec:
    name: str
    path: str
    args: tuple[str, ...]      # {file} and {timeout} are substituted
    dialect: str               # "th0" | "fof"

    def command(self, problem_path: str, timeout: float) -> list[str]:
        out = [self.path]
        for a in self.args:
            out.append(a.replace("{file}", problem_path)
                        .replace("{timeout}", str(int(timeout))))
        return out


@dataclass
class RunResult:
    problem_id: str
    problem_path: str
    prover: str
    status: str                # Theorem | CounterSatisfiable | Timeout |
                               # GaveUp | Error | Unknown | NotApplicable
    seconds: float
    used_axioms: list[str] = field(default_factory=list)
    detail: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @staticmethod
    def from_json(line: str) -> "RunResult":
        d = json.loads(line)
        return RunResult(**d)


def load_registry(path: Optional[str] = None) -> list[ProverSpec]:
    """Read prover specs from an INI file.  The HAMMERFORGE_PROVERS
    environment variable overrides the path argument."""
    actual = os.environ.get(REGISTRY_ENV) or path
    if actual is None:
        raise RegistryError("no prover registry given")
    cp = configparser.ConfigParser()
    read = cp.read(actual)
    if not read:
        raise RegistryError(f"cannot read registry {actual!r}")
    specs = []
    for section in cp.sections():
        s = cp[section]
        if "path" not in s:
            raise RegistryError(f"[{section}] is missing 'path'")
        dialect = s.get("dialect", "th0").strip().lower()
        if dialect not in ("th0", "fof"):
            raise RegistryError(f"[{section}] has unknown dialect {dialect!r}")
        args = tuple(shlex.split(s.get("args", "{file}")))
        specs.append(ProverSpec(section, s["path"], args, dialect))
    if not specs:
        raise RegistryError(f"registry {actual!r} defines no provers")
    return specs


# ---------------------------------------------------------------------------
# SZS handling

_SZS_STATUS = re.compile(r"SZS\s+status\s+(\w+)")
_SZS_START = re.compile(r"SZS\s+output\s+start")
_SZS_END = re.compile(r"SZS\s+output\s+end")
_FORMULA_NAME = re.compile(r"^\s*(?:thf|tff|fof|cnf)\(\s*([^,\s]+)\s*,\s*(\w+)")

_STATUS_MAP = {
    "Theorem": "Theorem",
    "Unsatisfiable": "Theorem",
    "ContradictoryAxioms": "Theorem",
    "CounterSatisfiable": "CounterSatisfiable",
    "Satisfiable": "CounterSatisfiable",
    "Timeout": "Timeout",
    "ResourceOut": "Timeout",
    "GaveUp": "GaveUp",
    "Error": "Error",
}


def parse_szs_status(output: str) -> str:
    for line in output.splitlines():
        s = line.lstrip("%# \t")
        m = _SZS_STATUS.search(s)
        if m:
            return _STATUS_MAP.get(m.group(1), "Unknown")
    return "Unknown"


def parse_used_axioms(output: str) -> list[str]:
    """Formula names with role axiom cited inside the SZS proof block."""
    used: list[str] = []
    inside = False
    for line in output.splitlines():
        bare = line.lstrip("%# \t")
        if _SZS_START.search(bare):
            inside = True
            continue
        if _SZS_END.search(bare):
            inside = False
            continue
        if not inside:
            continue
        m = _FORMULA_NAME.match(line) or _FORMULA_NAME.match(bare)
        if m and m.group(2) in ("axiom", "definition"):
            name = m.group(1).strip("'")
            if name not in used:
                used.append(name)
    return used


# ---------------------------------------------------------------------------
# running

def run_prover(spec: ProverSpec, problem_path: str, timeout: float,
               problem_id: Optional[str] = None) -> RunResult:
    """Run one prover on one problem file with a hard timeout."""
    import time
    if problem_id is None:
        problem_id = _problem_id_of(problem_path)
    cmd = spec.command(problem_path, timeout)
    start = time.monotonic()
    try:
        proc = subprocess.Popen(cmd, stdout=subprocess.PIPE,
                                stderr=subprocess.STDOUT, text=True)
    except OSError as exc:
        return RunResult(problem_id, problem_path, spec.name, "Error",
                         0.0, [], f"cannot launch: {exc}")
    try:
        out, _ = proc.communicate(timeout=timeout + 2.0)
    except subprocess.TimeoutExpired:
        proc.kill()
        proc.communicate()
        elapsed = time.monotonic() - start
        return RunResult(problem_id, problem_path, spec.name, "Timeout",
                         round(elapsed, 3), [], "killed after grace period")
    elapsed = time.monotonic() - start
    status = parse_szs_status(out)
    if status == "Unknown" and proc.returncode not in (0, 1):
        status = "Error"
    used = parse_used_axioms(out) if status == "Theorem" else []
    detail = "" if status in ("Theorem", "CounterSatisfiable") else out[-2000:]
    return RunResult(problem_id, problem_path, spec.name, status,
                     round(elapsed, 3), used, detail)


def _problem_id_of(problem_path: str) -> str:
    try:
        with open(problem_path) as f:
            for line in f:
                if line.startswith("% problem:"):
                    return line.split(":", 1)[1].strip()
                if not line.startswith("%"):
                    break
    except OSError:
        pass
    return Path(problem_path).stem


def run_schedule(problem_paths: Iterable[str], specs: list[ProverSpec],
                 timeout: float, jobs: Optional[int] = None,
                 stop_on_theorem: bool = True) -> list[RunResult]:
    """Run every prover on every problem; `jobs` bounds concurrency.

    Problems are assumed to be TH0 files.  For FOF provers the problem is
    translated on the fly; problems outside the first-order fragment get a
    NotApplicable result for that prover."""
    paths = list(problem_paths)
    jobs = jobs or os.cpu_count() or 1

    def solve_one(path: str) -> list[RunResult]:
        pid = _problem_id_of(path)
        results = []
        fof_path: Optional[str] = None
        fof_err: Optional[str] = None
        for spec in specs:
            target = path
            if spec.dialect == "fof":
                if fof_path is None and fof_err is None:
                    try:
                        text = fof_from_parsed(parse_th0(Path(path).read_text()))
                        fd, fof_path = tempfile.mkstemp(suffix=".fof.p")
                        with os.fdopen(fd, "w") as f:
                            f.write(text)
                    except NotFirstOrder as exc:
                        fof_err = str(exc)
                if fof_err is not None:
                    results.append(RunResult(pid, path, spec.name,
                                             "NotApplicable", 0.0, [], fof_err))
                    continue
                target = fof_path
            r = run_prover(spec, target, timeout, problem_id=pid)
            if spec.dialect == "fof":
                r.problem_path = path
            results.append(r)
            if stop_on_theorem and r.status == "Theorem":
                break
        if fof_path is not None:
            os.unlink(fof_path)
        return results

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        nested = list(pool.map(solve_one, paths))
    return [r for rs in nested for r in rs]


def write_results(results: Iterable[RunResult], path: str) -> None:
    with open(path, "w") as f:
        for r in results:
            f.write(r.to_json() + "\n")


def read_results(path: str) -> list[RunResult]:
    out = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if line:
                out.append(RunResult.from_json(line))
    return out
