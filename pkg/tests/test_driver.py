import json
import time

import pytest

from hammerforge.driver import (
    ProverSpec,
    RunResult,
    load_registry,
    parse_szs_status,
    parse_used_axioms,
    read_results,
    run_prover,
    run_schedule,
    write_results,
)
from hammerforge.hammer import gen_bushy, write_problems


@pytest.fixture(scope="module")
def dev(corpus_text):
    from hammerforge.script import check_script

    return check_script(corpus_text)


@pytest.fixture(scope="module")
def problem_dir(dev, tmp_path_factory):
    d = tmp_path_factory.mktemp("problems")
    write_problems(gen_bushy(dev), str(d))
    return d


def test_status_parsing():
    cases = {
        "% SZS status Theorem for x.p": "Theorem",
        "% SZS status Unsatisfiable for x.p": "Theorem",
        "% SZS status CounterSatisfiable for x.p": "CounterSatisfiable",
        "% SZS status Timeout for x.p": "Timeout",
        "% SZS status ResourceOut for x.p": "Timeout",
        "% SZS status GaveUp for x.p": "GaveUp",
        "no status at all": "Unknown",
    }
    for line, want in cases.items():
        assert parse_szs_status(line) == want, line


def test_used_axiom_extraction_from_proof_block():
    output = "\n".join(
        [
            "% SZS status Theorem for p.p",
            "% SZS output start Proof for p.p",
            "thf(axiom_ordinal_5Fordsucc22, axiom, (![Alpha: iota]: ((ordinal @ Alpha) => (ordinal @ (ordsucc @ Alpha))))).",
            "thf(axiom_c_Ha23, axiom, (ordinal @ alpha)).",
            "% SZS output end Proof for p.p",
        ]
    )
    assert parse_used_axioms(output) == [
        "axiom_ordinal_5Fordsucc22",
        "axiom_c_Ha23",
    ]


def test_registry_loading(mock_registry, monkeypatch):
    path = mock_registry({})
    specs = load_registry(path)
    assert len(specs) == 1
    assert specs[0].name == "mock"
    assert specs[0].dialect == "th0"
    monkeypatch.setenv("HAMMERFORGE_PROVERS", path)
    assert [s.name for s in load_registry()] == ["mock"]


def spec_for(mock_registry, table, **kw):
    return load_registry(mock_registry(table, **kw))[0]


class TestRunProver:
    def test_theorem_with_citations(self, mock_registry, problem_dir):
        pid = "bushy_ordinal_ordsucc_demo_4"
        spec = spec_for(
            mock_registry,
            {pid: {"status": "Theorem", "cite": ["ordinal_ordsucc", "Ha"]}},
        )
        r = run_prover(spec, str(problem_dir / f"{pid}.p"), timeout=10)
        assert r.status == "Theorem"
        recovered = set()
        from hammerforge.tptp import recover_formula_name

        for emitted in r.used_axioms:
            src, _ = recover_formula_name(emitted, {"ordinal_ordsucc", "Ha"})
            recovered.add(src)
        assert recovered == {"ordinal_ordsucc", "Ha"}

    def test_gave_up_by_default(self, mock_registry, problem_dir):
        pid = "bushy_imp_refl_1"
        spec = spec_for(mock_registry, {})
        r = run_prover(spec, str(problem_dir / f"{pid}.p"), timeout=10)
        assert r.status == "GaveUp"
        assert r.used_axioms == []

    def test_timeout_kills_within_grace(self, mock_registry, problem_dir):
        pid = "bushy_imp_refl_1"
        spec = spec_for(mock_registry, {pid: {"status": "Theorem", "sleep": 30}})
        t0 = time.monotonic()
        r = run_prover(spec, str(problem_dir / f"{pid}.p"), timeout=0.5)
        elapsed = time.monotonic() - t0
        assert r.status == "Timeout"
        assert elapsed < 6.0

    def test_reported_seconds_are_sane(self, mock_registry, problem_dir):
        pid = "bushy_imp_refl_1"
        spec = spec_for(mock_registry, {pid: {"status": "Theorem", "sleep": 0.2}})
        r = run_prover(spec, str(problem_dir / f"{pid}.p"), timeout=10)
        assert r.seconds >= 0.2


class TestSchedule:
    def test_stop_on_theorem(self, mock_registry, problem_dir, tmp_path):
        pid = "bushy_imp_refl_1"
        table = {pid: {"status": "Theorem", "cite": []}}
        t1 = tmp_path / "t1.json"
        t1.write_text(json.dumps(table))
        registry = tmp_path / "reg.ini"
        import sys

        registry.write_text(
            "[first]\n"
            f"path = {sys.executable}\n"
            f"args = -m hammerforge.mockprover --table {t1} {{file}}\n"
            "dialect = th0\n"
            "[second]\n"
            f"path = {sys.executable}\n"
            f"args = -m hammerforge.mockprover --table {t1} {{file}}\n"
            "dialect = th0\n"
        )
        specs = load_registry(str(registry))
        results = run_schedule([str(problem_dir / f"{pid}.p")], specs, timeout=10)
        theorem_hits = [r for r in results if r.status == "Theorem"]
        assert len(theorem_hits) == 1
        assert theorem_hits[0].prover == "first"

    def test_fof_prover_skips_higher_order_problem(
        self, mock_registry, problem_dir
    ):
        pid = "bushy_ordinal_ordsucc_demo_4"
        spec = spec_for(
            mock_registry, {pid: {"status": "Theorem"}}, dialect="fof"
        )
        results = run_schedule(
            [str(problem_dir / f"{pid}.p")], [spec], timeout=10
        )
        assert [r.status for r in results] == ["NotApplicable"]

    def test_fof_prover_gets_translated_problem(self, mock_registry, problem_dir):
        pid = "bushy_not_In_Empty_1"
        spec = spec_for(
            mock_registry,
            {pid: {"status": "Theorem", "cite": ["EmptyAx"]}},
            dialect="fof",
        )
        results = run_schedule(
            [str(problem_dir / f"{pid}.p")], [spec], timeout=10
        )
        assert [r.status for r in results] == ["Theorem"]


def test_results_jsonl_round_trip(tmp_path):
    rs = [
        RunResult("p1", "/tmp/p1.p", "mock", "Theorem", 0.1, ["axiom_a1"], ""),
        RunResult("p2", "/tmp/p2.p", "mock", "Timeout", 5.0, [], "killed"),
    ]
    path = tmp_path / "results.jsonl"
    write_results(rs, str(path))
    back = read_results(str(path))
    assert back == rs
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 2
    assert all(json.loads(line)["problem"] if "problem" in json.loads(line) else True for line in lines)
