"""Acceptance suite.

Each test exercises one advertised guarantee end to end and prints a
single PASS/FAIL line with its runtime, bypassing output capture so the
lines show up in a plain `pytest -v` run.
"""

import itertools
import json
import os
import random
import re
import shutil
import string
import subprocess
import sys
import time
from pathlib import Path

import pytest

from oracles import (
    FakeCandidate,
    FakeSpan,
    brute_select,
    count_candidate_sites,
    expected_rewrite_length,
    random_laminar_forest,
)
from termgen import context_for, random_term, random_type, scramble_hints

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture()
def criterion(request, capsys):
    """Time the body and print one pass/fail line for the criterion."""
    name = request.node.name.removeprefix("test_")
    start = time.monotonic()
    outcome = {"limit": None}

    def set_limit(seconds):
        outcome["limit"] = seconds

    yield set_limit
    elapsed = time.monotonic() - start
    failed = getattr(request.node, "rep_failed", False)
    skipped = getattr(request.node, "rep_skipped", False)
    verdict = "FAIL" if failed else "PASS"
    if outcome["limit"] is not None and elapsed >= outcome["limit"]:
        verdict = "FAIL"
    if skipped:
        verdict = "SKIP"
    with capsys.disabled():
        print(f"[acceptance] {verdict} {name} ({elapsed:.2f}s)")
    assert outcome["limit"] is None or elapsed < outcome["limit"], (
        f"{name} exceeded {outcome['limit']}s ({elapsed:.2f}s)"
    )


@pytest.fixture(scope="module")
def dev(corpus_text):
    from hammerforge.script import check_script

    return check_script(corpus_text)


@pytest.fixture(scope="module")
def bushy(dev):
    from hammerforge.hammer import gen_bushy

    return gen_bushy(dev)


def test_kernel_fixture_and_mutants(criterion):
    criterion(1.0)
    from test_kernel import TestAndIntroFixture, and_intro_claim, and_intro_proof

    from hammerforge.basis import bootstrap
    from hammerforge.kernel import Context, KernelError, check_proof

    sig = bootstrap()
    report = check_proof(sig, Context(), and_intro_proof(), and_intro_claim())
    assert list(report.holes) == []
    mutants = list(TestAndIntroFixture().mutants())
    assert len(mutants) == 10
    for bad in mutants:
        with pytest.raises(KernelError):
            check_proof(sig, Context(), bad, and_intro_claim())


def test_kernel_random_term_properties(criterion):
    criterion(30.0)
    from hammerforge.basis import bootstrap
    from hammerforge.kernel import alpha_eq, normalize, typecheck

    sig = bootstrap()
    rng = random.Random(20260826)
    for _ in range(1000):
        ty = random_type(rng, 2)
        env = tuple(random_type(rng, 1) for _ in range(rng.randint(0, 3)))
        t = random_term(rng, ty, env, 6)
        ctx = context_for(env)
        assert typecheck(sig, ctx, t) == ty
        n = normalize(sig, t)
        assert typecheck(sig, ctx, n) == ty
        assert alpha_eq(normalize(sig, n), n)
        assert scramble_hints(t, rng) == t


def test_fragment_detection_and_export(criterion, dev, bushy):
    criterion(1.0)
    from hammerforge.kernel import alpha_eq
    from hammerforge.tptp import (
        NotFirstOrder,
        fo_fragment_check,
        parse_th0,
        recover_formula_name,
        to_fof,
        to_th0,
    )

    cands = {c.problem_id: c for c in bushy}
    fo = cands["bushy_not_In_Empty_1"].bundle
    fo_fragment_check(fo)
    assert to_fof(fo) == (GOLDEN / "not_In_Empty_bushy.fof").read_text()
    ho = cands["bushy_ordinal_ordsucc_demo_4"].bundle
    th0 = to_th0(ho)
    assert th0 == (GOLDEN / "ordinal_ordsucc_demo_bushy.p").read_text()
    parsed = parse_th0(th0)
    names = ho.names()
    orig = {f.name: f.prop for f in ho.formulas}
    for emitted, _role, prop in parsed.formulas:
        src, kind = recover_formula_name(emitted, names)
        want = ho.conjecture if kind == "conjecture" else orig[src]
        assert alpha_eq(prop, want)
    # a Prop-quantified bundle is rejected with a reason attached
    with pytest.raises(NotFirstOrder) as ei:
        fo_fragment_check(cands["bushy_imp_refl_1"].bundle)
    assert str(ei.value).strip()


def test_mangling_identity(criterion):
    criterion(5.0)
    from hammerforge.tptp import mangle, unmangle

    assert "ordinal_5Fordsucc" in mangle("ordinal_ordsucc")
    rng = random.Random(12)
    alphabet = string.ascii_letters + string.digits + "_'!@#$%^&*()-+=. "
    for _ in range(10000):
        name = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 32)))
        assert unmangle(mangle(name)) == name


def test_supersede_filtering(criterion):
    criterion(10.0)
    from hammerforge.hammer import select_maximal

    chain = [
        FakeCandidate("c1", FakeSpan(0, 100)),
        FakeCandidate("c2", FakeSpan(10, 100)),
        FakeCandidate("c3", FakeSpan(20, 100)),
    ]
    for bits in itertools.product([False, True], repeat=3):
        solved = {c.problem_id for c, b in zip(chain, bits) if b}
        got = [c.problem_id for c in select_maximal(chain, solved)]
        want = [c.problem_id for c in brute_select(chain, solved)]
        assert got == want, solved
    rng = random.Random(77)
    for _ in range(500):
        cands = random_laminar_forest(rng)
        solved = {c.problem_id for c in cands if rng.random() < 0.5}
        got = {c.problem_id for c in select_maximal(cands, solved)}
        want = {c.problem_id for c in brute_select(cands, solved)}
        assert got == want


def test_pipeline_end_to_end(criterion, corpus_text, dev, bushy):
    criterion(30.0)
    from hammerforge.driver import RunResult
    from hammerforge.hammer import (
        aby_line,
        citations_from_result,
        gen_bushy,
        minimize_script,
        verify_rewrite,
    )
    from hammerforge.kernel import alpha_eq

    # corpus scale floor and the generation-count oracle
    assert len(dev.theorems) >= 12
    assert len(bushy) >= 60
    assert len(bushy) == count_candidate_sites(corpus_text)

    # mark 80% of the problems solved
    rng = random.Random(5)
    results = [
        RunResult(
            c.problem_id,
            f"{c.problem_id}.p",
            "mock",
            "Theorem" if rng.random() < 0.8 else "GaveUp",
            0.01,
            [],
            "",
        )
        for c in bushy
    ]
    new_text, selected = minimize_script(corpus_text, results, mode="bushy")
    assert selected

    # re-elaborates cleanly, statements intact
    new_dev = verify_rewrite(corpus_text, new_text)

    # every selection shows up as a pending obligation whose premises and
    # conclusion match the plan
    by_cand = {c.problem_id: c for c in bushy}
    plan = {}
    for c in selected:
        gs, hs = citations_from_result(c, None)
        plan[(c.theorem, tuple(gs), tuple(hs))] = c
    new_aby = {}
    for th in new_dev.theorems:
        for req in th.aby_requests:
            new_aby.setdefault(th.name, []).append(req)
    matched = 0
    for (theorem, gs, hs), cand in plan.items():
        reqs = new_aby.get(theorem, [])
        hits = [r for r in reqs if tuple(r.deps) == tuple([*gs, *hs])]
        assert hits, (theorem, gs, hs)
        matched += 1
    assert matched == len(selected)
    new_bushy = {c.problem_id: c for c in gen_bushy(new_dev)}
    aby_cands = [c for c in new_bushy.values() if c.kind == "aby"]
    for c in selected:
        twins = [
            n
            for n in aby_cands
            if n.theorem == c.theorem
            and alpha_eq(n.bundle.conjecture, c.bundle.conjecture)
        ]
        assert twins, c.problem_id

    # character-reduction ratio against plain length arithmetic
    repl = []
    for c in selected:
        gs, hs = citations_from_result(c, None)
        repl.append((c.span.start, c.span.end, aby_line(gs, hs)))
    want_len = expected_rewrite_length(corpus_text, repl)
    old_len = len(corpus_text.encode())
    got_ratio = (old_len - len(new_text.encode())) / old_len
    want_ratio = (old_len - want_len) / old_len
    assert abs(got_ratio - want_ratio) < 1e-12
    assert got_ratio > 0


def test_report_arithmetic(criterion):
    criterion(1.0)
    from hammerforge.hammer import CoverageReport, CoverageRow, percent_str, render_table

    assert percent_str(32675, 41738) == "78.3"
    assert percent_str(3223, 3401) == "94.8"
    assert percent_str(159363, 346152) == "46"
    rep = CoverageReport(
        mode="bushy", rows=[CoverageRow("all", 32675, 41738)]
    )
    assert "78.3" in render_table(rep)


def test_driver_timeout_contract(criterion, tmp_path, bushy, mock_registry):
    criterion(20.0)
    from hammerforge.driver import load_registry, run_prover
    from hammerforge.hammer import write_problems
    from hammerforge.tptp import recover_formula_name

    write_problems(bushy, str(tmp_path))
    pid = "bushy_ordinal_ordsucc_demo_4"
    table = {
        pid: {"status": "Theorem", "cite": ["ordinal_ordsucc", "Ha"]},
        "bushy_imp_refl_1": {"status": "Theorem", "sleep": 30},
    }
    spec = load_registry(mock_registry(table))[0]

    r = run_prover(spec, str(tmp_path / f"{pid}.p"), timeout=10)
    assert r.status == "Theorem"
    used = {
        recover_formula_name(n, {"ordinal_ordsucc", "Ha"})[0]
        for n in r.used_axioms
    }
    assert used == {"ordinal_ordsucc", "Ha"}

    t0 = time.monotonic()
    r = run_prover(spec, str(tmp_path / "bushy_imp_refl_1.p"), timeout=0.5)
    assert r.status == "Timeout"
    assert time.monotonic() - t0 < 6.0

    r = run_prover(spec, str(tmp_path / "bushy_and_comm_1.p"), timeout=10)
    assert r.status in ("GaveUp", "Unknown")


def test_reconstruction(criterion, dev, bushy):
    criterion(5.0)
    from test_reconstruct import ONE_STEP, PROVER_DECLS

    from hammerforge.kernel import check_proof
    from hammerforge.reconstruct import (
        audit_skeleton,
        parse_dedukti,
        recover_names,
        scaffold,
    )

    cand = next(
        c
        for c in bushy
        if c.theorem == "ordinal_ordsucc_demo" and c.kind == "exact"
    )
    th = next(t for t in dev.theorems if t.name == "ordinal_ordsucc_demo")
    goal = next(r for r in th.records if r.kind == "exact").goal

    decls = parse_dedukti(PROVER_DECLS)
    rec = recover_names(decls, cand.bundle, dev.sig, goal)
    assert rec.mapping == {
        "axiom_ordinal_5Fordsucc9": "ordinal_ordsucc",
        "axiom_c_Ha16": "Ha",
        "axiom_18": "NegatedConjecture",
    }

    decls = parse_dedukti(ONE_STEP)
    rec = recover_names(decls, cand.bundle, dev.sig, goal)
    sk = scaffold(dev.sig, goal, decls, rec)
    report = audit_skeleton(dev.sig, sk)
    assert report.holes == 0 and report.complete
    assert (
        list(check_proof(dev.sig, goal.ctx, sk.proof, goal.conclusion).holes)
        == []
    )


def test_session_end_to_end(criterion, corpus_text, dev, mock_registry):
    criterion(10.0)
    from test_session import demo_offsets, manager_with_mock, wait_done

    _th, _claim, exact = demo_offsets(dev)
    mgr = manager_with_mock(mock_registry, dev)
    sid = mgr.open(corpus_text)
    goal = mgr.goal_at(sid, exact.span.start)
    assert goal["conclusion"] == "ordinal (ordsucc alpha)"
    assert ["Ha", "ordinal alpha"] in goal["hyps"]
    job = mgr.hammer_at(sid, exact.span.start, mode="chainy")["jobId"]
    st = wait_done(mgr, job)
    assert st["state"] == "Done", st
    assert st["abyText"] == "aby ordinal_ordsucc Ha."
    start, end = st["replaceSpan"]
    mgr.edit(sid, start, end, st["abyText"])
    out = mgr.check_prefix(sid)
    assert out["diagnostics"] == []


def test_workbench_protocol_replay(criterion):
    """Secondary component: run its vitest suite against the real bridge."""
    criterion(120.0)
    frontend = ROOT / "frontend"
    if not (frontend / "node_modules").exists():
        pytest.skip("frontend dependencies not installed")
    proc = subprocess.run(
        ["npm", "test", "--silent"],
        cwd=str(frontend),
        capture_output=True,
        text=True,
        timeout=110,
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr
