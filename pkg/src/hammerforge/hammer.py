"""ATP problem generation from elaborated scripts, selection of maximal
solved subproofs, and rewriting scripts to cite the automation.

Two generation modes:

* bushy: each problem carries only the premises the original subproof
  actually used (plus reachable definitions);
* chainy: each problem carries every axiom and theorem preceding the
  enclosing theorem in the signature, and the whole local context.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .basis import bootstrap, classical_frontier
from .driver import RunResult
from .kernel import (
    All, App, AxiomEntry, Const, DefEntry, Imp, Lam, Prim, Signature,
    SimpleType, Term, ThmEntry, Var, alpha_eq, const_names,
)
from .script import Development, ElaboratedTheorem, Span, TraceRecord, check_script
from .tptp import (
    ProblemBundle, ProblemFormula, UnmangleError, _is_native, def_axiom,
    def_closure, recover_formula_name, to_th0,
)


class HammerError(Exception):
    pass


class OverlapWithoutNesting(HammerError):
    pass


class SpanDrift(HammerError):
    pass


@dataclass
class Candidate:
    problem_id: str
    theorem: str
    seq: int
    span: Span                 # tactic start to subproof completion
    kind: str
    goal_id: int
    bundle: ProblemBundle
    aby_globals: list[str]     # citable globals, first-use order
    aby_hyps: list[str]        # hypothesis names, most recent first


# ---------------------------------------------------------------------------
# generation

def _close_over_vars(names: list[str], t: Term, depth: int = 0) -> Term:
    """Replace context variables with constants named after them.
    `names` is innermost-last, matching Context.vars."""
    if isinstance(t, Var):
        if t.index >= depth:
            return Const(names[len(names) - 1 - (t.index - depth)])
        return t
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        return App(_close_over_vars(names, t.fn, depth),
                   _close_over_vars(names, t.arg, depth))
    if isinstance(t, Imp):
        return Imp(_close_over_vars(names, t.antecedent, depth),
                   _close_over_vars(names, t.consequent, depth))
    if isinstance(t, Lam):
        return Lam(t.var_ty, _close_over_vars(names, t.body, depth + 1), t.hint)
    if isinstance(t, All):
        return All(t.var_ty, _close_over_vars(names, t.body, depth + 1), t.hint)
    raise TypeError(t)


def _unique_var_names(sig: Signature, ctx) -> list[str]:
    names = []
    taken = set()
    for n, _ in ctx.vars:
        cand = n
        k = 0
        while cand in sig or cand in taken:
            k += 1
            cand = f"{n}_{k}"
        taken.add(cand)
        names.append(cand)
    return names


def _is_statement(sig: Signature, name: str) -> bool:
    return isinstance(sig.lookup(name), (AxiomEntry, ThmEntry))


def _citable(sig: Signature, name: str) -> bool:
    if _is_native(name):
        return False
    e = sig.lookup(name)
    return isinstance(e, (AxiomEntry, ThmEntry, DefEntry))


def _build_bundle(sig: Signature, problem_id: str, mode: str, theorem: str,
                  rec: TraceRecord, statement_deps: list[str],
                  hyp_names: list[str]) -> ProblemBundle:
    ctx = rec.goal.ctx
    var_names = _unique_var_names(sig, ctx)
    close = lambda t: _close_over_vars(var_names, t)

    conjecture = close(rec.goal.conclusion)
    hyp_forms = [ProblemFormula(h, close(ctx.hyp_prop(h)), "hyp")
                 for h in hyp_names]
    ax_forms = [ProblemFormula(g, sig.prop_of(g), "axiom")
                for g in statement_deps]

    needed: set[str] = set()
    for f in ax_forms + hyp_forms:
        needed.update(const_names(f.prop))
    needed.update(const_names(conjecture))

    defs = def_closure(sig, needed)
    def_forms = []
    for d in defs:
        body = sig.definiens(d)
        def_forms.append(ProblemFormula(d, def_axiom(d, sig.const_type(d), body), "def"))
        needed.update(const_names(body))
        needed.add(d)

    consts: list[tuple[str, SimpleType]] = []
    for e in sig.entries:
        if e.name in needed and isinstance(e, (Prim, DefEntry)):
            if not _is_native(e.name):
                consts.append((e.name, e.ty))
    for (orig, ty), n in zip(ctx.vars, var_names):
        consts.append((n, ty))

    return ProblemBundle(problem_id, mode, theorem, rec.goal.position,
                         consts, def_forms + ax_forms + hyp_forms, conjecture)


def gen_candidates(dev: Development, mode: str) -> list[Candidate]:
    if mode not in ("bushy", "chainy"):
        raise HammerError(f"unknown mode {mode!r}")
    sig = dev.sig
    frontier = classical_frontier(sig)
    out: list[Candidate] = []
    for th in dev.theorems:
        if th.sig_index <= frontier:
            continue
        seq = 0
        for rec in th.records:
            if rec.kind == "bullet":
                continue
            seq += 1
            pid = f"{mode}_{th.name}_{seq}"
            span = Span(rec.span.start, th.completion[rec.goal_id])
            gs, hs = th.dep_trace(rec.goal_id)
            citable = [g for g in gs if g in sig and _citable(sig, g)]
            ctx_hyps = [h[0] for h in rec.goal.ctx.hyps]
            used_hyps = [h for h in ctx_hyps if h in hs]
            if mode == "bushy":
                stmts = [g for g in citable if _is_statement(sig, g)]
                hyp_names = used_hyps
            else:
                stmts = [e.name for e in sig.entries[:th.sig_index]
                         if isinstance(e, (AxiomEntry, ThmEntry))]
                hyp_names = ctx_hyps
            bundle = _build_bundle(sig, pid, mode, th.name, rec, stmts, hyp_names)
            out.append(Candidate(
                pid, th.name, seq, span, rec.kind, rec.goal_id, bundle,
                aby_globals=citable,
                aby_hyps=list(reversed(used_hyps))))
    return out


def gen_bushy(dev: Development) -> list[Candidate]:
    return gen_candidates(dev, "bushy")


def gen_chainy(dev: Development) -> list[Candidate]:
    return gen_candidates(dev, "chainy")


def write_problems(candidates: Iterable[Candidate], outdir: str,
                   literal_defs: bool = False) -> list[str]:
    from pathlib import Path
    d = Path(outdir)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for c in candidates:
        p = d / f"{c.problem_id}.p"
        p.write_text(to_th0(c.bundle, literal_defs=literal_defs))
        paths.append(str(p))
    return paths


# ---------------------------------------------------------------------------
# selection

def select_maximal(candidates: Sequence[Candidate], solved: set[str],
                   pin: Iterable[str] = (), exclude: Iterable[str] = ()
                   ) -> list[Candidate]:
    """Solved candidates whose spans are not nested inside another solved
    candidate of the same theorem.  `pin` forces candidates in; `exclude`
    drops them regardless of prover results."""
    pin = set(pin)
    exclude = set(exclude)
    eligible = [c for c in candidates
                if (c.problem_id in solved or c.problem_id in pin)
                and c.problem_id not in exclude]
    by_thm: dict[str, list[Candidate]] = {}
    for c in candidates:
        by_thm.setdefault(c.theorem, []).append(c)
    for cs in by_thm.values():
        for i, a in enumerate(cs):
            for b in cs[i + 1:]:
                if a.span == b.span:
                    continue
                disjoint = a.span.end <= b.span.start or b.span.end <= a.span.start
                nested = a.span.contains(b.span) or b.span.contains(a.span)
                if not disjoint and not nested:
                    raise OverlapWithoutNesting(
                        f"{a.problem_id} and {b.problem_id} overlap without nesting")
    out = []
    seen_spans: set[tuple[str, int, int]] = set()
    for c in eligible:
        key = (c.theorem, c.span.start, c.span.end)
        if key in seen_spans:
            continue
        dominated = any(
            d is not c and d.theorem == c.theorem
            and d.span.contains(c.span) and d.span != c.span
            for d in eligible)
        if not dominated:
            seen_spans.add(key)
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# rewriting

_KIND_KEYWORD = {"let": "let", "assume": "assume", "exact": "exact",
                 "apply": "apply", "rewrite": "rewrite", "claim": "claim",
                 "aby": "aby"}


def aby_line(globals_: Sequence[str], hyps: Sequence[str]) -> str:
    return "aby " + " ".join([*globals_, *hyps]) + "." if (globals_ or hyps) \
        else "aby."


def rewrite_with_aby(text: str, selections: Sequence[tuple[Candidate, str]]) -> str:
    """Replace each candidate's span with the given aby text.  Spans are
    byte offsets; the tactic keyword must still sit at the span start or
    SpanDrift is raised."""
    data = text.encode("utf-8")
    ordered = sorted(selections, key=lambda s: s[0].span.start, reverse=True)
    prev_start = len(data)
    for cand, line in ordered:
        sp = cand.span
        if sp.end > prev_start:
            raise SpanDrift(f"{cand.problem_id}: span overlaps a later rewrite")
        kw = _KIND_KEYWORD.get(cand.kind, cand.kind).encode()
        if not data[sp.start:sp.start + len(kw)] == kw:
            raise SpanDrift(
                f"{cand.problem_id}: expected {cand.kind!r} at byte {sp.start}")
        data = data[:sp.start] + line.encode("utf-8") + data[sp.end:]
        prev_start = sp.start
    return data.decode("utf-8")


def citations_from_result(cand: Candidate, result: Optional[RunResult]
                          ) -> tuple[list[str], list[str]]:
    """Names to cite on the aby line: the prover's used axioms when
    available, else the recorded dependency trace."""
    if result is None or not result.used_axioms:
        return list(cand.aby_globals), list(cand.aby_hyps)
    names = cand.bundle.names()
    used_g: set[str] = set()
    used_h: set[str] = set()
    for emitted in result.used_axioms:
        try:
            src, kind = recover_formula_name(emitted, names)
        except UnmangleError:
            continue
        (used_h if kind == "hyp" else used_g).add(src)
    order_g = list(cand.aby_globals)
    for f in cand.bundle.formulas:
        if f.kind != "hyp" and f.name not in order_g:
            order_g.append(f.name)
    gs = [g for g in order_g if g in used_g]
    hs = [h for h in cand.aby_hyps if h in used_h]
    for f in reversed(cand.bundle.formulas):
        if f.kind == "hyp" and f.name in used_h and f.name not in hs:
            hs.append(f.name)
    return gs, hs


def minimize_script(text: str, results: Sequence[RunResult],
                    mode: str = "bushy", pin: Iterable[str] = (),
                    exclude: Iterable[str] = ()) -> tuple[str, list[Candidate]]:
    """Rewrite a script so every maximal prover-solved subproof becomes a
    single aby call.  Returns the new text and the selected candidates."""
    dev = check_script(text, bootstrap())
    cands = gen_candidates(dev, mode)
    solved = {r.problem_id for r in results if r.status == "Theorem"}
    best: dict[str, RunResult] = {}
    for r in results:
        if r.status == "Theorem" and r.problem_id not in best:
            best[r.problem_id] = r
    selected = select_maximal(cands, solved, pin=pin, exclude=exclude)
    selections = []
    for c in selected:
        gs, hs = citations_from_result(c, best.get(c.problem_id))
        selections.append((c, aby_line(gs, hs)))
    new_text = rewrite_with_aby(text, selections)
    verify_rewrite(text, new_text)
    return new_text, selected


def verify_rewrite(old_text: str, new_text: str) -> Development:
    """Re-elaborate the rewritten script and check every theorem still
    states the same proposition."""
    old = check_script(old_text, bootstrap())
    new = check_script(new_text, bootstrap())
    old_props = {t.name: t.prop for t in old.theorems}
    new_props = {t.name: t.prop for t in new.theorems}
    if set(old_props) != set(new_props):
        raise HammerError("rewrite changed the set of theorems")
    for n, p in old_props.items():
        if not alpha_eq(p, new_props[n]):
            raise HammerError(f"rewrite changed the statement of {n}")
    return new


# ---------------------------------------------------------------------------
# reports

@dataclass
class CoverageRow:
    name: str
    solved: int
    total: int

    @property
    def percent(self) -> str:
        return percent_str(self.solved, self.total)


@dataclass
class CoverageReport:
    mode: str
    rows: list[CoverageRow]

    @property
    def total(self) -> CoverageRow:
        return CoverageRow("total",
                           sum(r.solved for r in self.rows),
                           sum(r.total for r in self.rows))


def percent_str(n: int, d: int) -> str:
    if d == 0:
        return "0"
    p = round(100 * n / d, 1)
    s = f"{p:.1f}"
    return s[:-2] if s.endswith(".0") else s


def _split_problem_id(pid: str) -> tuple[str, str, int]:
    mode, rest = pid.split("_", 1)
    theorem, seq = rest.rsplit("_", 1)
    return mode, theorem, int(seq)


def coverage_report(results: Sequence[RunResult], mode: str) -> CoverageReport:
    """Per-theorem solved/attempted counts for one generation mode."""
    solved: dict[str, set[int]] = {}
    total: dict[str, set[int]] = {}
    for r in results:
        try:
            m, theorem, seq = _split_problem_id(r.problem_id)
        except ValueError:
            continue
        if m != mode:
            continue
        total.setdefault(theorem, set()).add(seq)
        if r.status == "Theorem":
            solved.setdefault(theorem, set()).add(seq)
    rows = [CoverageRow(t, len(solved.get(t, ())), len(seqs))
            for t, seqs in sorted(total.items())]
    return CoverageReport(mode, rows)


def aby_coverage_report(text: str, results: Sequence[RunResult],
                        mode: str = "bushy") -> CoverageReport:
    """Per-theorem byte counts: how much of each proof the selected maximal
    aby rewrites would replace."""
    dev = check_script(text, bootstrap())
    cands = gen_candidates(dev, mode)
    solved = {r.problem_id for r in results if r.status == "Theorem"}
    selected = select_maximal(cands, solved)
    rows = []
    for th in dev.theorems:
        recs = [r for r in th.records if r.kind != "bullet"]
        if not recs:
            continue
        start = min(r.span.start for r in recs)
        end = max(th.completion[r.goal_id] for r in recs)
        covered = sum(c.span.end - c.span.start
                      for c in selected if c.theorem == th.name)
        rows.append(CoverageRow(th.name, covered, end - start))
    return CoverageReport("aby", rows)


def render_table(report: CoverageReport) -> str:
    rows = report.rows + [report.total]
    w = max([len("name")] + [len(r.name) for r in rows])
    lines = [f"{'name':<{w}}  solved   total  percent"]
    for r in rows:
        lines.append(f"{r.name:<{w}}  {r.solved:>6}  {r.total:>6}  {r.percent:>6}%")
    return "\n".join(lines) + "\n"


def render_csv(report: CoverageReport) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf)
    wr.writerow(["name", "solved", "total", "percent"])
    for r in report.rows + [report.total]:
        wr.writerow([r.name, r.solved, r.total, r.percent])
    return buf.getvalue()


def render_png(report: CoverageReport, path: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    rows = report.rows
    names = [r.name for r in rows]
    pcts = [100 * r.solved / r.total if r.total else 0 for r in rows]
    fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(rows)), 4))
    ax.bar(range(len(rows)), pcts, color="#46698c")
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(names, rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("% solved")
    ax.set_ylim(0, 100)
    ax.set_title(f"{report.mode} coverage: {report.total.percent}% overall")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
