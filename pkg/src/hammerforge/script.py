"""Proof-script language: parser with source spans, tactic engine, and
per-subproof goal and dependency tracing.

Scripts are UTF-8 text in the `.mg` style::

    Theorem and_comm : forall A B:prop, A /\\ B -> B /\\ A.
    let A. let B. assume H. apply andI.
    - exact andER A B H.
    - exact andEL A B H.
    Qed.

All spans are byte ranges into the UTF-8 encoding of the source.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .kernel import (
    PROP, All, App, Const, Context, DefEntry, Hyp, Imp, Known, Lam,
    PApp, PLam, ProofTerm, Signature, SimpleType, TApp, TLam, Term, ThmEntry,
    Var, beta_eta, check_proof, head_normal, instantiate,
    match_conclusion, proof_deps, shift, subst_metavars, typecheck,
    KernelError, NoMatch,
)
from .syntax import (
    SApp, SBin, SExpr, SFun, SName, SNot, SAll, SEx, ScriptSyntaxError, Token,
    TokenStream, UnknownName, elab_proof, elab_term, eq_sides,
    parse_term, parse_type, synth_proof, term_str, tokenize, type_str,
)


# ---------------------------------------------------------------------------
# errors

class ScriptError(Exception):
    def __init__(self, msg: str, span: "Span"):
        super().__init__(f"{msg} (at bytes {span.start}..{span.end})")
        self.msg = msg
        self.span = span


class NotAForall(ScriptError):
    pass


class NotAnImp(ScriptError):
    pass


class ApplyNoMatch(ScriptError):
    pass


class NotAnEquation(ScriptError):
    pass


class OccurrenceOutOfRange(ScriptError):
    pass


class OpenGoalsAtQed(ScriptError):
    pass


class UnbalancedBlock(ScriptSyntaxError):
    pass


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Span:
    start: int
    end: int

    def contains(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end


@dataclass
class Definition:
    name: str
    ty: Optional[SimpleType]
    body: SExpr
    span: Span


@dataclass
class TacLet:
    name: str
    span: Span


@dataclass
class TacAssume:
    name: str
    span: Span


@dataclass
class TacExact:
    expr: SExpr
    span: Span


@dataclass
class TacApply:
    head: str
    args: list
    span: Span


@dataclass
class TacRewrite:
    name: str
    occurrence: int
    reversed: bool
    span: Span


@dataclass
class TacClaim:
    name: str
    prop: SExpr
    block: list
    span: Span


@dataclass
class TacAby:
    deps: list[str]
    span: Span


@dataclass
class TacBullet:
    block: list
    span: Span


@dataclass
class TacQed:
    span: Span


Tactic = object


@dataclass
class TheoremDecl:
    name: str
    prop: SExpr
    tactics: list
    span: Span


ScriptItem = object


# ---------------------------------------------------------------------------
# parsing

def _byte_offsets(text: str) -> Optional[list[int]]:
    if text.isascii():
        return None
    offs = [0]
    for ch in text:
        offs.append(offs[-1] + len(ch.encode("utf-8")))
    return offs


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.ts = TokenStream(tokenize(text))
        self.b = _byte_offsets(text)

    def off(self, char_offset: int) -> int:
        return char_offset if self.b is None else self.b[char_offset]

    def span(self, start_tok: Token, end_tok: Token) -> Span:
        return Span(self.off(start_tok.start), self.off(end_tok.end))

    def parse(self) -> list:
        items = []
        while not self.ts.at("eof"):
            if self.ts.at_name("Definition"):
                items.append(self._definition())
            elif self.ts.at_name("Theorem"):
                items.append(self._theorem())
            else:
                self.ts.error("expected 'Definition' or 'Theorem'")
        return items

    def _definition(self) -> Definition:
        start = self.ts.expect("name", "Definition")
        name = self.ts.expect("name").text
        ty = None
        if self.ts.at("sym", ":"):
            self.ts.next()
            ty = parse_type(self.ts)
        self.ts.expect("sym", ":=")
        body = parse_term(self.ts)
        end = self.ts.expect("sym", ".")
        return Definition(name, ty, body, self.span(start, end))

    def _theorem(self) -> TheoremDecl:
        start = self.ts.expect("name", "Theorem")
        name = self.ts.expect("name").text
        self.ts.expect("sym", ":")
        prop = parse_term(self.ts)
        self.ts.expect("sym", ".")
        tactics = self._block(closers=("Qed",), in_braces=False, bullets_close=False)
        qstart = self.ts.expect("name", "Qed")
        qend = self.ts.expect("sym", ".")
        tactics.append(TacQed(self.span(qstart, qend)))
        return TheoremDecl(name, prop, tactics, self.span(start, qend))

    def _block(self, closers: tuple[str, ...], in_braces: bool,
               bullets_close: bool) -> list:
        out = []
        while True:
            t = self.ts.peek()
            if t.kind == "eof":
                if in_braces or "Qed" in closers:
                    raise UnbalancedBlock("unterminated proof block",
                                          t.line, t.col, t.start)
                return out
            if in_braces and self.ts.at("sym", "}"):
                return out
            if t.kind == "name" and t.text in closers:
                return out
            if self.ts.at("sym", "-"):
                if bullets_close:
                    return out
                btok = self.ts.next()
                block = self._block(closers=closers, in_braces=in_braces,
                                    bullets_close=True)
                if not block:
                    self.ts.error("empty bullet")
                end = block[-1].span.end
                out.append(TacBullet(block, Span(self.off(btok.start), end)))
                continue
            out.append(self._tactic())

    def _tactic(self):
        t = self.ts.peek()
        if t.kind != "name":
            self.ts.error(f"expected a tactic, found {t.text!r}")
        kw = t.text
        if kw == "let":
            self.ts.next()
            name = self.ts.expect("name").text
            end = self.ts.expect("sym", ".")
            return TacLet(name, self.span(t, end))
        if kw == "assume":
            self.ts.next()
            name = self.ts.expect("name").text
            end = self.ts.expect("sym", ".")
            return TacAssume(name, self.span(t, end))
        if kw == "exact":
            self.ts.next()
            expr = parse_term(self.ts)
            end = self.ts.expect("sym", ".")
            return TacExact(expr, self.span(t, end))
        if kw == "apply":
            self.ts.next()
            head = self.ts.expect("name").text
            args = []
            while not self.ts.at("sym", "."):
                args.append(self._apply_arg())
            end = self.ts.expect("sym", ".")
            return TacApply(head, args, self.span(t, end))
        if kw == "rewrite":
            self.ts.next()
            rev = False
            if self.ts.at("sym", "<-"):
                self.ts.next()
                rev = True
            name = self.ts.expect("name").text
            occ = 1
            if self.ts.at_name("at"):
                self.ts.next()
                occ = int(self.ts.expect("int").text)
            end = self.ts.expect("sym", ".")
            return TacRewrite(name, occ, rev, self.span(t, end))
        if kw == "claim":
            self.ts.next()
            name = self.ts.expect("name").text
            self.ts.expect("sym", ":")
            prop = parse_term(self.ts)
            self.ts.expect("sym", ".")
            self.ts.expect("sym", "{")
            block = self._block(closers=(), in_braces=True, bullets_close=False)
            end = self.ts.expect("sym", "}")
            return TacClaim(name, prop, block, self.span(t, end))
        if kw == "aby":
            self.ts.next()
            deps = []
            while self.ts.at("name"):
                deps.append(self.ts.next().text)
            end = self.ts.expect("sym", ".")
            return TacAby(deps, self.span(t, end))
        self.ts.error(f"unknown tactic {kw!r}")

    def _apply_arg(self):
        if self.ts.at("sym", "("):
            self.ts.next()
            inner = parse_term(self.ts)
            self.ts.expect("sym", ")")
            return inner
        tok = self.ts.expect("name")
        return SName(tok.text)


def parse_script(text: str) -> list:
    """Parse script text into items with byte spans."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing (round-trip support)

def _sx(e: SExpr, prec: int = 0) -> str:
    from .syntax import SBinderGroup
    def binders(bs):
        parts = []
        for g in bs:
            if g.ty is None:
                parts.extend(g.names)
            else:
                parts.append("(" + " ".join(g.names) + ":" + type_str(g.ty) + ")")
        return " ".join(parts)
    if isinstance(e, SName):
        return e.name
    if isinstance(e, SApp):
        s = f"{_sx(e.fn, 70)} {_sx(e.arg, 71)}"
        return f"({s})" if prec > 70 else s
    if isinstance(e, SFun):
        s = f"fun {binders(e.binders)}. {_sx(e.body)}"
        return f"({s})" if prec > 0 else s
    if isinstance(e, SAll):
        s = f"forall {binders(e.binders)}, {_sx(e.body)}"
        return f"({s})" if prec > 0 else s
    if isinstance(e, SEx):
        s = f"exists {binders(e.binders)}, {_sx(e.body)}"
        return f"({s})" if prec > 0 else s
    if isinstance(e, SNot):
        s = f"~{_sx(e.arg, 61)}"
        return f"({s})" if prec > 60 else s
    if isinstance(e, SBin):
        op, p, rassoc = {"iff": ("<->", 10, False), "imp": ("->", 20, True),
                         "or": ("\\/", 30, False), "and": ("/\\", 40, False),
                         "eq": ("=", 50, False)}[e.op]
        lp = p if not rassoc else p + 1
        rp = p + 1 if not rassoc else p
        s = f"{_sx(e.left, lp)} {op} {_sx(e.right, rp)}"
        return f"({s})" if prec > p else s
    raise TypeError(e)


def print_script(items: list) -> str:
    out = []
    for it in items:
        if isinstance(it, Definition):
            ty = f" : {type_str(it.ty)}" if it.ty is not None else ""
            out.append(f"Definition {it.name}{ty} := {_sx(it.body)}.")
        else:
            out.append(f"Theorem {it.name} : {_sx(it.prop)}.")
            out.extend(_print_tactics(it.tactics, 0))
        out.append("")
    return "\n".join(out)


def _print_tactics(tactics: list, indent: int) -> list[str]:
    pad = "  " * indent
    lines = []
    for t in tactics:
        if isinstance(t, TacLet):
            lines.append(f"{pad}let {t.name}.")
        elif isinstance(t, TacAssume):
            lines.append(f"{pad}assume {t.name}.")
        elif isinstance(t, TacExact):
            lines.append(f"{pad}exact {_sx(t.expr)}.")
        elif isinstance(t, TacApply):
            args = "".join(" " + _sx(a, 71) for a in t.args)
            lines.append(f"{pad}apply {t.head}{args}.")
        elif isinstance(t, TacRewrite):
            arrow = "<- " if t.reversed else ""
            at = f" at {t.occurrence}" if t.occurrence != 1 else ""
            lines.append(f"{pad}rewrite {arrow}{t.name}{at}.")
        elif isinstance(t, TacClaim):
            lines.append(f"{pad}claim {t.name} : {_sx(t.prop)}.")
            lines.append(f"{pad}{{")
            lines.extend(_print_tactics(t.block, indent + 1))
            lines.append(f"{pad}}}")
        elif isinstance(t, TacAby):
            lines.append(f"{pad}aby {' '.join(t.deps)}.")
        elif isinstance(t, TacBullet):
            lines.append(f"{pad}-")
            lines.extend(_print_tactics(t.block, indent + 1))
        elif isinstance(t, TacQed):
            lines.append(f"{pad}Qed.")
        else:
            raise TypeError(t)
    return lines


def tactic_structure(tactics: list) -> list:
    """Shape of a tactic list, for structural comparison."""
    out = []
    for t in tactics:
        if isinstance(t, TacClaim):
            out.append(("claim", t.name, tactic_structure(t.block)))
        elif isinstance(t, TacBullet):
            out.append(("bullet", tactic_structure(t.block)))
        elif isinstance(t, TacAby):
            out.append(("aby", tuple(t.deps)))
        elif isinstance(t, TacRewrite):
            out.append(("rewrite", t.name, t.occurrence, t.reversed))
        else:
            out.append(type(t).__name__)
    return out


# ---------------------------------------------------------------------------
# goals and traces

@dataclass(frozen=True)
class Goal:
    ctx: Context
    conclusion: Term
    position: int          # byte offset of the tactic whose start this is


@dataclass
class TraceRecord:
    kind: str              # tactic keyword
    span: Span
    goal: Goal
    goal_id: int
    sig_index: int         # index the enclosing theorem will occupy


@dataclass
class AbyRequest:
    problem_id: str
    goal: Goal
    deps: tuple[str, ...]
    span: Span


@dataclass
class ElaboratedTheorem:
    decl: TheoremDecl
    name: str
    prop: Term
    proof: ProofTerm
    records: list[TraceRecord]
    completion: dict[int, int]          # goal_id -> byte offset where closed
    proof_of: dict[int, ProofTerm]      # goal_id -> assembled subproof
    aby_requests: list[AbyRequest]
    sig_index: int

    def dep_trace(self, goal_id: int) -> tuple[list[str], list[str]]:
        """(global names, hypothesis names) used by the completed subproof."""
        pt = self.proof_of[goal_id]
        globals_, hyps = proof_deps(pt)
        ctx = next(r.goal.ctx for r in self.records if r.goal_id == goal_id)
        gs, hs = [], []
        for n in globals_:
            (hs if ctx.has_hyp(n) else gs).append(n)
        for n in hyps:
            if n not in hs:
                hs.append(n)
        return gs, hs


# ---------------------------------------------------------------------------
# tactic engine

class _Entry:
    __slots__ = ("id", "goal", "sink")

    def __init__(self, id: int, goal: Goal, sink: Callable[[ProofTerm], None]):
        self.id = id
        self.goal = goal
        self.sink = sink


class _Engine:
    def __init__(self, sig: Signature, theorem_name: str, problem_prefix: str,
                 sig_index: int):
        self.sig = sig
        self.theorem_name = theorem_name
        self.problem_prefix = problem_prefix
        self.sig_index = sig_index
        self.records: list[TraceRecord] = []
        self.completion: dict[int, int] = {}
        self.proof_of: dict[int, ProofTerm] = {}
        self.aby_requests: list[AbyRequest] = []
        self._next_goal = 0
        self._next_problem = 0
        self._now_end = 0

    def new_entry(self, ctx: Context, concl: Term, position: int,
                  sink: Callable[[ProofTerm], None]) -> _Entry:
        self._next_goal += 1
        return _Entry(self._next_goal, Goal(ctx, concl, position), sink)

    def finish(self, entry: _Entry, pt: ProofTerm) -> None:
        self.proof_of[entry.id] = pt
        self.completion[entry.id] = self._now_end
        entry.sink(pt)

    def record(self, kind: str, span: Span, entry: _Entry) -> None:
        goal = Goal(entry.goal.ctx, entry.goal.conclusion, span.start)
        self.records.append(TraceRecord(kind, span, goal, entry.id, self.sig_index))

    # -- block execution ----------------------------------------------------

    def run_block(self, tactics: list, entries: list[_Entry],
                  end_span: Span) -> None:
        for t in tactics:
            if isinstance(t, TacQed):
                if entries:
                    raise OpenGoalsAtQed(
                        f"{len(entries)} open goal(s) at Qed", t.span)
                return
            if not entries:
                raise ScriptError("no open goal for tactic", t.span)
            self._now_end = t.span.end
            if isinstance(t, TacBullet):
                self.record("bullet", t.span, entries[0])
                focused = entries.pop(0)
                self.run_block(t.block, [focused], t.span)
                continue
            self.step(t, entries)
        if entries:
            raise OpenGoalsAtQed(f"{len(entries)} open goal(s) at end of block",
                                 end_span)

    def step(self, t, entries: list[_Entry]) -> None:
        e = entries[0]
        try:
            if isinstance(t, TacLet):
                self.record("let", t.span, e)
                g = head_normal(self.sig, e.goal.conclusion, All)
                if not isinstance(g, All):
                    raise NotAForall(f"goal is not universal: "
                                     f"{term_str(e.goal.conclusion)}", t.span)
                ctx = e.goal.ctx.push_var(t.name, g.var_ty)
                child = self.new_entry(
                    ctx, g.body, t.span.end,
                    lambda pt, e=e, t=t, ty=g.var_ty:
                        self.finish(e, TLam(t.name, ty, pt)))
                entries[0] = child
            elif isinstance(t, TacAssume):
                self.record("assume", t.span, e)
                g = head_normal(self.sig, e.goal.conclusion, Imp)
                if not isinstance(g, Imp):
                    raise NotAnImp(f"goal is not an implication: "
                                   f"{term_str(e.goal.conclusion)}", t.span)
                ctx = e.goal.ctx.push_hyp(t.name, g.antecedent)
                child = self.new_entry(
                    ctx, g.consequent, t.span.end,
                    lambda pt, e=e, t=t, a=g.antecedent:
                        self.finish(e, PLam(t.name, a, pt)))
                entries[0] = child
            elif isinstance(t, TacExact):
                self.record("exact", t.span, e)
                pt = elab_proof(self.sig, e.goal.ctx, t.expr, e.goal.conclusion)
                entries.pop(0)
                self.finish(e, pt)
            elif isinstance(t, TacAby):
                self.record("aby", t.span, e)
                for dep in t.deps:
                    if not e.goal.ctx.has_hyp(dep) and dep not in self.sig:
                        raise ScriptError(f"unknown aby dependency {dep!r}", t.span)
                self._next_problem += 1
                pid = f"{self.problem_prefix}{self._next_problem}"
                from .kernel import AbyHole
                self.aby_requests.append(
                    AbyRequest(pid, e.goal, tuple(t.deps), t.span))
                entries.pop(0)
                self.finish(e, AbyHole(pid, tuple(t.deps)))
            elif isinstance(t, TacApply):
                self.record("apply", t.span, e)
                self.apply(t, e, entries)
            elif isinstance(t, TacRewrite):
                self.record("rewrite", t.span, e)
                self.rewrite(t, e, entries)
            elif isinstance(t, TacClaim):
                self.record("claim", t.span, e)
                prop = elab_term(self.sig, e.goal.ctx, t.prop, PROP)
                sub_result: list[ProofTerm] = []
                claim_entry = self.new_entry(e.goal.ctx, prop, t.span.start,
                                             sub_result.append)
                self.run_block(t.block, [claim_entry], t.span)
                assert sub_result, "claim block did not produce a proof"
                ctx = e.goal.ctx.push_hyp(t.name, prop)
                cont = self.new_entry(
                    ctx, e.goal.conclusion, t.span.end,
                    lambda pt, e=e, t=t, prop=prop, sub=sub_result:
                        self.finish(e, PApp(PLam(t.name, prop, pt), sub[0])))
                entries[0] = cont
            else:
                raise ScriptError(f"unsupported tactic {type(t).__name__}", t.span)
        except (KernelError, UnknownName) as exc:
            raise ScriptError(str(exc) or type(exc).__name__, t.span) from exc

    # -- apply ---------------------------------------------------------------

    def apply(self, t: TacApply, e: _Entry, entries: list[_Entry]) -> None:
        ctx = e.goal.ctx
        head_expr: SExpr = SName(t.head)
        for a in t.args:
            head_expr = SApp(head_expr, a)
        base, prop = synth_proof(self.sig, ctx, head_expr)

        metavars: dict[str, SimpleType] = {}
        ops: list[tuple[str, object]] = []   # ("T", mv name) / ("P", antecedent)
        depth_names: list[str] = []
        pattern = prop
        sub = None
        while True:
            m = match_conclusion(self.sig, metavars, pattern, e.goal.conclusion)
            if not isinstance(m, NoMatch):
                missing = [mv for mv in metavars if mv not in m]
                if not missing:
                    sub = m
                    break
            g = head_normal(self.sig, pattern, (All, Imp))
            if isinstance(g, All):
                mv = f"?m{len(metavars)}"
                metavars[mv] = g.var_ty
                depth_names.append(mv)
                ops.append(("T", mv))
                pattern = instantiate(g.body, Const(mv))
            elif isinstance(g, Imp):
                ops.append(("P", g.antecedent))
                pattern = g.consequent
            else:
                raise ApplyNoMatch(
                    f"conclusion of {t.head} does not match goal "
                    f"{term_str(e.goal.conclusion)}", t.span)

        children_props = [subst_metavars(payload, sub)
                          for kind, payload in ops if kind == "P"]
        if not children_props:
            pt = base
            for kind, payload in ops:
                pt = TApp(pt, sub[payload])
            entries.pop(0)
            self.finish(e, pt)
            return

        slots: list[Optional[ProofTerm]] = [None] * len(children_props)
        remaining = [len(children_props)]

        def assemble():
            out = base
            j = 0
            for kind, payload in ops:
                if kind == "T":
                    out = TApp(out, sub[payload])
                else:
                    out = PApp(out, slots[j])
                    j += 1
            return out

        def child_sink(i):
            def sink(p):
                slots[i] = p
                remaining[0] -= 1
                if remaining[0] == 0:
                    self.finish(e, assemble())
            return sink

        children = [self.new_entry(ctx, prop_i, t.span.end, child_sink(i))
                    for i, prop_i in enumerate(children_props)]
        entries[0:1] = children

    # -- rewrite ---------------------------------------------------------------

    def rewrite(self, t: TacRewrite, e: _Entry, entries: list[_Entry]) -> None:
        ctx = e.goal.ctx
        if ctx.has_hyp(t.name):
            eq_pt: ProofTerm = Hyp(t.name)
            eq_prop = ctx.hyp_prop(t.name)
        elif t.name in self.sig:
            eq_pt = Known(t.name)
            eq_prop = self.sig.prop_of(t.name)
        else:
            raise ScriptError(f"unknown name {t.name!r}", t.span)
        sides = eq_sides(self.sig, eq_prop)
        if sides is None:
            raise NotAnEquation(f"{t.name} is not an equation", t.span)
        eq_const, s, tt = sides
        needle = tt if t.reversed else s
        concl = beta_eta(self.sig, e.goal.conclusion)
        abstracted = _abstract_occurrence(concl, needle, t.occurrence)
        if abstracted is None:
            raise OccurrenceOutOfRange(
                f"occurrence {t.occurrence} of {term_str(needle)} not found",
                t.span)
        replacement = s if t.reversed else tt
        new_concl = beta_eta(self.sig, instantiate(abstracted, replacement))
        var_ty = _eq_type(eq_const)

        if t.reversed:
            # H : s = tt ; goal C[tt] ; new goal C[s];  H (fun z. C[z]) : C[s] -> C[tt]
            pred = Lam(var_ty, abstracted, "z")
            wrap = lambda pf, eq_pt=eq_pt, pred=pred: PApp(TApp(eq_pt, pred), pf)
        else:
            # H : s = tt ; goal C[s] ; new goal C[tt]
            # H (fun z. C[z] -> C[s]) : (C[s] -> C[s]) -> (C[tt] -> C[s])
            orig = concl
            pred = Lam(var_ty, Imp(abstracted, shift(orig, 1)), "z")
            ident = PLam("_rw", orig, Hyp("_rw"))
            wrap = (lambda pf, eq_pt=eq_pt, pred=pred, ident=ident:
                    PApp(PApp(TApp(eq_pt, pred), ident), pf))

        child = self.new_entry(ctx, new_concl, t.span.end,
                               lambda pf, e=e, wrap=wrap: self.finish(e, wrap(pf)))
        entries[0] = child


def _eq_type(eq_const: str) -> SimpleType:
    from .syntax import type_tag
    from .kernel import Arrow, SET, PROP

    def parse_tag(s: str, i: int):
        c = s[i]
        if c == "i":
            return SET, i + 1
        if c == "o":
            return PROP, i + 1
        assert c == "f"
        a, j = parse_tag(s, i + 1)
        b, k = parse_tag(s, j)
        return Arrow(a, b), k

    tag = eq_const[len("eq_"):]
    ty, _ = parse_tag(tag, 0)
    return ty


def _abstract_occurrence(t: Term, needle: Term, n: int) -> Optional[Term]:
    """Replace the n-th leftmost-outermost occurrence of `needle` in t by a
    fresh outermost binder (Var at the traversal depth); all other variables
    are shifted up by one.  Returns the abstracted body, or None."""
    count = [0]

    def go(t: Term, depth: int) -> Term:
        if count[0] < n and t == shift(needle, depth):
            count[0] += 1
            if count[0] == n:
                return Var(depth)
        if isinstance(t, Var):
            return Var(t.index + 1) if t.index >= depth else t
        if isinstance(t, Const):
            return t
        if isinstance(t, App):
            f = go(t.fn, depth)
            return App(f, go(t.arg, depth))
        if isinstance(t, Imp):
            a = go(t.antecedent, depth)
            return Imp(a, go(t.consequent, depth))
        if isinstance(t, Lam):
            return Lam(t.var_ty, go(t.body, depth + 1), t.hint)
        if isinstance(t, All):
            return All(t.var_ty, go(t.body, depth + 1), t.hint)
        raise TypeError(t)

    body = go(t, 0)
    return body if count[0] == n else None


# ---------------------------------------------------------------------------
# top-level elaboration

@dataclass
class Development:
    text: str
    sig: Signature
    basis_len: int
    items: list                          # Definition | ElaboratedTheorem
    theorems: list[ElaboratedTheorem] = field(default_factory=list)

    @property
    def aby_requests(self) -> list[AbyRequest]:
        return [r for th in self.theorems for r in th.aby_requests]


def elaborate_theorem(sig: Signature, decl: TheoremDecl,
                      problem_prefix: str = "") -> ElaboratedTheorem:
    """Run all tactics of one theorem to closure against the given signature
    prefix.  The theorem is NOT added to the signature."""
    try:
        prop = elab_term(sig, Context(), decl.prop, PROP)
    except (KernelError, UnknownName) as exc:
        raise ScriptError(str(exc) or type(exc).__name__, decl.span) from exc
    eng = _Engine(sig, decl.name, problem_prefix or f"{decl.name}_", len(sig))
    result: list[ProofTerm] = []
    root = eng.new_entry(Context(), prop, decl.span.start, result.append)
    eng.run_block(decl.tactics, [root], decl.span)
    if not result:
        raise OpenGoalsAtQed("proof did not close the main goal", decl.span)
    return ElaboratedTheorem(decl, decl.name, prop, result[0], eng.records,
                             eng.completion, eng.proof_of, eng.aby_requests,
                             len(sig))


def check_script(text: str, sig: Optional[Signature] = None) -> Development:
    """Parse and elaborate a full script on top of the basis (or the given
    signature, which is extended in place)."""
    from .basis import bootstrap
    if sig is None:
        sig = bootstrap()
    basis_len = len(sig)
    items = parse_script(text)
    dev = Development(text, sig, basis_len, [])
    for it in items:
        if isinstance(it, Definition):
            try:
                if it.ty is not None:
                    body = elab_term(sig, Context(), it.body, it.ty)
                    ty = it.ty
                else:
                    body = elab_term(sig, Context(), it.body)
                    ty = typecheck(sig, Context(), body)
                sig.add(DefEntry(it.name, ty, body))
            except (KernelError, UnknownName) as exc:
                raise ScriptError(str(exc) or type(exc).__name__, it.span) from exc
            dev.items.append(it)
        else:
            th = elaborate_theorem(sig, it)
            # independent kernel pass over the assembled proof term
            check_proof(sig, Context(), th.proof, th.prop)
            sig.add(ThmEntry(th.name, th.prop, th.proof))
            dev.items.append(th)
            dev.theorems.append(th)
    return dev
