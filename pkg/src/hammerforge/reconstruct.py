"""Proof-skeleton import from Dedukti-format prover output.

The parser accepts the subset such output uses: declarations
`name : type.`, definitions `def name : type := body.`, identifiers that
may be `{|…|}`-quoted (including purely numeric binder names), and the
heads `Prf`, `El`, `forall`, `imp`, `not`, `and`, `or`, `false`, `true`.
Anything else fails loudly.

Scaffolding wraps the goal in a double-negation step so the negated
conclusion becomes a hypothesis, then turns each Dedukti definition into a
proof step.  Step bodies are re-elaborated in the goal's own context; a
body that does not translate becomes an explicit Hole.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .kernel import (
    PROP, SET, App, Const, Context, Hyp, Known, PApp, PLam, ProofTerm,
    Signature, TApp, Term, check_proof, convertible, KernelError,
)
from .script import Goal
from .syntax import (
    SAll, SApp, SBin, SBinderGroup, SExpr, SFun, SName, SNot, UnknownName,
    elab_proof, elab_term,
)
from .tptp import ProblemBundle, UnmangleError, recover_formula_name, unmangle


class DkSyntaxError(Exception):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at {pos})")
        self.pos = pos


class NoFalsumStep(Exception):
    pass


# ---------------------------------------------------------------------------
# Dedukti terms and declarations

@dataclass(frozen=True)
class DkName:
    name: str


@dataclass(frozen=True)
class DkApp:
    fn: "DkTerm"
    arg: "DkTerm"


@dataclass(frozen=True)
class DkLam:
    var: str
    ty: "DkTerm"
    body: "DkTerm"


@dataclass(frozen=True)
class DkArrow:
    dom: "DkTerm"
    cod: "DkTerm"


DkTerm = Union[DkName, DkApp, DkLam, DkArrow]


@dataclass
class Declared:
    name: str
    ty: DkTerm


@dataclass
class Defined:
    name: str
    ty: DkTerm
    body: DkTerm


DkDecl = Union[Declared, Defined]


def _dk_tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if text.startswith("(;", i):
            j = text.find(";)", i)
            if j < 0:
                raise DkSyntaxError("unterminated comment", i)
            i = j + 2
            continue
        if text.startswith("{|", i):
            j = text.find("|}", i)
            if j < 0:
                raise DkSyntaxError("unterminated quoted identifier", i)
            toks.append(("ident", text[i + 2:j], i))
            i = j + 2
            continue
        for sym in (":=", "=>", "->", "(", ")", ":", "."):
            if text.startswith(sym, i):
                toks.append(("sym", sym, i))
                i += len(sym)
                break
        else:
            if c.isalnum() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                toks.append(("ident", text[i:j], i))
                i = j
            else:
                raise DkSyntaxError(f"unexpected character {c!r}", i)
    toks.append(("eof", "", n))
    return toks


class _DkParser:
    def __init__(self, text: str):
        self.toks = _dk_tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        t = self.toks[self.pos]
        if t[0] != "eof":
            self.pos += 1
        return t

    def expect(self, kind, text=None):
        k, v, p = self.next()
        if k != kind or (text is not None and v != text):
            raise DkSyntaxError(f"expected {text or kind!r}, found {v!r}", p)
        return v

    def decls(self) -> list[DkDecl]:
        out = []
        while self.peek()[0] != "eof":
            k, v, p = self.peek()
            if k == "ident" and v in ("def", "thm"):
                self.next()
                name = self.expect("ident")
                self.expect("sym", ":")
                ty = self.term()
                self.expect("sym", ":=")
                body = self.term()
                self.expect("sym", ".")
                out.append(Defined(name, ty, body))
            elif k == "ident":
                self.next()
                self.expect("sym", ":")
                ty = self.term()
                self.expect("sym", ".")
                out.append(Declared(v, ty))
            else:
                raise DkSyntaxError(f"expected a declaration, found {v!r}", p)
        return out

    def term(self) -> DkTerm:
        t = self.app()
        if self.peek()[1] == "->":
            self.next()
            return DkArrow(t, self.term())
        return t

    def app(self) -> DkTerm:
        t = self.atom()
        while self.peek()[0] == "ident" or self.peek()[1] == "(":
            t = DkApp(t, self.atom())
        return t

    def atom(self) -> DkTerm:
        k, v, p = self.next()
        if k == "ident":
            return DkName(v)
        if v == "(":
            # lambda: IDENT : TYPE => BODY
            if (self.peek()[0] == "ident"
                    and self.toks[self.pos + 1][1] == ":"):
                var = self.next()[1]
                self.next()
                ty = self.lam_ty()
                self.expect("sym", "=>")
                body = self.term()
                self.expect("sym", ")")
                return DkLam(var, ty, body)
            t = self.term()
            self.expect("sym", ")")
            return t
        raise DkSyntaxError(f"expected a term, found {v!r}", p)

    def lam_ty(self) -> DkTerm:
        # binder types stop at =>
        t = self.atom()
        while self.peek()[1] not in ("=>",) and (
                self.peek()[0] == "ident" or self.peek()[1] == "("):
            t = DkApp(t, self.atom())
        if self.peek()[1] == "->":
            self.next()
            return DkArrow(t, self.lam_ty())
        return t


def parse_dedukti(text: str) -> list[DkDecl]:
    """Parse Dedukti declarations and definitions (emitted subset)."""
    return _DkParser(text).decls()


# ---------------------------------------------------------------------------
# name recovery

NEGATED_CONJECTURE = "NegatedConjecture"


@dataclass
class NameRecovery:
    mapping: dict[str, str]          # decl name -> source name or tag
    unmatched: list[str]


def _spine(t: DkTerm) -> tuple[DkTerm, list[DkTerm]]:
    args = []
    while isinstance(t, DkApp):
        args.append(t.arg)
        t = t.fn
    return t, list(reversed(args))


def _is_prf(ty: DkTerm) -> Optional[DkTerm]:
    head, args = _spine(ty)
    if isinstance(head, DkName) and head.name == "Prf" and len(args) == 1:
        return args[0]
    return None


def recover_names(decls: list[DkDecl], bundle: ProblemBundle,
                  sig: Signature, goal: Goal) -> NameRecovery:
    """Map declaration names back to bundle names.  The declared axiom whose
    type is `Prf (not φ)` with φ matching the goal is tagged
    NegatedConjecture."""
    names = bundle.names()
    mapping: dict[str, str] = {}
    unmatched: list[str] = []
    for d in decls:
        try:
            src, _kind = recover_formula_name(d.name, names)
            mapping[d.name] = src
            continue
        except UnmangleError:
            pass
        body = _is_prf(d.ty)
        if body is not None and isinstance(d, Declared):
            head, args = _spine(body)
            if isinstance(head, DkName) and head.name == "not" and len(args) == 1:
                try:
                    inner = elab_term(sig, goal.ctx,
                                      dk_to_surface(args[0], mapping), PROP)
                except (KernelError, UnknownName, DkTranslationError):
                    inner = None
                if inner is not None and convertible(sig, inner, goal.conclusion):
                    mapping[d.name] = NEGATED_CONJECTURE
                    continue
        unmatched.append(d.name)
    return NameRecovery(mapping, unmatched)


# ---------------------------------------------------------------------------
# translation to surface syntax

class DkTranslationError(Exception):
    pass


_NEG_HYP = "HnC"


def dk_to_surface(t: DkTerm, mapping: dict[str, str]) -> SExpr:
    """Dedukti formula/term to surface syntax, resolving recovered names."""
    if isinstance(t, DkName):
        n = t.name
        if n in mapping:
            src = mapping[n]
            return SName(_NEG_HYP if src == NEGATED_CONJECTURE else src)
        if n == "false":
            return SName("False")
        if n == "true":
            return SName("True")
        try:
            return SName(unmangle(n))
        except UnmangleError:
            return SName(n)
    if isinstance(t, DkArrow):
        return SBin("imp", dk_to_surface(t.dom, mapping),
                    dk_to_surface(t.cod, mapping))
    if isinstance(t, DkLam):
        ty = _binder_type(t.ty)
        binders = (SBinderGroup((t.var,), ty),)
        return SFun(binders, dk_to_surface(t.body, mapping))
    head, args = _spine(t)
    if isinstance(head, DkName):
        n = head.name
        if n == "imp" and len(args) == 2:
            return SBin("imp", dk_to_surface(args[0], mapping),
                        dk_to_surface(args[1], mapping))
        if n == "not" and len(args) == 1:
            return SNot(dk_to_surface(args[0], mapping))
        if n == "and" and len(args) == 2:
            return SBin("and", dk_to_surface(args[0], mapping),
                        dk_to_surface(args[1], mapping))
        if n == "or" and len(args) == 2:
            return SBin("or", dk_to_surface(args[0], mapping),
                        dk_to_surface(args[1], mapping))
        if n == "forall" and len(args) == 2:
            if not (isinstance(args[0], DkName) and args[0].name == "iota"):
                raise DkTranslationError("forall over a non-iota type code")
            f = args[1]
            if isinstance(f, DkLam):
                return SAll((SBinderGroup((f.var,), SET),),
                            dk_to_surface(f.body, mapping))
            raise DkTranslationError("forall without an explicit lambda")
    out = dk_to_surface(head, mapping)
    for a in args:
        out = SApp(out, dk_to_surface(a, mapping))
    return out


def _binder_type(ty: DkTerm):
    head, args = _spine(ty)
    if isinstance(head, DkName):
        if head.name == "El" and len(args) == 1 \
                and isinstance(args[0], DkName) and args[0].name == "iota":
            return SET
        if head.name == "Prf":
            return None        # proof binder; elaboration peels the goal
    if isinstance(ty, DkName) and ty.name == "iota":
        return SET
    return None


# ---------------------------------------------------------------------------
# skeleton

@dataclass
class Hole:
    reason: str


@dataclass
class Step:
    name: str
    prop: Term
    evidence: Union[ProofTerm, Hole]


@dataclass
class Skeleton:
    goal: Goal
    steps: list[Step]
    final: str                       # name of the step proving falsum
    proof: Optional[ProofTerm]       # complete proof when hole-free

    @property
    def holes(self) -> list[Step]:
        return [s for s in self.steps if isinstance(s.evidence, Hole)]


def scaffold(sig: Signature, goal: Goal, decls: list[DkDecl],
             recovery: NameRecovery) -> Skeleton:
    """Double-negation wrapper plus one step per Dedukti definition."""
    mapping = recovery.mapping
    not_c = App(Const("not"), goal.conclusion)
    ctx = goal.ctx.push_hyp(_NEG_HYP, not_c)
    steps: list[Step] = []
    falsum = Const("False")
    final: Optional[str] = None
    for d in decls:
        if not isinstance(d, Defined):
            continue
        inner = _is_prf(d.ty)
        if inner is None:
            continue
        step_name = f"step_{d.name}"
        try:
            prop = elab_term(sig, ctx, dk_to_surface(inner, mapping), PROP)
        except (KernelError, UnknownName, DkTranslationError) as exc:
            raise DkSyntaxError(f"cannot translate type of {d.name}: {exc}", 0)
        try:
            ev: Union[ProofTerm, Hole] = elab_proof(
                sig, ctx, dk_to_surface(d.body, mapping), prop)
        except (KernelError, UnknownName, DkTranslationError):
            ev = Hole("unjustified clausification")
        steps.append(Step(step_name, prop, ev))
        mapping = dict(mapping)
        mapping[d.name] = step_name
        ctx = ctx.push_hyp(step_name, prop)
        if convertible(sig, prop, falsum):
            final = step_name
    if final is None:
        raise NoFalsumStep("no step proves falsum")

    proof: Optional[ProofTerm] = None
    if all(not isinstance(s.evidence, Hole) for s in steps):
        chain: ProofTerm = Hyp(final)
        for s in reversed(steps):
            chain = PApp(PLam(s.name, s.prop, chain), s.evidence)
        proof = PApp(TApp(Known("dneg"), goal.conclusion),
                     PLam(_NEG_HYP, not_c, chain))
    return Skeleton(goal, steps, final, proof)


@dataclass
class AuditReport:
    total: int
    holes: int
    checked: int

    @property
    def complete(self) -> bool:
        return self.holes == 0 and self.checked == self.total


def audit_skeleton(sig: Signature, sk: Skeleton) -> AuditReport:
    """Count steps and kernel-check every hole-free one against the context
    of its predecessors."""
    not_c = App(Const("not"), sk.goal.conclusion)
    ctx = sk.goal.ctx.push_hyp(_NEG_HYP, not_c)
    total = len(sk.steps)
    holes = 0
    checked = 0
    for s in sk.steps:
        if isinstance(s.evidence, Hole):
            holes += 1
        else:
            try:
                check_proof(sig, ctx, s.evidence, s.prop)
                checked += 1
            except KernelError:
                pass
        ctx = ctx.push_hyp(s.name, s.prop)
    return AuditReport(total, holes, checked)
