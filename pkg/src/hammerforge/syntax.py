"""Surface syntax: tokenizer, term grammar, elaboration and printing.

The notation is the ASCII one used throughout the proof scripts:
`/\\`, `\\/`, `->`, `~`, `<->`, `forall`, `exists`, `fun`, `=`, with
`set` and `prop` as the base types.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .kernel import (
    PROP, SET, All, App, Arrow, Const, Context, DefEntry, Hyp, Imp, Known,
    Lam, PApp, PLam, ProofTerm, Signature, SimpleType, TApp, TLam, Term, Var,
    UnknownConst, PropMismatch, IllTypedInstantiation, TypeMismatch,
    beta_eta, head_normal, convertible, typecheck,
)


class ScriptSyntaxError(Exception):
    def __init__(self, msg: str, line: int, col: int, offset: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col
        self.offset = offset


class UnknownName(Exception):
    pass


# ---------------------------------------------------------------------------
# tokenizer

@dataclass(frozen=True)
class Token:
    kind: str          # "name", "sym", "int", "eof"
    text: str
    start: int         # char offset
    end: int
    line: int
    col: int


_SYMBOLS = ["<->", ":=", "->", "<-", "/\\", "\\/",
            "(", ")", "{", "}", ".", ",", ":", "=", "~", "-", ";"]


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(text)
    line, linestart = 1, 0

    def err(msg, at):
        raise ScriptSyntaxError(msg, line, at - linestart + 1, at)

    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
            linestart = i
            continue
        if c.isspace():
            i += 1
            continue
        if text.startswith("//", i):
            j = text.find("\n", i)
            i = n if j < 0 else j
            continue
        if text.startswith("(*", i):
            depth, j = 1, i + 2
            while j < n and depth:
                if text.startswith("(*", j):
                    depth += 1
                    j += 2
                elif text.startswith("*)", j):
                    depth -= 1
                    j += 2
                else:
                    if text[j] == "\n":
                        line += 1
                        linestart = j + 1
                    j += 1
            if depth:
                err("unterminated comment", i)
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            toks.append(Token("name", text[i:j], i, j, line, i - linestart + 1))
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("int", text[i:j], i, j, line, i - linestart + 1))
            i = j
            continue
        for s in _SYMBOLS:
            if text.startswith(s, i):
                toks.append(Token("sym", s, i, i + len(s), line, i - linestart + 1))
                i += len(s)
                break
        else:
            err(f"unexpected character {c!r}", i)
    toks.append(Token("eof", "", n, n, line, n - linestart + 1))
    return toks


# ---------------------------------------------------------------------------
# surface AST

@dataclass(frozen=True)
class SName:
    name: str


@dataclass(frozen=True)
class SApp:
    fn: "SExpr"
    arg: "SExpr"


@dataclass(frozen=True)
class SBinderGroup:
    names: tuple[str, ...]
    ty: Optional[SimpleType]


@dataclass(frozen=True)
class SFun:
    binders: tuple[SBinderGroup, ...]
    body: "SExpr"


@dataclass(frozen=True)
class SAll:
    binders: tuple[SBinderGroup, ...]
    body: "SExpr"


@dataclass(frozen=True)
class SEx:
    binders: tuple[SBinderGroup, ...]
    body: "SExpr"


@dataclass(frozen=True)
class SBin:
    op: str            # "imp", "and", "or", "iff", "eq"
    left: "SExpr"
    right: "SExpr"


@dataclass(frozen=True)
class SNot:
    arg: "SExpr"


SExpr = object


class TokenStream:
    def __init__(self, toks: list[Token], pos: int = 0):
        self.toks = toks
        self.pos = pos

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def at_name(self, text: str) -> bool:
        return self.at("name", text)

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            self.error(f"expected {want!r}, found {t.text or t.kind!r}")
        return self.next()

    def error(self, msg: str):
        t = self.peek()
        raise ScriptSyntaxError(msg, t.line, t.col, t.start)


_TERM_KEYWORDS = {"fun", "forall", "exists", "let", "assume", "exact", "apply",
                  "rewrite", "claim", "aby", "Qed", "Theorem", "Definition", "at"}


def parse_type(ts: TokenStream) -> SimpleType:
    left = _parse_type_atom(ts)
    if ts.at("sym", "->"):
        ts.next()
        return Arrow(left, parse_type(ts))
    return left


def _parse_type_atom(ts: TokenStream) -> SimpleType:
    if ts.at("sym", "("):
        ts.next()
        t = parse_type(ts)
        ts.expect("sym", ")")
        return t
    tok = ts.expect("name")
    if tok.text == "set":
        return SET
    if tok.text == "prop":
        return PROP
    raise ScriptSyntaxError(f"unknown type {tok.text!r}", tok.line, tok.col, tok.start)


def parse_binders(ts: TokenStream, closers: tuple[str, ...]) -> tuple[SBinderGroup, ...]:
    groups: list[SBinderGroup] = []
    pending: list[str] = []
    while True:
        if ts.at("sym", "("):
            if pending:
                groups.append(SBinderGroup(tuple(pending), None))
                pending = []
            ts.next()
            names = []
            while ts.at("name") and not ts.at("sym", ":"):
                names.append(ts.next().text)
            ts.expect("sym", ":")
            ty = parse_type(ts)
            ts.expect("sym", ")")
            groups.append(SBinderGroup(tuple(names), ty))
        elif ts.at("name") and ts.peek().text not in _TERM_KEYWORDS:
            pending.append(ts.next().text)
        elif ts.at("sym", ":") and pending:
            ts.next()
            ty = parse_type(ts)
            groups.append(SBinderGroup(tuple(pending), ty))
            pending = []
        elif ts.at("sym") and ts.peek().text in closers:
            break
        else:
            ts.error("expected binder or end of binder list")
    if pending:
        groups.append(SBinderGroup(tuple(pending), None))
    if not groups:
        ts.error("expected at least one binder")
    return tuple(groups)


def parse_term(ts: TokenStream) -> SExpr:
    if ts.at_name("fun"):
        ts.next()
        binders = parse_binders(ts, (".",))
        ts.expect("sym", ".")
        return SFun(binders, parse_term(ts))
    if ts.at_name("forall"):
        ts.next()
        binders = parse_binders(ts, (",",))
        ts.expect("sym", ",")
        return SAll(binders, parse_term(ts))
    if ts.at_name("exists"):
        ts.next()
        binders = parse_binders(ts, (",",))
        ts.expect("sym", ",")
        return SEx(binders, parse_term(ts))
    return _parse_iff(ts)


def _operand(ts: TokenStream, sub) -> SExpr:
    # a binder form may start any right-hand operand; it extends maximally
    if ts.at_name("fun") or ts.at_name("forall") or ts.at_name("exists"):
        return parse_term(ts)
    return sub(ts)


def _parse_iff(ts: TokenStream) -> SExpr:
    left = _parse_imp(ts)
    while ts.at("sym", "<->"):
        ts.next()
        left = SBin("iff", left, _operand(ts, _parse_imp))
    return left


def _parse_imp(ts: TokenStream) -> SExpr:
    left = _parse_or(ts)
    if ts.at("sym", "->"):
        ts.next()
        return SBin("imp", left, _operand(ts, _parse_imp))
    return left


def _parse_or(ts: TokenStream) -> SExpr:
    left = _parse_and(ts)
    while ts.at("sym", "\\/"):
        ts.next()
        left = SBin("or", left, _operand(ts, _parse_and))
    return left


def _parse_and(ts: TokenStream) -> SExpr:
    left = _parse_eq(ts)
    while ts.at("sym", "/\\"):
        ts.next()
        left = SBin("and", left, _operand(ts, _parse_eq))
    return left


def _parse_eq(ts: TokenStream) -> SExpr:
    left = _parse_not(ts)
    if ts.at("sym", "="):
        ts.next()
        return SBin("eq", left, _operand(ts, _parse_not))
    return left


def _parse_not(ts: TokenStream) -> SExpr:
    if ts.at("sym", "~"):
        ts.next()
        return SNot(_operand(ts, _parse_not))
    return _parse_app(ts)


def _parse_app(ts: TokenStream) -> SExpr:
    head = _parse_atom(ts)
    while True:
        t = ts.peek()
        if t.kind == "name" and t.text not in _TERM_KEYWORDS:
            head = SApp(head, SName(ts.next().text))
        elif t.kind == "sym" and t.text == "(":
            ts.next()
            inner = parse_term(ts)
            ts.expect("sym", ")")
            head = SApp(head, inner)
        else:
            return head


def _parse_atom(ts: TokenStream) -> SExpr:
    t = ts.peek()
    if t.kind == "name" and t.text not in _TERM_KEYWORDS:
        ts.next()
        return SName(t.text)
    if t.kind == "name" and t.text == "fun":
        return parse_term(ts)
    if ts.at("sym", "("):
        ts.next()
        inner = parse_term(ts)
        ts.expect("sym", ")")
        return inner
    ts.error(f"expected a term, found {t.text or t.kind!r}")


def parse_term_string(text: str) -> SExpr:
    ts = TokenStream(tokenize(text))
    e = parse_term(ts)
    if not ts.at("eof"):
        ts.error("trailing input after term")
    return e


# ---------------------------------------------------------------------------
# type-indexed connective families (exists / equality per simple type)

def type_tag(ty: SimpleType) -> str:
    if ty == SET:
        return "i"
    if ty == PROP:
        return "o"
    assert isinstance(ty, Arrow)
    return "f" + type_tag(ty.dom) + type_tag(ty.cod)


def eq_def(ty: SimpleType) -> DefEntry:
    """Leibniz equality at ty: fun x y. forall Q:ty->prop. Q x -> Q y."""
    body = All(Arrow(ty, PROP),
               Imp(App(Var(0), Var(2)), App(Var(0), Var(1))), "Q")
    return DefEntry("eq_" + type_tag(ty), Arrow(ty, Arrow(ty, PROP)),
                    Lam(ty, Lam(ty, body, "y"), "x"))


def ex_def(ty: SimpleType) -> DefEntry:
    """Impredicative existential at ty."""
    body = All(PROP,
               Imp(All(ty, Imp(App(Var(2), Var(0)), Var(1)), "x"), Var(0)), "q")
    return DefEntry("ex_" + type_tag(ty), Arrow(Arrow(ty, PROP), PROP),
                    Lam(Arrow(ty, PROP), body, "P"))


def ensure_eq(sig: Signature, ty: SimpleType) -> str:
    name = "eq_" + type_tag(ty)
    if name not in sig:
        sig.add(eq_def(ty))
    return name


def ensure_ex(sig: Signature, ty: SimpleType) -> str:
    name = "ex_" + type_tag(ty)
    if name not in sig:
        sig.add(ex_def(ty))
    return name


def eq_sides(sig: Signature, prop: Term):
    """Decompose `eq_τ s t` (possibly behind definitions); None otherwise."""
    n = beta_eta(sig, prop)
    from .kernel import spine
    head, args = spine(n)
    if isinstance(head, Const) and head.name.startswith("eq_") and len(args) == 2:
        return head.name, args[0], args[1]
    return None


# ---------------------------------------------------------------------------
# term elaboration

def elab_term(sig: Signature, ctx: Context, e: SExpr,
              expected: Optional[SimpleType] = None) -> Term:
    names = [n for n, _ in ctx.vars]
    tys = [t for _, t in ctx.vars]
    t, ty = _elab(sig, names, tys, e, expected)
    return t


def _elab(sig, names: list[str], tys: list[SimpleType], e: SExpr,
          expected: Optional[SimpleType]):
    if isinstance(e, SName):
        if e.name in names:
            i = _rindex(names, e.name)
            t, ty = Var(len(names) - 1 - i), tys[i]
        else:
            try:
                ty = sig.const_type(e.name)
            except UnknownConst:
                raise UnknownName(e.name) from None
            t = Const(e.name)
        _require(expected, ty, e)
        return t, ty
    if isinstance(e, SApp):
        f, fty = _elab(sig, names, tys, e.fn, None)
        if not isinstance(fty, Arrow):
            raise TypeMismatch("a function type", fty, "in application")
        a, _ = _elab(sig, names, tys, e.arg, fty.dom)
        _require(expected, fty.cod, e)
        return App(f, a), fty.cod
    if isinstance(e, SFun):
        flat = _flatten_binders(e.binders)
        return _elab_fun(sig, names, tys, flat, e.body, expected)
    if isinstance(e, SAll):
        flat = _flatten_binders(e.binders, default=SET)
        t = _elab_quant(sig, names, tys, flat, e.body, kind="all")
        _require(expected, PROP, e)
        return t, PROP
    if isinstance(e, SEx):
        flat = _flatten_binders(e.binders, default=SET)
        t = _elab_quant(sig, names, tys, flat, e.body, kind="ex")
        _require(expected, PROP, e)
        return t, PROP
    if isinstance(e, SNot):
        a, _ = _elab(sig, names, tys, e.arg, PROP)
        _require(expected, PROP, e)
        return App(Const("not"), a), PROP
    if isinstance(e, SBin):
        if e.op == "imp":
            l, _ = _elab(sig, names, tys, e.left, PROP)
            r, _ = _elab(sig, names, tys, e.right, PROP)
            _require(expected, PROP, e)
            return Imp(l, r), PROP
        if e.op == "eq":
            l, lty = _elab(sig, names, tys, e.left, None)
            r, _ = _elab(sig, names, tys, e.right, lty)
            name = ensure_eq(sig, lty)
            _require(expected, PROP, e)
            return App(App(Const(name), l), r), PROP
        l, _ = _elab(sig, names, tys, e.left, PROP)
        r, _ = _elab(sig, names, tys, e.right, PROP)
        _require(expected, PROP, e)
        return App(App(Const(e.op), l), r), PROP
    raise TypeError(e)


def _rindex(lst, x):
    for i in range(len(lst) - 1, -1, -1):
        if lst[i] == x:
            return i
    raise ValueError(x)


def _require(expected, actual, e):
    if expected is not None and expected != actual:
        raise TypeMismatch(expected, actual)


def _flatten_binders(groups, default=None):
    out = []
    for g in groups:
        for n in g.names:
            out.append((n, g.ty if g.ty is not None else default))
    return out


def _elab_fun(sig, names, tys, binders, body, expected):
    if not binders:
        return _elab(sig, names, tys, body, expected)
    (bname, bty), rest = binders[0], binders[1:]
    if bty is None:
        if not isinstance(expected, Arrow):
            raise TypeMismatch("an annotated binder or arrow type", expected,
                               f"binder {bname}")
        bty = expected.dom
    elif isinstance(expected, Arrow) and expected.dom != bty:
        raise TypeMismatch(expected.dom, bty, f"binder {bname}")
    inner_expected = expected.cod if isinstance(expected, Arrow) else None
    names.append(bname)
    tys.append(bty)
    b, bodyty = _elab_fun(sig, names, tys, rest, body, inner_expected)
    names.pop()
    tys.pop()
    return Lam(bty, b, bname), Arrow(bty, bodyty)


def _elab_quant(sig, names, tys, binders, body, kind):
    if not binders:
        t, ty = _elab(sig, names, tys, body, PROP)
        return t
    (bname, bty), rest = binders[0], binders[1:]
    names.append(bname)
    tys.append(bty)
    inner = _elab_quant(sig, names, tys, rest, body, kind)
    names.pop()
    tys.pop()
    if kind == "all":
        return All(bty, inner, bname)
    name = ensure_ex(sig, bty)
    return App(Const(name), Lam(bty, inner, bname))


# ---------------------------------------------------------------------------
# proof-expression elaboration (bidirectional)

def elab_proof(sig: Signature, ctx: Context, e: SExpr, expected: Term) -> ProofTerm:
    if isinstance(e, SFun):
        flat = _flatten_binders(e.binders)
        return _elab_proof_fun(sig, ctx, flat, e.body, expected)
    pt, prop = synth_proof(sig, ctx, e)
    if not convertible(sig, prop, expected):
        raise PropMismatch(f"expression proves {prop}, goal is {expected}")
    return pt


def _elab_proof_fun(sig, ctx: Context, binders, body, expected: Term) -> ProofTerm:
    if not binders:
        return elab_proof(sig, ctx, body, expected)
    (bname, bty), rest = binders[0], binders[1:]
    g = head_normal(sig, expected, (All, Imp))
    if isinstance(g, All):
        if bty is not None and bty != g.var_ty:
            raise IllTypedInstantiation(
                f"binder {bname}: annotated {bty}, expected {g.var_ty}")
        inner = _elab_proof_fun(sig, ctx.push_var(bname, g.var_ty), rest, body, g.body)
        return TLam(bname, g.var_ty, inner)
    if isinstance(g, Imp):
        inner = _elab_proof_fun(sig, ctx.push_hyp(bname, g.antecedent), rest, body,
                                g.consequent)
        return PLam(bname, g.antecedent, inner)
    raise PropMismatch(f"too many binders: goal {expected} is not a forall/implication")


def synth_proof(sig: Signature, ctx: Context, e: SExpr) -> tuple[ProofTerm, Term]:
    head = e
    args: list[SExpr] = []
    while isinstance(head, SApp):
        args.append(head.arg)
        head = head.fn
    args.reverse()
    if not isinstance(head, SName):
        raise PropMismatch("cannot infer the proposition of this proof expression")
    if ctx.has_hyp(head.name):
        pt: ProofTerm = Hyp(head.name)
        prop = ctx.hyp_prop(head.name)
    elif head.name in sig:
        entry = sig.lookup(head.name)
        from .kernel import AxiomEntry, ThmEntry
        if not isinstance(entry, (AxiomEntry, ThmEntry)):
            raise PropMismatch(f"{head.name} is a term constant, not a proof")
        pt = Known(head.name)
        prop = entry.prop
    else:
        raise UnknownName(head.name)
    for a in args:
        g = head_normal(sig, prop, (All, Imp))
        if isinstance(g, All):
            t = elab_term(sig, ctx, a, g.var_ty)
            pt = TApp(pt, t)
            from .kernel import instantiate
            prop = instantiate(g.body, t)
        elif isinstance(g, Imp):
            sub = elab_proof(sig, ctx, a, g.antecedent)
            pt = PApp(pt, sub)
            prop = g.consequent
        else:
            raise PropMismatch(f"too many arguments: {prop} takes no more")
    return pt, prop


# ---------------------------------------------------------------------------
# printing

def type_str(ty: SimpleType, atom: bool = False) -> str:
    if ty == SET:
        return "set"
    if ty == PROP:
        return "prop"
    s = f"{type_str(ty.dom, atom=True)} -> {type_str(ty.cod)}"
    return f"({s})" if atom else s


_PREC_BINDER = 0
_PREC_IFF = 10
_PREC_IMP = 20
_PREC_OR = 30
_PREC_AND = 40
_PREC_EQ = 50
_PREC_NOT = 60
_PREC_APP = 70


def term_str(t: Term, env: Optional[list[str]] = None) -> str:
    return _pr(t, list(env or []), _PREC_BINDER)


def _fresh(env: list[str], hint: str) -> str:
    name = hint or "x"
    while name in env:
        name += "'"
    return name


def _pr(t: Term, env: list[str], prec: int) -> str:
    from .kernel import spine
    if isinstance(t, Var):
        if t.index < len(env):
            return env[len(env) - 1 - t.index]
        return f"?v{t.index}"
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Imp):
        s = f"{_pr(t.antecedent, env, _PREC_IMP + 1)} -> {_pr(t.consequent, env, _PREC_IMP)}"
        return _paren(s, prec > _PREC_IMP)
    if isinstance(t, All):
        name = _fresh(env, t.hint)
        env.append(name)
        body = _pr(t.body, env, _PREC_BINDER)
        env.pop()
        s = f"forall {name}:{type_str(t.var_ty)}, {body}"
        return _paren(s, prec > _PREC_BINDER)
    if isinstance(t, Lam):
        name = _fresh(env, t.hint)
        env.append(name)
        body = _pr(t.body, env, _PREC_BINDER)
        env.pop()
        s = f"fun {name}:{type_str(t.var_ty)}. {body}"
        return _paren(s, prec > _PREC_BINDER)
    if isinstance(t, App):
        head, args = spine(t)
        if isinstance(head, Const):
            hn = head.name
            if hn == "not" and len(args) == 1:
                s = f"~{_pr(args[0], env, _PREC_NOT + 1)}"
                return _paren(s, prec > _PREC_NOT)
            if hn in ("and", "or", "iff") and len(args) == 2:
                op, p = {"and": ("/\\", _PREC_AND), "or": ("\\/", _PREC_OR),
                         "iff": ("<->", _PREC_IFF)}[hn]
                s = f"{_pr(args[0], env, p)} {op} {_pr(args[1], env, p + 1)}"
                return _paren(s, prec > p)
            if hn.startswith("eq_") and len(args) == 2:
                s = f"{_pr(args[0], env, _PREC_EQ + 1)} = {_pr(args[1], env, _PREC_EQ + 1)}"
                return _paren(s, prec > _PREC_EQ)
            if hn.startswith("ex_") and len(args) == 1 and isinstance(args[0], Lam):
                lam = args[0]
                name = _fresh(env, lam.hint)
                env.append(name)
                body = _pr(lam.body, env, _PREC_BINDER)
                env.pop()
                s = f"exists {name}:{type_str(lam.var_ty)}, {body}"
                return _paren(s, prec > _PREC_BINDER)
        parts = [_pr(head, env, _PREC_APP + 1)] + [_pr(a, env, _PREC_APP + 1) for a in args]
        return _paren(" ".join(parts), prec > _PREC_APP)
    raise TypeError(t)


def _paren(s: str, need: bool) -> str:
    return f"({s})" if need else s
