"""TPTP problem emission and re-parsing.

Higher-order problems are written in TH0 with the propositional connectives,
equality, and existentials rendered natively (`--literal-defs` switches to
definitional rendering).  First-order problems are written in FOF when the
formulas fit the fragment.

Symbol names are mangled so that every character outside [a-zA-Z0-9] becomes
an underscore followed by two uppercase hex digits; formula names add a role
prefix and a decimal statement ordinal, e.g. `axiom_ordinal_5Fordsucc9`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .kernel import (
    PROP, SET, All, App, Arrow, Const, DefEntry, Imp, Lam, Signature,
    SimpleType, Term, Var, beta_eta, const_names, instantiate, spine,
)


class MangleError(Exception):
    pass


class UnmangleError(Exception):
    pass


class NotFirstOrder(Exception):
    def __init__(self, reason: str, subterm: Optional[Term] = None):
        super().__init__(reason)
        self.reason = reason
        self.subterm = subterm


def mangle(name: str) -> str:
    out = []
    for ch in name:
        if ch.isascii() and (ch.isalnum()):
            out.append(ch)
        else:
            code = ord(ch)
            if code > 0xFF:
                raise MangleError(f"character {ch!r} not representable")
            out.append(f"_{code:02X}")
    return "".join(out)


def unmangle(name: str) -> str:
    out = []
    i = 0
    while i < len(name):
        ch = name[i]
        if ch == "_":
            hexpair = name[i + 1:i + 3]
            if len(hexpair) != 2 or not all(c in "0123456789ABCDEF" for c in hexpair):
                raise UnmangleError(f"bad escape at {i} in {name!r}")
            out.append(chr(int(hexpair, 16)))
            i += 3
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def recover_formula_name(emitted: str, bundle_names: set[str]) -> tuple[str, str]:
    """Invert an emitted formula name back to (source name, kind).

    kind is "axiom", "hyp", "def", or "conjecture".  The trailing statement
    ordinal is stripped by taking the longest run of trailing digits whose
    remainder unmangles to a name the bundle knows about."""
    for prefix, kind in (("axiom_c_", "hyp"), ("axiom_", "axiom"),
                         ("def_", "def"), ("conj_", "conjecture")):
        if emitted.startswith(prefix):
            core = emitted[len(prefix):]
            break
    else:
        raise UnmangleError(f"no role prefix on {emitted!r}")
    # digits may belong to the mangled name itself; membership decides
    i = len(core)
    while i > 0 and core[i - 1].isdigit():
        i -= 1
    for cut in range(i, len(core) + 1):
        try:
            candidate = unmangle(core[:cut])
        except UnmangleError:
            continue
        if candidate in bundle_names:
            return candidate, kind
    raise UnmangleError(f"{emitted!r} does not resolve against the bundle")


# ---------------------------------------------------------------------------
# problem bundles

@dataclass
class ProblemFormula:
    name: str              # source-level name (hypothesis, theorem, def)
    prop: Term
    kind: str              # "axiom" | "hyp" | "def"


@dataclass
class ProblemBundle:
    problem_id: str
    mode: str              # "bushy" | "chainy"
    theorem: str
    origin_offset: int
    consts: list[tuple[str, SimpleType]]
    formulas: list[ProblemFormula]
    conjecture: Term

    def names(self) -> set[str]:
        out = {self.theorem}
        out.update(f.name for f in self.formulas)
        return out


# connective constants rendered natively in TH0
_NATIVE_FIXED = {"and", "or", "not", "iff", "True", "False"}


def _is_native(name: str) -> bool:
    return (name in _NATIVE_FIXED or name.startswith("eq_")
            or name.startswith("ex_"))


# ---------------------------------------------------------------------------
# TH0 emission

def _ty_th0(ty: SimpleType, top: bool = True) -> str:
    if ty == PROP:
        return "$o"
    if ty == SET:
        return "iota"
    assert isinstance(ty, Arrow)
    s = f"{_ty_th0(ty.dom, False)} > {_ty_th0(ty.cod, False)}"
    return s if top else f"({s})"


def _atom(mangled: str) -> str:
    if mangled and mangled[0].islower():
        return mangled
    return "'" + mangled.replace("\\", "\\\\").replace("'", "\\'") + "'"


def _tag_of_eq(name: str) -> str:
    return name[len("eq_"):]


def _ty_from_tag(tag: str) -> SimpleType:
    def go(i):
        c = tag[i]
        if c == "i":
            return SET, i + 1
        if c == "o":
            return PROP, i + 1
        if c == "f":
            a, j = go(i + 1)
            b, k = go(j)
            return Arrow(a, b), k
        raise UnmangleError(f"bad type tag {tag!r}")
    ty, i = go(0)
    if i != len(tag):
        raise UnmangleError(f"bad type tag {tag!r}")
    return ty


class _Th0Printer:
    def __init__(self, literal_defs: bool):
        self.literal = literal_defs
        self.fresh = 0

    def var(self, env: list[str], hint: str) -> str:
        base = "".join(c for c in mangle(hint or "x") if c.isalnum()) or "X"
        name = base[0].upper() + base[1:]
        while name in env:
            self.fresh += 1
            name = f"{base[0].upper()}{base[1:]}_{self.fresh}"
        return name

    def term(self, t: Term, env: list[str], tys: list[SimpleType]) -> str:
        # env/tys: innermost binder last
        if isinstance(t, Var):
            return env[len(env) - 1 - t.index]
        if isinstance(t, Const):
            if not self.literal:
                if t.name == "True":
                    return "$true"
                if t.name == "False":
                    return "$false"
                if _is_native(t.name):
                    return self.native_const(t.name, env, tys)
            return _atom(mangle(t.name))
        if isinstance(t, App):
            head, args = spine(t)
            if not self.literal and isinstance(head, Const) and _is_native(head.name):
                s = self.native_app(head.name, args, env, tys)
                if s is not None:
                    return s
            return self._app(t, env, tys)
        if isinstance(t, Imp):
            return (f"({self.term(t.antecedent, env, tys)} => "
                    f"{self.term(t.consequent, env, tys)})")
        if isinstance(t, All):
            v = self.var(env, t.hint)
            body = self.term(t.body, env + [v], tys + [t.var_ty])
            return f"(![{v}: {_ty_th0(t.var_ty)}]: {body})"
        if isinstance(t, Lam):
            v = self.var(env, t.hint)
            body = self.term(t.body, env + [v], tys + [t.var_ty])
            return f"(^[{v}: {_ty_th0(t.var_ty)}]: {body})"
        raise TypeError(t)

    def _app(self, t: Term, env, tys) -> str:
        return f"({self.term(t.fn, env, tys)} @ {self.term(t.arg, env, tys)})"

    def native_app(self, name: str, args: list[Term], env, tys) -> Optional[str]:
        rd = lambda u: self.term(u, env, tys)
        if name == "and" and len(args) == 2:
            return f"({rd(args[0])} & {rd(args[1])})"
        if name == "or" and len(args) == 2:
            return f"({rd(args[0])} | {rd(args[1])})"
        if name == "iff" and len(args) == 2:
            return f"({rd(args[0])} <=> {rd(args[1])})"
        if name == "not" and len(args) == 1:
            return f"(~ {rd(args[0])})"
        if name.startswith("eq_") and len(args) == 2:
            return f"({rd(args[0])} = {rd(args[1])})"
        if name.startswith("ex_") and len(args) == 1:
            ty = _ty_from_tag(name[len("ex_"):])
            body = beta_eta_local(args[0])
            if isinstance(body, Lam):
                v = self.var(env, body.hint)
                inner = self.term(body.body, env + [v], tys + [body.var_ty])
                return f"(?[{v}: {_ty_th0(ty)}]: {inner})"
            v = self.var(env, "x")
            return f"(?[{v}: {_ty_th0(ty)}]: ({rd(body)} @ {v}))"
        return None

    def native_const(self, name: str, env, tys) -> str:
        # partially applied connective: eta-expand
        expand = {
            "and": "(^[A: $o]: (^[B: $o]: (A & B)))",
            "or": "(^[A: $o]: (^[B: $o]: (A | B)))",
            "iff": "(^[A: $o]: (^[B: $o]: (A <=> B)))",
            "not": "(^[A: $o]: (~ A))",
        }
        if name in expand:
            return expand[name]
        if name.startswith("eq_"):
            ty = _ty_th0(_ty_from_tag(_tag_of_eq(name)))
            return f"(^[A: {ty}]: (^[B: {ty}]: (A = B)))"
        if name.startswith("ex_"):
            ty = _ty_th0(_ty_from_tag(name[len("ex_"):]))
            return f"(^[P: {ty} > $o]: (?[X: {ty}]: (P @ X)))"
        raise MangleError(name)


def beta_eta_local(t: Term) -> Term:
    # signature-free beta-eta step for printer convenience
    empty = Signature()
    return beta_eta(empty, t)


def to_th0(bundle: ProblemBundle, literal_defs: bool = False) -> str:
    """Render a bundle as a TH0 problem, one statement per line."""
    pr = _Th0Printer(literal_defs)
    lines = [
        f"% problem: {bundle.problem_id}",
        f"% origin: {bundle.theorem}@{bundle.origin_offset}",
        f"% mode: {bundle.mode}",
    ]
    n = 0
    lines.append(f"thf(ty_iota, type, iota: $tType).")
    n += 1
    for cname, ty in bundle.consts:
        if not literal_defs and _is_native(cname):
            continue
        m = mangle(cname)
        lines.append(f"thf(ty_{m}, type, {_atom(m)}: {_ty_th0(ty)}).")
        n += 1
    for f in bundle.formulas:
        m = mangle(f.name)
        if f.kind == "hyp":
            fname = f"axiom_c_{m}{n}"
            role = "axiom"
        elif f.kind == "def":
            fname = f"def_{m}{n}"
            role = "definition"
        else:
            fname = f"axiom_{m}{n}"
            role = "axiom"
        lines.append(f"thf({fname}, {role}, {pr.term(f.prop, [], [])}).")
        n += 1
    cname = f"conj_{mangle(bundle.theorem)}{n}"
    lines.append(f"thf({cname}, conjecture, {pr.term(bundle.conjecture, [], [])}).")
    return "\n".join(lines) + "\n"


def def_axiom(name: str, ty: SimpleType, definiens: Term) -> Term:
    """Equational axiom `c = definiens` at the definition's type."""
    from .syntax import type_tag
    eq = Const(f"eq_{type_tag(ty)}")
    return App(App(eq, Const(name)), definiens)


def def_closure(sig: Signature, names: set[str], *,
                include_native: bool = False) -> list[str]:
    """Definition constants reachable from `names` through definientia,
    in signature order."""
    defs = sig.def_names()
    seen: set[str] = set()
    work = sorted(names & defs, key=sig.index_of)
    while work:
        n = work.pop(0)
        if n in seen:
            continue
        seen.add(n)
        d = sig.definiens(n)
        for m in const_names(d):
            if m in defs and m not in seen:
                work.append(m)
    if not include_native:
        seen = {n for n in seen if not _is_native(n)}
    return sorted(seen, key=sig.index_of)


# ---------------------------------------------------------------------------
# TH0 parsing

@dataclass
class ParsedProblem:
    problem_id: Optional[str]
    mode: Optional[str]
    origin: Optional[str]
    decls: dict[str, SimpleType]
    formulas: list[tuple[str, str, Term]]   # (formula name, role, prop)

    def conjecture(self) -> Optional[Term]:
        for _, role, t in self.formulas:
            if role == "conjecture":
                return t
        return None

    def axiom_names(self) -> list[str]:
        return [n for n, role, _ in self.formulas if role in ("axiom", "definition")]


class Th0ParseError(Exception):
    pass


def _th0_tokenize(text: str) -> list[str]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "'":
            j = i + 1
            buf = []
            while j < n and text[j] != "'":
                if text[j] == "\\":
                    j += 1
                    buf.append(text[j])
                else:
                    buf.append(text[j])
                j += 1
            if j >= n:
                raise Th0ParseError("unterminated quoted atom")
            toks.append("'" + "".join(buf))
            i = j + 1
            continue
        for sym in ("<=>", "=>", "!=", "$tType", "$true", "$false", "$o",
                    "![", "?[", "^[", "(", ")", "]", ":", ",", ".", "&",
                    "|", "~", "=", "@", ">"):
            if text.startswith(sym, i):
                toks.append(sym)
                i += len(sym)
                break
        else:
            if c.isalnum() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                toks.append(text[i:j])
                i = j
            else:
                raise Th0ParseError(f"unexpected character {c!r} at {i}")
    return toks


class _Th0Parser:
    """Parser for the fully-parenthesized dialect this module emits."""

    def __init__(self, toks: list[str], decls: dict[str, SimpleType]):
        self.toks = toks
        self.pos = 0
        self.decls = decls

    def peek(self) -> str:
        return self.toks[self.pos] if self.pos < len(self.toks) else "<eof>"

    def next(self) -> str:
        t = self.peek()
        self.pos += 1
        return t

    def expect(self, t: str) -> None:
        got = self.next()
        if got != t:
            raise Th0ParseError(f"expected {t!r}, found {got!r}")

    def parse_type(self) -> SimpleType:
        left = self.parse_type_atom()
        if self.peek() == ">":
            self.next()
            return Arrow(left, self.parse_type())
        return left

    def parse_type_atom(self) -> SimpleType:
        t = self.next()
        if t == "$o":
            return PROP
        if t == "iota":
            return SET
        if t == "(":
            ty = self.parse_type()
            self.expect(")")
            return ty
        raise Th0ParseError(f"expected a type, found {t!r}")

    # formulas: the printer parenthesizes everything, so each connective
    # appears directly inside its own parens
    def parse_form(self, env: list[tuple[str, SimpleType]]) -> Term:
        t = self.peek()
        if t in ("![", "?[", "^["):
            self.next()
            vname = self.next()
            self.expect(":")
            ty = self.parse_type()
            self.expect("]")
            self.expect(":")
            body = self.parse_form(env + [(vname, ty)])
            if t == "![":
                return All(ty, body, hint=vname.lower())
            if t == "^[":
                return Lam(ty, body, hint=vname.lower())
            from .syntax import type_tag
            return App(Const(f"ex_{type_tag(ty)}"),
                       Lam(ty, body, hint=vname.lower()))
        if t == "~":
            self.next()
            return App(Const("not"), self.parse_form(env))
        if t == "(":
            self.next()
            left = self.parse_form(env)
            op = self.peek()
            if op == ")":
                self.next()
                return left
            self.next()
            if op == "@":
                out = App(left, self.parse_form(env))
                while self.peek() == "@":
                    self.next()
                    out = App(out, self.parse_form(env))
                self.expect(")")
                return out
            right = self.parse_form(env)
            self.expect(")")
            if op == "=>":
                return Imp(left, right)
            if op == "&":
                return App(App(Const("and"), left), right)
            if op == "|":
                return App(App(Const("or"), left), right)
            if op == "<=>":
                return App(App(Const("iff"), left), right)
            if op in ("=", "!="):
                ty = self.infer(left, env)
                from .syntax import type_tag
                eq = App(App(Const(f"eq_{type_tag(ty)}"), left), right)
                return eq if op == "=" else App(Const("not"), eq)
            raise Th0ParseError(f"unexpected operator {op!r}")
        if t == "$true":
            self.next()
            return Const("True")
        if t == "$false":
            self.next()
            return Const("False")
        name = self.next()
        if name.startswith("'"):
            return Const(unmangle(name[1:]))
        for i, (vn, _) in enumerate(reversed(env)):
            if vn == name:
                return Var(i)
        return Const(unmangle(name))

    def infer(self, t: Term, env: list[tuple[str, SimpleType]]) -> SimpleType:
        if isinstance(t, Var):
            return env[len(env) - 1 - t.index][1]
        if isinstance(t, Const):
            if t.name in self.decls:
                return self.decls[t.name]
            raise Th0ParseError(f"cannot infer type of {t.name!r}")
        if isinstance(t, App):
            fn = self.infer(t.fn, env)
            if not isinstance(fn, Arrow):
                raise Th0ParseError("application of non-function")
            return fn.cod
        if isinstance(t, Lam):
            return Arrow(t.var_ty, self.infer(t.body, env + [("_", t.var_ty)]))
        return PROP


def parse_th0(text: str) -> ParsedProblem:
    problem_id = mode = origin = None
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("% problem:"):
            problem_id = line.split(":", 1)[1].strip()
        elif line.startswith("% mode:"):
            mode = line.split(":", 1)[1].strip()
        elif line.startswith("% origin:"):
            origin = line.split(":", 1)[1].strip()
    toks = _th0_tokenize(text)
    decls: dict[str, SimpleType] = {}
    formulas: list[tuple[str, str, Term]] = []
    p = _Th0Parser(toks, decls)
    while p.pos < len(toks):
        p.expect("thf")
        p.expect("(")
        fname = p.next()
        p.expect(",")
        role = p.next()
        p.expect(",")
        if role == "type":
            sym = p.next()
            if sym.startswith("'"):
                sym = sym[1:]
            p.expect(":")
            if p.peek() == "$tType":
                p.next()
            else:
                decls[unmangle(sym)] = p.parse_type()
        else:
            formulas.append((fname, role, p.parse_form([])))
        p.expect(")")
        p.expect(".")
    return ParsedProblem(problem_id, mode, origin, decls, formulas)


# ---------------------------------------------------------------------------
# FOF

@dataclass
class _FofCtx:
    consts: dict[str, SimpleType]


def _fo_type_ok(ty: SimpleType) -> bool:
    # ι^n -> ι (function) or ι^n -> o (predicate)
    while isinstance(ty, Arrow):
        if ty.dom != SET:
            return False
        ty = ty.cod
    return ty in (SET, PROP)


def fo_fragment_check(bundle: ProblemBundle) -> None:
    """Raise NotFirstOrder if any bundle formula leaves the FOF fragment."""
    consts = dict(bundle.consts)
    for cname, ty in bundle.consts:
        if not _is_native(cname) and not _fo_type_ok(ty):
            raise NotFirstOrder(f"constant {cname} has higher-order type")
    for f in bundle.formulas:
        _fof_formula(f.prop, [], consts, render=False)
    _fof_formula(bundle.conjecture, [], consts, render=False)


def to_fof(bundle: ProblemBundle) -> str:
    """Render a bundle as a FOF problem; NotFirstOrder when it does not fit."""
    consts = dict(bundle.consts)
    for cname, ty in bundle.consts:
        if not _is_native(cname) and not _fo_type_ok(ty):
            raise NotFirstOrder(f"constant {cname} has higher-order type")
    lines = [
        f"% problem: {bundle.problem_id}",
        f"% origin: {bundle.theorem}@{bundle.origin_offset}",
        f"% mode: {bundle.mode}",
    ]
    n = 0
    for f in bundle.formulas:
        m = mangle(f.name)
        if f.kind == "hyp":
            fname, role = f"axiom_c_{m}{n}", "axiom"
        elif f.kind == "def":
            fname, role = f"def_{m}{n}", "axiom"
        else:
            fname, role = f"axiom_{m}{n}", "axiom"
        lines.append(f"fof({fname}, {role}, {_fof_formula(f.prop, [], consts)}).")
        n += 1
    cname = f"conj_{mangle(bundle.theorem)}{n}"
    lines.append(f"fof({cname}, conjecture, "
                 f"{_fof_formula(bundle.conjecture, [], consts)}).")
    return "\n".join(lines) + "\n"


def fof_from_parsed(p: ParsedProblem) -> str:
    """Re-render a parsed TH0 problem as FOF, keeping formula names.
    Raises NotFirstOrder when any formula leaves the fragment."""
    lines = []
    if p.problem_id:
        lines.append(f"% problem: {p.problem_id}")
    if p.origin:
        lines.append(f"% origin: {p.origin}")
    if p.mode:
        lines.append(f"% mode: {p.mode}")
    for cname, ty in p.decls.items():
        if not _is_native(cname) and not _fo_type_ok(ty):
            raise NotFirstOrder(f"constant {cname} has higher-order type")
    for fname, role, t in p.formulas:
        r = "conjecture" if role == "conjecture" else "axiom"
        lines.append(f"fof({fname}, {r}, {_fof_formula(t, [], p.decls)}).")
    return "\n".join(lines) + "\n"


def _fof_var(env: list[str], hint: str) -> str:
    base = "".join(c for c in mangle(hint or "x") if c.isalnum()) or "X"
    name = base[0].upper() + base[1:]
    k = 0
    while name in env:
        k += 1
        name = f"{base[0].upper()}{base[1:]}{k}"
    return name


def _fof_formula(t: Term, env: list[str], consts, render: bool = True) -> str:
    nt = beta_eta_local(t)
    if isinstance(nt, Imp):
        a = _fof_formula(nt.antecedent, env, consts, render)
        b = _fof_formula(nt.consequent, env, consts, render)
        return f"({a} => {b})"
    if isinstance(nt, All):
        if nt.var_ty != SET:
            raise NotFirstOrder("quantification over a non-individual type", nt)
        v = _fof_var(env, nt.hint)
        body = _fof_formula(nt.body, env + [v], consts, render)
        return f"(![{v}]: {body})"
    if isinstance(nt, Lam):
        raise NotFirstOrder("lambda in formula position", nt)
    head, args = spine(nt)
    if isinstance(head, Const):
        hn = head.name
        if hn == "True" and not args:
            return "$true"
        if hn == "False" and not args:
            return "$false"
        if hn == "not" and len(args) == 1:
            return f"(~ {_fof_formula(args[0], env, consts, render)})"
        if hn in ("and", "or", "iff") and len(args) == 2:
            op = {"and": "&", "or": "|", "iff": "<=>"}[hn]
            a = _fof_formula(args[0], env, consts, render)
            b = _fof_formula(args[1], env, consts, render)
            return f"({a} {op} {b})"
        if hn.startswith("eq_") and len(args) == 2:
            if hn != "eq_i":
                raise NotFirstOrder("equality at a non-individual type", nt)
            a = _fof_term(args[0], env, consts, render)
            b = _fof_term(args[1], env, consts, render)
            return f"({a} = {b})"
        if hn.startswith("ex_") and len(args) == 1:
            if hn != "ex_i":
                raise NotFirstOrder("existential over a non-individual type", nt)
            body = beta_eta_local(args[0])
            if not isinstance(body, Lam):
                body = Lam(SET, App(_shift1(body), Var(0)), "x")
            v = _fof_var(env, body.hint)
            inner = _fof_formula(body.body, env + [v], consts, render)
            return f"(?[{v}]: {inner})"
        if _is_native(hn):
            raise NotFirstOrder(f"partially applied connective {hn}", nt)
        # ordinary predicate
        ty = consts.get(hn)
        if ty is None or not _fo_type_ok(ty):
            raise NotFirstOrder(f"predicate {hn} outside the fragment", nt)
        if _result_type(ty) != PROP or _arity(ty) != len(args):
            raise NotFirstOrder(f"predicate {hn} not fully applied", nt)
        rendered = [_fof_term(a, env, consts, render) for a in args]
        return _fof_app(hn, rendered)
    raise NotFirstOrder("formula head is not a constant", nt)


def _fof_term(t: Term, env: list[str], consts, render: bool = True) -> str:
    nt = beta_eta_local(t)
    if isinstance(nt, Var):
        return env[len(env) - 1 - nt.index]
    head, args = spine(nt)
    if isinstance(head, Var) and args:
        raise NotFirstOrder("variable applied to arguments", nt)
    if not isinstance(head, Const):
        raise NotFirstOrder("term is not first-order", nt)
    ty = consts.get(head.name)
    if ty is None or not _fo_type_ok(ty) or _result_type(ty) != SET:
        raise NotFirstOrder(f"function {head.name} outside the fragment", nt)
    if _arity(ty) != len(args):
        raise NotFirstOrder(f"function {head.name} partially applied", nt)
    rendered = [_fof_term(a, env, consts, render) for a in args]
    return _fof_app(head.name, rendered)


def _fof_app(name: str, args: list[str]) -> str:
    a = _atom(mangle(name))
    return a if not args else f"{a}({','.join(args)})"


def _arity(ty: SimpleType) -> int:
    n = 0
    while isinstance(ty, Arrow):
        n += 1
        ty = ty.cod
    return n


def _result_type(ty: SimpleType) -> SimpleType:
    while isinstance(ty, Arrow):
        ty = ty.cod
    return ty


def _shift1(t: Term) -> Term:
    from .kernel import shift
    return shift(t, 1)
