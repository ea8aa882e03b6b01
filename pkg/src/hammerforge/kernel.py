"""Core calculus: simple types, de Bruijn terms, conversion and proof checking.

Terms use de Bruijn indices for bound variables; binder display names are
kept as non-comparing annotations, so structural equality of terms *is*
alpha-equivalence.  All values here are immutable and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


# ---------------------------------------------------------------------------
# errors

class KernelError(Exception):
    pass


class UnknownConst(KernelError):
    pass


class TypeMismatch(KernelError):
    def __init__(self, expected, actual, where=""):
        super().__init__(f"type mismatch{': ' + where if where else ''}: "
                         f"expected {expected}, got {actual}")
        self.expected = expected
        self.actual = actual


class NonPropQuantBody(KernelError):
    pass


class UnknownHyp(KernelError):
    pass


class UnknownTheorem(KernelError):
    pass


class PropMismatch(KernelError):
    pass


class IllTypedInstantiation(KernelError):
    pass


class DuplicateName(KernelError):
    pass


# ---------------------------------------------------------------------------
# simple types

@dataclass(frozen=True, slots=True)
class PropType:
    def __repr__(self):
        return "prop"


@dataclass(frozen=True, slots=True)
class SetType:
    def __repr__(self):
        return "set"


@dataclass(frozen=True, slots=True)
class Arrow:
    dom: "SimpleType"
    cod: "SimpleType"

    def __repr__(self):
        d = f"({self.dom!r})" if isinstance(self.dom, Arrow) else repr(self.dom)
        return f"{d} -> {self.cod!r}"


SimpleType = Union[PropType, SetType, Arrow]

PROP = PropType()
SET = SetType()


def arrow(*tys: SimpleType) -> SimpleType:
    """Right-nested arrow: arrow(a, b, c) == a -> (b -> c)."""
    t = tys[-1]
    for d in reversed(tys[:-1]):
        t = Arrow(d, t)
    return t


# ---------------------------------------------------------------------------
# terms

@dataclass(frozen=True, slots=True)
class Const:
    name: str


@dataclass(frozen=True, slots=True)
class Var:
    index: int


@dataclass(frozen=True, slots=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class Lam:
    var_ty: SimpleType
    body: "Term"
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True, slots=True)
class Imp:
    antecedent: "Term"
    consequent: "Term"


@dataclass(frozen=True, slots=True)
class All:
    var_ty: SimpleType
    body: "Term"
    hint: str = field(default="x", compare=False)


Term = Union[Const, Var, App, Lam, Imp, All]


def alpha_eq(t: Term, u: Term) -> bool:
    """Identity up to bound-variable naming (structural on de Bruijn form)."""
    return t == u


def apps(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def spine(t: Term) -> tuple[Term, list[Term]]:
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    if isinstance(t, Var):
        return Var(t.index + d) if t.index >= cutoff else t
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        return App(shift(t.fn, d, cutoff), shift(t.arg, d, cutoff))
    if isinstance(t, Imp):
        return Imp(shift(t.antecedent, d, cutoff), shift(t.consequent, d, cutoff))
    if isinstance(t, Lam):
        return Lam(t.var_ty, shift(t.body, d, cutoff + 1), t.hint)
    if isinstance(t, All):
        return All(t.var_ty, shift(t.body, d, cutoff + 1), t.hint)
    raise TypeError(t)


def subst(t: Term, j: int, u: Term) -> Term:
    """Substitute u for Var(j) in t and remove the binder level j."""
    if isinstance(t, Var):
        if t.index == j:
            return shift(u, j)
        return Var(t.index - 1) if t.index > j else t
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        return App(subst(t.fn, j, u), subst(t.arg, j, u))
    if isinstance(t, Imp):
        return Imp(subst(t.antecedent, j, u), subst(t.consequent, j, u))
    if isinstance(t, Lam):
        return Lam(t.var_ty, subst(t.body, j + 1, u), t.hint)
    if isinstance(t, All):
        return All(t.var_ty, subst(t.body, j + 1, u), t.hint)
    raise TypeError(t)


def instantiate(body: Term, arg: Term) -> Term:
    return subst(body, 0, arg)


def free_in(t: Term, k: int) -> bool:
    if isinstance(t, Var):
        return t.index == k
    if isinstance(t, Const):
        return False
    if isinstance(t, App):
        return free_in(t.fn, k) or free_in(t.arg, k)
    if isinstance(t, Imp):
        return free_in(t.antecedent, k) or free_in(t.consequent, k)
    if isinstance(t, (Lam, All)):
        return free_in(t.body, k + 1)
    raise TypeError(t)


def const_names(t: Term) -> Iterator[str]:
    if isinstance(t, Const):
        yield t.name
    elif isinstance(t, App):
        yield from const_names(t.fn)
        yield from const_names(t.arg)
    elif isinstance(t, Imp):
        yield from const_names(t.antecedent)
        yield from const_names(t.consequent)
    elif isinstance(t, (Lam, All)):
        yield from const_names(t.body)


# ---------------------------------------------------------------------------
# proof terms

@dataclass(frozen=True, slots=True)
class Hyp:
    name: str


@dataclass(frozen=True, slots=True)
class Known:
    name: str


@dataclass(frozen=True, slots=True)
class TApp:
    proof: "ProofTerm"
    term: Term


@dataclass(frozen=True, slots=True)
class PApp:
    proof: "ProofTerm"
    arg: "ProofTerm"


@dataclass(frozen=True, slots=True)
class TLam:
    name: str
    var_ty: SimpleType
    body: "ProofTerm"


@dataclass(frozen=True, slots=True)
class PLam:
    hyp_name: str
    prop: Optional[Term]
    body: "ProofTerm"


@dataclass(frozen=True, slots=True)
class AbyHole:
    problem_id: str
    deps: tuple[str, ...]


ProofTerm = Union[Hyp, Known, TApp, PApp, TLam, PLam, AbyHole]


def papps(head: ProofTerm, *args: ProofTerm) -> ProofTerm:
    for a in args:
        head = PApp(head, a)
    return head


# ---------------------------------------------------------------------------
# signature

@dataclass(frozen=True, slots=True)
class Prim:
    name: str
    ty: SimpleType


@dataclass(frozen=True, slots=True)
class AxiomEntry:
    name: str
    prop: Term


@dataclass(frozen=True, slots=True)
class DefEntry:
    name: str
    ty: SimpleType
    definiens: Term


@dataclass(frozen=True, slots=True)
class ThmEntry:
    name: str
    prop: Term
    proof: Optional[ProofTerm]   # None marks an ATP-trusted entry
    trusted: bool = False


SigEntry = Union[Prim, AxiomEntry, DefEntry, ThmEntry]


class Signature:
    """Ordered sequence of declarations; each entry may only reference
    earlier ones.  Appending validates well-formedness."""

    def __init__(self):
        self.entries: list[SigEntry] = []
        self._index: dict[str, int] = {}

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, name: str) -> SigEntry:
        i = self._index.get(name)
        if i is None:
            raise UnknownConst(name)
        return self.entries[i]

    def index_of(self, name: str) -> int:
        i = self._index.get(name)
        if i is None:
            raise UnknownConst(name)
        return i

    def const_type(self, name: str) -> SimpleType:
        e = self.lookup(name)
        if isinstance(e, Prim):
            return e.ty
        if isinstance(e, DefEntry):
            return e.ty
        raise UnknownConst(f"{name} is not a term constant")

    def definiens(self, name: str) -> Optional[Term]:
        e = self._index.get(name)
        if e is None:
            return None
        entry = self.entries[e]
        return entry.definiens if isinstance(entry, DefEntry) else None

    def prop_of(self, name: str) -> Term:
        e = self.lookup(name)
        if isinstance(e, AxiomEntry):
            return e.prop
        if isinstance(e, ThmEntry):
            return e.prop
        raise UnknownTheorem(name)

    def def_names(self) -> frozenset[str]:
        return frozenset(e.name for e in self.entries if isinstance(e, DefEntry))

    def add(self, entry: SigEntry, *, validate: bool = True) -> None:
        if entry.name in self._index:
            raise DuplicateName(entry.name)
        if validate:
            if isinstance(entry, DefEntry):
                ty = typecheck(self, Context(), entry.definiens)
                if ty != entry.ty:
                    raise TypeMismatch(entry.ty, ty, f"definiens of {entry.name}")
            elif isinstance(entry, (AxiomEntry, ThmEntry)):
                ty = typecheck(self, Context(), entry.prop)
                if ty != PROP:
                    raise TypeMismatch(PROP, ty, f"statement of {entry.name}")
        self._index[entry.name] = len(self.entries)
        self.entries.append(entry)

    def truncate(self, length: int) -> None:
        """Drop entries from position `length` on (used by incremental checking)."""
        for e in self.entries[length:]:
            del self._index[e.name]
        del self.entries[length:]

    def copy(self) -> "Signature":
        s = Signature.__new__(Signature)
        s.entries = list(self.entries)
        s._index = dict(self._index)
        return s


# ---------------------------------------------------------------------------
# contexts

@dataclass(frozen=True)
class Context:
    """Typed variables (innermost last; Var(0) is the last one) and named
    hypotheses.  Hypothesis props are stated over the vars in scope when the
    hypothesis was added; `depth` records how many vars that was."""
    vars: tuple[tuple[str, SimpleType], ...] = ()
    hyps: tuple[tuple[str, Term, int], ...] = ()

    @property
    def depth(self) -> int:
        return len(self.vars)

    def push_var(self, name: str, ty: SimpleType) -> "Context":
        return Context(self.vars + ((name, ty),), self.hyps)

    def push_hyp(self, name: str, prop: Term) -> "Context":
        return Context(self.vars, self.hyps + ((name, prop, self.depth),))

    def var_type(self, index: int) -> SimpleType:
        return self.vars[len(self.vars) - 1 - index][1]

    def hyp_prop(self, name: str) -> Term:
        for hname, prop, depth in reversed(self.hyps):
            if hname == name:
                return shift(prop, self.depth - depth)
        raise UnknownHyp(name)

    def has_hyp(self, name: str) -> bool:
        return any(h[0] == name for h in self.hyps)

    def var_index(self, name: str) -> Optional[int]:
        for i, (vname, _) in enumerate(reversed(self.vars)):
            if vname == name:
                return i
        return None


# ---------------------------------------------------------------------------
# typechecking

def typecheck(sig: Signature, ctx: Context, t: Term) -> SimpleType:
    return _tc(sig, ctx, [ty for _, ty in ctx.vars], t)


def _tc(sig, ctx, stack: list[SimpleType], t: Term) -> SimpleType:
    if isinstance(t, Var):
        if t.index >= len(stack):
            raise UnknownConst(f"unbound variable index {t.index}")
        return stack[len(stack) - 1 - t.index]
    if isinstance(t, Const):
        return sig.const_type(t.name)
    if isinstance(t, App):
        fty = _tc(sig, ctx, stack, t.fn)
        if not isinstance(fty, Arrow):
            raise TypeMismatch("a function type", fty, "in application")
        aty = _tc(sig, ctx, stack, t.arg)
        if aty != fty.dom:
            raise TypeMismatch(fty.dom, aty, "function argument")
        return fty.cod
    if isinstance(t, Lam):
        stack.append(t.var_ty)
        bty = _tc(sig, ctx, stack, t.body)
        stack.pop()
        return Arrow(t.var_ty, bty)
    if isinstance(t, Imp):
        for side in (t.antecedent, t.consequent):
            ty = _tc(sig, ctx, stack, side)
            if ty != PROP:
                raise NonPropQuantBody(f"implication side has type {ty}")
        return PROP
    if isinstance(t, All):
        stack.append(t.var_ty)
        bty = _tc(sig, ctx, stack, t.body)
        stack.pop()
        if bty != PROP:
            raise NonPropQuantBody(f"quantifier body has type {bty}")
        return PROP
    raise TypeError(t)


# ---------------------------------------------------------------------------
# normalization

def normalize(sig: Signature, t: Term, unfold: frozenset[str] | set[str] = frozenset()) -> Term:
    """Beta-normal, eta-contracted form, with constants in `unfold` replaced
    by their definientia.  Raises UnknownConst if an unfold name is not a Def."""
    for name in unfold:
        if sig.definiens(name) is None:
            raise UnknownConst(f"{name} is not a definition")
    return _nf(sig, t, frozenset(unfold))


def _nf(sig, t: Term, unfold: frozenset[str]) -> Term:
    if isinstance(t, Var):
        return t
    if isinstance(t, Const):
        if t.name in unfold:
            d = sig.definiens(t.name)
            return _nf(sig, d, unfold)
        return t
    if isinstance(t, App):
        f = _nf(sig, t.fn, unfold)
        a = _nf(sig, t.arg, unfold)
        if isinstance(f, Lam):
            return _nf(sig, instantiate(f.body, a), unfold)
        return App(f, a)
    if isinstance(t, Imp):
        return Imp(_nf(sig, t.antecedent, unfold), _nf(sig, t.consequent, unfold))
    if isinstance(t, All):
        return All(t.var_ty, _nf(sig, t.body, unfold), t.hint)
    if isinstance(t, Lam):
        body = _nf(sig, t.body, unfold)
        # eta: \x. f x  ~>  f   when x not free in f
        if isinstance(body, App) and body.arg == Var(0) and not free_in(body.fn, 0):
            return shift(body.fn, -1)
        return Lam(t.var_ty, body, t.hint)
    raise TypeError(t)


def beta_eta(sig: Signature, t: Term) -> Term:
    return _nf(sig, t, frozenset())


def delta_normalize(sig: Signature, t: Term) -> Term:
    """Normal form with every definition unfolded."""
    return _nf(sig, t, sig.def_names())


def convertible(sig: Signature, a: Term, b: Term) -> bool:
    """Beta-eta conversion; definitions unfolded only when the head-on
    comparison fails."""
    na, nb = beta_eta(sig, a), beta_eta(sig, b)
    if na == nb:
        return True
    return delta_normalize(sig, na) == delta_normalize(sig, nb)


def head_normal(sig: Signature, t: Term, shape) -> Term:
    """Normalize until t matches `shape` (a term class or tuple of them),
    unfolding the head constant lazily, one definition at a time."""
    n = beta_eta(sig, t)
    while not isinstance(n, shape):
        head, args = spine(n)
        if not isinstance(head, Const):
            break
        d = sig.definiens(head.name)
        if d is None:
            break
        n = beta_eta(sig, apps(d, *args))
    return n


# ---------------------------------------------------------------------------
# matching (first-order syntactic, for the apply tactic)

class NoMatch:
    """Sentinel result: the pattern does not match, or needs higher-order
    instantiation the matcher deliberately refuses to guess."""
    def __init__(self, reason: str = ""):
        self.reason = reason

    def __repr__(self):
        return f"NoMatch({self.reason!r})"


def match_conclusion(sig: Signature, metavars: dict[str, SimpleType],
                     pattern: Term, goal: Term):
    """Match `pattern` (containing Const metavariables) against `goal`.

    Matching is first-order: a metavariable applied to arguments yields
    NoMatch.  Returns a substitution dict name -> Term, or NoMatch."""
    p = beta_eta(sig, pattern)
    g = beta_eta(sig, goal)
    sub: dict[str, Term] = {}
    r = _match(metavars, p, g, 0, sub)
    if r is not None:
        return r
    # retry after unfolding definitions on both sides (metavar consts are
    # not definitions, so they survive delta normalization)
    p2 = delta_normalize(sig, p)
    g2 = delta_normalize(sig, g)
    sub = {}
    r = _match(metavars, p2, g2, 0, sub)
    return r if r is not None else NoMatch("structural mismatch")


def _match(metavars, p: Term, g: Term, depth: int, sub: dict):
    if isinstance(p, Const) and p.name in metavars:
        if _has_free_below(g, depth):
            return None
        g0 = shift(g, -depth) if depth else g
        if p.name in sub:
            return sub if sub[p.name] == g0 else None
        sub[p.name] = g0
        return sub
    if isinstance(p, App):
        head, _ = spine(p)
        if isinstance(head, Const) and head.name in metavars:
            return None  # higher-order pattern: refuse to guess
        if not isinstance(g, App):
            return None
        if _match(metavars, p.fn, g.fn, depth, sub) is None:
            return None
        return _match(metavars, p.arg, g.arg, depth, sub)
    if isinstance(p, Const):
        return sub if isinstance(g, Const) and g.name == p.name else None
    if isinstance(p, Var):
        return sub if isinstance(g, Var) and g.index == p.index else None
    if isinstance(p, Imp):
        if not isinstance(g, Imp):
            return None
        if _match(metavars, p.antecedent, g.antecedent, depth, sub) is None:
            return None
        return _match(metavars, p.consequent, g.consequent, depth, sub)
    if isinstance(p, (Lam, All)):
        if type(g) is not type(p) or p.var_ty != g.var_ty:
            return None
        return _match(metavars, p.body, g.body, depth + 1, sub)
    raise TypeError(p)


def _has_free_below(t: Term, depth: int, cutoff: int = 0) -> bool:
    if depth == 0:
        return False
    if isinstance(t, Var):
        return cutoff <= t.index < cutoff + depth
    if isinstance(t, Const):
        return False
    if isinstance(t, App):
        return _has_free_below(t.fn, depth, cutoff) or _has_free_below(t.arg, depth, cutoff)
    if isinstance(t, Imp):
        return (_has_free_below(t.antecedent, depth, cutoff)
                or _has_free_below(t.consequent, depth, cutoff))
    if isinstance(t, (Lam, All)):
        return _has_free_below(t.body, depth, cutoff + 1)
    raise TypeError(t)


def subst_metavars(t: Term, sub: dict[str, Term], depth: int = 0) -> Term:
    if isinstance(t, Const):
        if t.name in sub:
            return shift(sub[t.name], depth)
        return t
    if isinstance(t, Var):
        return t
    if isinstance(t, App):
        return App(subst_metavars(t.fn, sub, depth), subst_metavars(t.arg, sub, depth))
    if isinstance(t, Imp):
        return Imp(subst_metavars(t.antecedent, sub, depth),
                   subst_metavars(t.consequent, sub, depth))
    if isinstance(t, Lam):
        return Lam(t.var_ty, subst_metavars(t.body, sub, depth + 1), t.hint)
    if isinstance(t, All):
        return All(t.var_ty, subst_metavars(t.body, sub, depth + 1), t.hint)
    raise TypeError(t)


# ---------------------------------------------------------------------------
# proof checking

@dataclass(frozen=True)
class Obligation:
    problem_id: str
    deps: tuple[str, ...]
    prop: Term


@dataclass
class CheckReport:
    holes: list[Obligation]

    @property
    def hole_free(self) -> bool:
        return not self.holes


def check_proof(sig: Signature, ctx: Context, d: ProofTerm, claimed: Term) -> CheckReport:
    """Check that d proves `claimed`.  Raises a KernelError on failure;
    on success returns the AbyHole obligations encountered."""
    holes: list[Obligation] = []
    _check(sig, ctx, d, claimed, holes)
    return CheckReport(holes)


def _check(sig, ctx: Context, d: ProofTerm, goal: Term, holes) -> None:
    if isinstance(d, TLam):
        g = head_normal(sig, goal, All)
        if not isinstance(g, All):
            raise PropMismatch(f"proof introduces a variable but goal is not universal: {goal}")
        if d.var_ty != g.var_ty:
            raise IllTypedInstantiation(
                f"binder type {d.var_ty} does not match quantifier type {g.var_ty}")
        _check(sig, ctx.push_var(d.name, d.var_ty), d.body, g.body, holes)
        return
    if isinstance(d, PLam):
        g = head_normal(sig, goal, Imp)
        if not isinstance(g, Imp):
            raise PropMismatch(f"proof assumes a hypothesis but goal is not an implication: {goal}")
        if d.prop is not None and not convertible(sig, d.prop, g.antecedent):
            raise PropMismatch(f"annotated hypothesis {d.prop} differs from antecedent")
        _check(sig, ctx.push_hyp(d.hyp_name, g.antecedent), d.body, g.consequent, holes)
        return
    if isinstance(d, AbyHole):
        holes.append(Obligation(d.problem_id, d.deps, goal))
        return
    prop = _synth(sig, ctx, d, holes)
    if not convertible(sig, prop, goal):
        raise PropMismatch(f"proved {prop}, wanted {goal}")


def _synth(sig, ctx: Context, d: ProofTerm, holes) -> Term:
    if isinstance(d, Hyp):
        return ctx.hyp_prop(d.name)
    if isinstance(d, Known):
        return sig.prop_of(d.name)
    if isinstance(d, TApp):
        p = _synth(sig, ctx, d.proof, holes)
        p = head_normal(sig, p, All)
        if not isinstance(p, All):
            raise PropMismatch(f"term applied to non-universal proposition {p}")
        ty = typecheck(sig, ctx, d.term)
        if ty != p.var_ty:
            raise IllTypedInstantiation(f"instantiated {p.var_ty} with a {ty}")
        return instantiate(p.body, d.term)
    if isinstance(d, PApp):
        p = _synth(sig, ctx, d.proof, holes)
        p = head_normal(sig, p, Imp)
        if not isinstance(p, Imp):
            raise PropMismatch(f"proof applied to non-implication {p}")
        _check(sig, ctx, d.arg, p.antecedent, holes)
        return p.consequent
    if isinstance(d, TLam):
        body = _synth(sig, ctx.push_var(d.name, d.var_ty), d.body, holes)
        return All(d.var_ty, body, d.name)
    if isinstance(d, PLam):
        if d.prop is None:
            raise PropMismatch("cannot synthesize an unannotated assumption")
        ty = typecheck(sig, ctx, d.prop)
        if ty != PROP:
            raise TypeMismatch(PROP, ty, "hypothesis annotation")
        body = _synth(sig, ctx.push_hyp(d.hyp_name, d.prop), d.body, holes)
        return Imp(d.prop, body)
    if isinstance(d, AbyHole):
        raise PropMismatch("aby hole in synthesizing position")
    raise TypeError(d)


# ---------------------------------------------------------------------------
# dependency extraction

def proof_deps(pt: ProofTerm) -> tuple[list[str], list[str]]:
    """Free names of a proof term: (globals in first-use order, hypothesis
    names in first-use order).  Globals include theorem/axiom names and the
    constants occurring in embedded terms."""
    globals_: list[str] = []
    hyps: list[str] = []
    seen_g: set[str] = set()
    seen_h: set[str] = set()

    def add_g(n):
        if n not in seen_g:
            seen_g.add(n)
            globals_.append(n)

    def add_term(t: Term):
        for n in const_names(t):
            add_g(n)

    def walk(p: ProofTerm, bound: frozenset[str]):
        if isinstance(p, Hyp):
            if p.name not in bound and p.name not in seen_h:
                seen_h.add(p.name)
                hyps.append(p.name)
        elif isinstance(p, Known):
            add_g(p.name)
        elif isinstance(p, TApp):
            walk(p.proof, bound)
            add_term(p.term)
        elif isinstance(p, PApp):
            walk(p.proof, bound)
            walk(p.arg, bound)
        elif isinstance(p, TLam):
            walk(p.body, bound)
        elif isinstance(p, PLam):
            if p.prop is not None:
                add_term(p.prop)
            walk(p.body, bound | {p.hyp_name})
        elif isinstance(p, AbyHole):
            for n in p.deps:
                # aby dependencies may be globals or hypotheses; classified
                # by the caller, recorded here as globals unless shadowed
                if n in bound:
                    continue
                add_g(n)

    walk(pt, frozenset())
    return globals_, hyps


def restrict_signature(sig: Signature, keep: set[str]) -> Signature:
    """Signature restricted to `keep`, every primitive, and whatever earlier
    entries are needed to keep the kept entries well-formed."""
    needed = set(keep)
    for e in sig.entries:
        if isinstance(e, Prim):
            needed.add(e.name)
    changed = True
    while changed:
        changed = False
        for e in sig.entries:
            if e.name not in needed:
                continue
            refs: set[str] = set()
            if isinstance(e, DefEntry):
                refs = set(const_names(e.definiens))
            elif isinstance(e, (AxiomEntry, ThmEntry)):
                refs = set(const_names(e.prop))
            new = refs - needed
            if new:
                needed |= new
                changed = True
    out = Signature()
    for e in sig.entries:
        if e.name in needed:
            out.add(e, validate=False)
    return out
