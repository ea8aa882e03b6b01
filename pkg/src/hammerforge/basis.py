"""Bootstrap signature: set-theory primitives, axioms, the impredicative
connectives and the first theorems up to excluded middle."""

from __future__ import annotations

from dataclasses import dataclass

from .kernel import (
    PROP, SET, Arrow, AxiomEntry, Const, Context, DefEntry, KernelError,
    Prim, Signature, ThmEntry, arrow, check_proof,
)
from .syntax import elab_proof, elab_term, eq_def, ex_def, parse_term_string


class NoXm(KernelError):
    pass


class MissingXmProof(KernelError):
    pass


XM_NAME = "xm"

PRIM_NAMES = ["Eps", "In", "Empty", "Union", "Power", "Repl", "UnivOf"]
CONNECTIVE_NAMES = ["True", "False", "not", "and", "or", "iff",
                    "eq_i", "ex_i", "eq_o"]
AXIOM_NAMES = ["choice", "set_ext", "In_ind", "EmptyAx", "UnionEq", "PowerEq",
               "ReplEq", "UnivOfIn", "UnivOfUniv", "UnivOfMin",
               "prop_ext", "func_ext"]


@dataclass(frozen=True)
class BasisManifest:
    prim_names: tuple[str, ...]
    axiom_names: tuple[str, ...]
    connective_defs: tuple[str, ...]
    xm_name: str


MANIFEST = BasisManifest(tuple(PRIM_NAMES), tuple(AXIOM_NAMES),
                         tuple(CONNECTIVE_NAMES), XM_NAME)


def _def(sig: Signature, name: str, ty_src: str, body_src: str) -> None:
    from .syntax import parse_type, TokenStream, tokenize
    ts = TokenStream(tokenize(ty_src))
    ty = parse_type(ts)
    body = elab_term(sig, Context(), parse_term_string(body_src), ty)
    sig.add(DefEntry(name, ty, body))


def _axiom(sig: Signature, name: str, src: str) -> None:
    prop = elab_term(sig, Context(), parse_term_string(src), PROP)
    sig.add(AxiomEntry(name, prop))


def _thm(sig: Signature, name: str, prop_src: str, proof_src: str) -> None:
    prop = elab_term(sig, Context(), parse_term_string(prop_src), PROP)
    proof = elab_proof(sig, Context(), parse_term_string(proof_src), prop)
    report = check_proof(sig, Context(), proof, prop)
    assert report.hole_free
    sig.add(ThmEntry(name, prop, proof))


def bootstrap(require_xm_proof: bool = False) -> Signature:
    """The basis development: primitives, connectives, axioms and the first
    theorems, ending with excluded middle `xm`.

    `xm` ships as a trusted entry (the Diaconescu construction is not part
    of this artifact); with require_xm_proof=True that is a hard error."""
    if require_xm_proof:
        raise MissingXmProof("no checked proof of excluded middle is bundled")

    sig = Signature()
    sig.add(Prim("Eps", arrow(Arrow(SET, PROP), SET)))
    sig.add(Prim("In", arrow(SET, SET, PROP)))
    sig.add(Prim("Empty", SET))
    sig.add(Prim("Union", arrow(SET, SET)))
    sig.add(Prim("Power", arrow(SET, SET)))
    sig.add(Prim("Repl", arrow(SET, Arrow(SET, SET), SET)))
    sig.add(Prim("UnivOf", arrow(SET, SET)))

    # impredicative connectives
    _def(sig, "True", "prop", "forall p:prop, p -> p")
    _def(sig, "False", "prop", "forall p:prop, p")
    _def(sig, "not", "prop -> prop", "fun A:prop. A -> False")
    _def(sig, "and", "prop -> prop -> prop",
         "fun A B:prop. forall p:prop, (A -> B -> p) -> p")
    _def(sig, "or", "prop -> prop -> prop",
         "fun A B:prop. forall p:prop, (A -> p) -> (B -> p) -> p")
    _def(sig, "iff", "prop -> prop -> prop", "fun A B:prop. and (A -> B) (B -> A)")
    sig.add(eq_def(SET))      # eq_i
    sig.add(ex_def(SET))      # ex_i
    sig.add(eq_def(PROP))     # eq_o, for propositional extensionality

    # auxiliary set notions used by the universe axioms
    _def(sig, "TransSet", "set -> prop",
         "fun X:set. forall x:set, In x X -> forall y:set, In y x -> In y X")
    _def(sig, "Univ", "set -> prop",
         "fun U:set. TransSet U /\\ (forall x:set, In x U ->"
         " In (Union x) U /\\ In (Power x) U /\\"
         " (forall f:set -> set, (forall y:set, In y x -> In (f y) U)"
         " -> In (Repl x f) U))")

    # axioms
    _axiom(sig, "choice", "forall P:set -> prop, forall x:set, P x -> P (Eps P)")
    _axiom(sig, "set_ext",
           "forall X Y:set, (forall z:set, In z X <-> In z Y) -> X = Y")
    _axiom(sig, "In_ind",
           "forall P:set -> prop,"
           " (forall x:set, (forall y:set, In y x -> P y) -> P x)"
           " -> forall x:set, P x")
    _axiom(sig, "EmptyAx", "forall x:set, ~ In x Empty")
    _axiom(sig, "UnionEq",
           "forall X z:set, In z (Union X) <-> (exists Y:set, In z Y /\\ In Y X)")
    _axiom(sig, "PowerEq",
           "forall X z:set, In z (Power X) <-> (forall y:set, In y z -> In y X)")
    _axiom(sig, "ReplEq",
           "forall X:set, forall f:set -> set, forall z:set,"
           " In z (Repl X f) <-> (exists y:set, In y X /\\ z = f y)")
    _axiom(sig, "UnivOfIn", "forall X:set, In X (UnivOf X)")
    _axiom(sig, "UnivOfUniv", "forall X:set, Univ (UnivOf X)")
    _axiom(sig, "UnivOfMin",
           "forall X U:set, In X U -> Univ U ->"
           " forall z:set, In z (UnivOf X) -> In z U")
    _axiom(sig, "prop_ext", "forall A B:prop, (A <-> B) -> A = B")
    _axiom(sig, "func_ext",
           "forall f g:set -> set, (forall x:set, f x = g x) -> f = g")

    # first theorems
    _thm(sig, "andI", "forall A B:prop, A -> B -> A /\\ B",
         "fun A B a b p H. H a b")
    _thm(sig, "andEL", "forall A B:prop, A /\\ B -> A",
         "fun A B H. H A (fun a b. a)")
    _thm(sig, "andER", "forall A B:prop, A /\\ B -> B",
         "fun A B H. H B (fun a b. b)")
    _thm(sig, "orIL", "forall A B:prop, A -> A \\/ B",
         "fun A B a p HA HB. HA a")
    _thm(sig, "orIR", "forall A B:prop, B -> A \\/ B",
         "fun A B b p HA HB. HB b")

    # excluded middle: trusted fixture entry (Diaconescu proof not bundled)
    xm_prop = elab_term(sig, Context(), parse_term_string("forall p:prop, p \\/ ~p"), PROP)
    sig.add(ThmEntry(XM_NAME, xm_prop, None, trusted=True))

    # classical double negation, derived from xm
    _thm(sig, "dneg", "forall p:prop, ~~p -> p",
         "fun p H. xm p p (fun a. a) (fun n. H n p)")
    return sig


def classical_frontier(sig: Signature) -> int:
    """Index of the excluded-middle theorem; hammer problem generation is
    only permitted for goals arising strictly after this point."""
    if XM_NAME not in sig:
        raise NoXm("signature has no excluded-middle theorem")
    return sig.index_of(XM_NAME)


def signature_listing(sig: Signature) -> str:
    """Human-readable one-entry-per-line rendering of a signature."""
    from .syntax import term_str, type_str
    lines = []
    for e in sig.entries:
        if isinstance(e, Prim):
            lines.append(f"Prim {e.name} : {type_str(e.ty)}")
        elif isinstance(e, DefEntry):
            lines.append(f"Def {e.name} : {type_str(e.ty)} := {term_str(e.definiens)}")
        elif isinstance(e, AxiomEntry):
            lines.append(f"Axiom {e.name} : {term_str(e.prop)}")
        else:
            tag = "Thm!" if e.trusted else "Thm"
            lines.append(f"{tag} {e.name} : {term_str(e.prop)}")
    return "\n".join(lines) + "\n"
