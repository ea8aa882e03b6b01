import pytest

from hammerforge.basis import bootstrap
from hammerforge.kernel import PROP, SET, Arrow, Context, alpha_eq, typecheck
from hammerforge.syntax import (
    ScriptSyntaxError,
    UnknownName,
    elab_term,
    ensure_eq,
    ensure_ex,
    eq_sides,
    parse_term_string,
    parse_type,
    term_str,
    tokenize,
    type_str,
    TokenStream,
)


@pytest.fixture(scope="module")
def sig():
    return bootstrap()


STATEMENTS = [
    "forall A:prop, A -> A",
    "forall A B:prop, A /\\ B -> B /\\ A",
    "forall x:set, ~In x Empty",
    "forall X Y:set, (forall z:set, In z X <-> In z Y) -> X = Y",
    "forall P:set -> prop, forall x:set, P x -> P (Eps P)",
    "exists x:set, In x (Power Empty)",
    "forall A B C:prop, A \\/ (B /\\ C) -> A \\/ B",
    "forall f:set -> set, forall x:set, f x = f x",
]


def test_parse_print_round_trip(sig):
    ctx = Context()
    for s in STATEMENTS:
        t = elab_term(sig, ctx, parse_term_string(s), PROP)
        printed = term_str(t)
        t2 = elab_term(sig, ctx, parse_term_string(printed), PROP)
        assert alpha_eq(t, t2), (s, printed)


def test_type_parsing_round_trip():
    for src, ty in [
        ("prop", PROP),
        ("set", SET),
        ("set -> prop", Arrow(SET, PROP)),
        ("(set -> set) -> prop", Arrow(Arrow(SET, SET), PROP)),
        ("set -> set -> prop", Arrow(SET, Arrow(SET, PROP))),
    ]:
        ts = TokenStream(tokenize(src))
        assert parse_type(ts) == ty
        ts2 = TokenStream(tokenize(type_str(ty)))
        assert parse_type(ts2) == ty


def test_conjunction_is_left_associative(sig):
    a = elab_term(sig, Context(), parse_term_string("forall A B C:prop, A /\\ B /\\ C -> A"), PROP)
    b = elab_term(sig, Context(), parse_term_string("forall A B C:prop, (A /\\ B) /\\ C -> A"), PROP)
    assert alpha_eq(a, b)


def test_implication_is_right_associative(sig):
    a = elab_term(sig, Context(), parse_term_string("forall A B C:prop, A -> B -> C"), PROP)
    b = elab_term(sig, Context(), parse_term_string("forall A B C:prop, A -> (B -> C)"), PROP)
    assert alpha_eq(a, b)


def test_unknown_name_reports_position(sig):
    with pytest.raises(UnknownName) as ei:
        elab_term(sig, Context(), parse_term_string("In x Empty"), PROP)
    assert "x" in str(ei.value)


def test_unbalanced_parens_rejected():
    with pytest.raises(ScriptSyntaxError):
        parse_term_string("forall A:prop, (A -> A")


def test_eq_sides_recognizes_tagged_equality(sig):
    s = sig.copy()
    ensure_eq(s, SET)
    t = elab_term(s, Context(), parse_term_string("Empty = Power Empty"), PROP)
    got = eq_sides(s, t)
    assert got is not None
    name, lhs, rhs = got
    assert name == "eq_i"
    assert typecheck(s, Context(), lhs) == SET


def test_ensure_eq_and_ex_are_idempotent(sig):
    s = sig.copy()
    n0 = len(s.entries)
    ensure_eq(s, SET)
    ensure_ex(s, SET)
    n1 = len(s.entries)
    ensure_eq(s, SET)
    ensure_ex(s, SET)
    assert len(s.entries) == n1
    # set-level eq and ex ship with the basis, so nothing was added
    assert n1 == n0


def test_ensure_eq_adds_new_function_tags(sig):
    s = sig.copy()
    n0 = len(s.entries)
    ensure_eq(s, Arrow(SET, Arrow(SET, SET)))
    assert len(s.entries) == n0 + 1
