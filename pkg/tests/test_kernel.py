import random

import pytest

from termgen import context_for, random_term, random_type, scramble_hints

from hammerforge.basis import bootstrap
from hammerforge.kernel import (
    PROP,
    SET,
    All,
    App,
    Arrow,
    Const,
    Context,
    Hyp,
    Imp,
    KernelError,
    Known,
    Lam,
    NoMatch,
    PApp,
    PLam,
    Prim,
    Signature,
    TApp,
    TLam,
    Var,
    alpha_eq,
    check_proof,
    convertible,
    head_normal,
    instantiate,
    match_conclusion,
    normalize,
    proof_deps,
    shift,
    subst,
    subst_metavars,
    typecheck,
)


@pytest.fixture(scope="module")
def sig():
    return bootstrap()


def and_intro_claim():
    # forall A B: prop, A -> B -> and A B
    body = Imp(Var(1), Imp(Var(0), App(App(Const("and"), Var(1)), Var(0))))
    return All(PROP, All(PROP, body, hint="B"), hint="A")


def and_intro_proof():
    inner = PApp(PApp(Hyp("H"), Hyp("a")), Hyp("b"))
    h_ty = Imp(Var(2), Imp(Var(1), Var(0)))
    return TLam(
        "A",
        PROP,
        TLam(
            "B",
            PROP,
            PLam(
                "a",
                Var(1),
                PLam(
                    "b",
                    Var(0),
                    TLam("p", PROP, PLam("H", h_ty, inner)),
                ),
            ),
        ),
    )


class TestAndIntroFixture:
    def test_checks_against_impredicative_conjunction(self, sig):
        report = check_proof(sig, Context(), and_intro_proof(), and_intro_claim())
        assert list(report.holes) == []

    def mutants(self):
        def with_body(inner):
            h_ty = Imp(Var(2), Imp(Var(1), Var(0)))
            return TLam(
                "A",
                PROP,
                TLam(
                    "B",
                    PROP,
                    PLam(
                        "a",
                        Var(1),
                        PLam("b", Var(0), TLam("p", PROP, PLam("H", h_ty, inner))),
                    ),
                ),
            )

        good = and_intro_proof()
        yield with_body(PApp(PApp(Hyp("H"), Hyp("b")), Hyp("a")))
        yield with_body(PApp(PApp(Hyp("H"), Hyp("a")), Hyp("a")))
        yield with_body(PApp(Hyp("H"), Hyp("a")))
        yield with_body(Hyp("a"))
        yield with_body(PApp(PApp(PApp(Hyp("H"), Hyp("a")), Hyp("b")), Hyp("a")))
        yield with_body(PApp(PApp(Hyp("H"), Hyp("a")), Hyp("c")))
        # a annotated with B instead of A
        yield TLam(
            "A",
            PROP,
            TLam(
                "B",
                PROP,
                PLam(
                    "a",
                    Var(0),
                    PLam(
                        "b",
                        Var(0),
                        TLam(
                            "p",
                            PROP,
                            PLam(
                                "H",
                                Imp(Var(2), Imp(Var(1), Var(0))),
                                PApp(PApp(Hyp("H"), Hyp("a")), Hyp("b")),
                            ),
                        ),
                    ),
                ),
            ),
        )
        # p quantified over sets
        yield TLam(
            "A",
            PROP,
            TLam(
                "B",
                PROP,
                PLam(
                    "a",
                    Var(1),
                    PLam(
                        "b",
                        Var(0),
                        TLam(
                            "p",
                            SET,
                            PLam(
                                "H",
                                Imp(Var(2), Imp(Var(1), Var(0))),
                                PApp(PApp(Hyp("H"), Hyp("a")), Hyp("b")),
                            ),
                        ),
                    ),
                ),
            ),
        )
        # H typed with the wrong conclusion
        yield TLam(
            "A",
            PROP,
            TLam(
                "B",
                PROP,
                PLam(
                    "a",
                    Var(1),
                    PLam(
                        "b",
                        Var(0),
                        TLam(
                            "p",
                            PROP,
                            PLam(
                                "H",
                                Imp(Var(2), Var(0)),
                                PApp(PApp(Hyp("H"), Hyp("a")), Hyp("b")),
                            ),
                        ),
                    ),
                ),
            ),
        )
        # missing outer binder
        yield TLam(
            "B",
            PROP,
            PLam(
                "a",
                Var(0),
                PLam(
                    "b",
                    Var(0),
                    TLam(
                        "p",
                        PROP,
                        PLam(
                            "H",
                            Imp(Var(1), Imp(Var(1), Var(0))),
                            PApp(PApp(Hyp("H"), Hyp("a")), Hyp("b")),
                        ),
                    ),
                ),
            ),
        )
        assert good is not None

    def test_ten_mutants_all_rejected(self, sig):
        claim = and_intro_claim()
        mutants = list(self.mutants())
        assert len(mutants) == 10
        for i, bad in enumerate(mutants):
            with pytest.raises(KernelError):
                check_proof(sig, Context(), bad, claim)
            assert not alpha_eq(bad, and_intro_proof()) or i < 0


class TestRandomTermProperties:
    """Seeded sweep of well-typed terms up to depth 6."""

    def _cases(self, count):
        rng = random.Random(20260826)
        for _ in range(count):
            ty = random_type(rng, 2)
            env = tuple(random_type(rng, 1) for _ in range(rng.randint(0, 3)))
            yield rng, ty, env, random_term(rng, ty, env, 6)

    def test_type_preservation_and_idempotence(self, sig):
        for rng, ty, env, t in self._cases(1000):
            ctx = context_for(env)
            assert typecheck(sig, ctx, t) == ty
            n = normalize(sig, t)
            assert typecheck(sig, ctx, n) == ty
            assert alpha_eq(normalize(sig, n), n)

    def test_alpha_eq_ignores_binder_hints(self, sig):
        for rng, ty, env, t in self._cases(300):
            assert scramble_hints(t, rng) == t
            assert alpha_eq(scramble_hints(t, rng), t)


def test_shift_and_subst_cancel():
    t = App(App(Const("In"), Var(0)), Var(2))
    assert subst(shift(t, 1), 0, Var(0)) == t
    assert shift(t, 0) == t


def test_instantiate_beta():
    body = App(App(Const("In"), Var(0)), Var(1))
    assert instantiate(body, Const("Empty")) == App(
        App(Const("In"), Const("Empty")), Var(0)
    )


def test_convertible_unfolds_definitions(sig):
    # Sing-like situation using the basis: not A vs A -> False
    a = All(PROP, Imp(Var(0), Var(0)))
    assert convertible(sig, App(Const("not"), a), Imp(a, Const("False")))
    assert not convertible(sig, App(Const("not"), a), a)


def test_head_normal_unfolds_one_head_layer(sig):
    a = All(PROP, Imp(Var(0), Var(0)))
    h = head_normal(sig, App(Const("not"), a), Imp)
    assert isinstance(h, Imp)
    assert alpha_eq(h.antecedent, a)


def test_match_conclusion_first_order(sig):
    # pattern: In ?x Empty against In Empty Empty
    metas = {"?x": SET}
    pattern = App(App(Const("In"), Const("?x")), Const("Empty"))
    goal = App(App(Const("In"), Const("Empty")), Const("Empty"))
    sub = match_conclusion(sig, metas, pattern, goal)
    assert not isinstance(sub, NoMatch)
    assert sub["?x"] == Const("Empty")
    assert subst_metavars(pattern, sub) == goal


def test_match_conclusion_rejects_clash(sig):
    metas = {"?x": SET}
    pattern = App(App(Const("In"), Const("?x")), Const("?x"))
    goal = App(App(Const("In"), Const("Empty")), App(Const("Power"), Const("Empty")))
    assert isinstance(match_conclusion(sig, metas, pattern, goal), NoMatch)


def test_proof_deps_orders_globals_by_first_use(sig):
    pf = PApp(TApp(Known("andEL"), Const("True")), Known("xm"))
    globals_, hyps = proof_deps(pf)
    assert globals_ == ["andEL", "True", "xm"]
    assert hyps == []


def test_proof_deps_hyps_and_bound_names(sig):
    pf = PLam("H", Const("True"), PApp(Hyp("H"), Hyp("G")))
    globals_, hyps = proof_deps(pf)
    assert "H" not in hyps
    assert hyps == ["G"]


def test_signature_rejects_ill_typed_statement():
    from hammerforge.kernel import AxiomEntry

    sig = Signature()
    with pytest.raises(KernelError):
        sig.add(AxiomEntry("bad", App(Const("missing"), Var(0))))
