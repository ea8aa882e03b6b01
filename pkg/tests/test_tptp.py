import re
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hammerforge.hammer import gen_bushy
from hammerforge.kernel import alpha_eq
from hammerforge.tptp import (
    NotFirstOrder,
    UnmangleError,
    fo_fragment_check,
    mangle,
    parse_th0,
    recover_formula_name,
    to_fof,
    to_th0,
    unmangle,
)

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def candidates(dev):
    return {c.problem_id: c for c in gen_bushy(dev)}


# The conftest `dev` fixture is session scoped; re-export it at module scope
# for the local fixture above.
@pytest.fixture(scope="module")
def dev(corpus_text):
    from hammerforge.script import check_script

    return check_script(corpus_text)


class TestMangling:
    def test_examples(self):
        assert mangle("ordinal_ordsucc") == "ordinal_5Fordsucc"
        assert unmangle("ordinal_5Fordsucc") == "ordinal_ordsucc"
        assert mangle("If_i") == "If_5Fi"
        assert mangle("plain") == "plain"

    def test_round_trip_many(self):
        import random
        import string

        rng = random.Random(99)
        alphabet = string.ascii_letters + string.digits + "_'-. !@"
        for _ in range(2000):
            name = "".join(
                rng.choice(alphabet) for _ in range(rng.randint(1, 24))
            )
            assert unmangle(mangle(name)) == name

    @given(st.text(alphabet=st.characters(max_codepoint=0xFF), min_size=1, max_size=30))
    @settings(max_examples=300, deadline=None)
    def test_round_trip_hypothesis(self, name):
        assert unmangle(mangle(name)) == name

    def test_unmangle_rejects_bad_escape(self):
        with pytest.raises(UnmangleError):
            unmangle("a_5")
        with pytest.raises(UnmangleError):
            unmangle("a_ZZ")


class TestNameRecovery:
    def test_basic_roles(self):
        names = {"ordinal_ordsucc", "Ha", "If_i"}
        assert recover_formula_name("axiom_ordinal_5Fordsucc9", names) == (
            "ordinal_ordsucc",
            "axiom",
        )
        assert recover_formula_name("axiom_c_Ha16", names) == ("Ha", "hyp")
        assert recover_formula_name("def_If_5Fi3", names) == ("If_i", "def")
        assert recover_formula_name("conj_Ha2", names) == ("Ha", "conjecture")

    def test_trailing_digits_in_source_name(self):
        # the statement ordinal must not eat digits belonging to the name
        names = {"thm7", "thm"}
        assert recover_formula_name("axiom_thm712", names)[0] in names

    def test_unknown_name_fails(self):
        with pytest.raises(Exception):
            recover_formula_name("axiom_nosuch1", {"other"})


class TestTh0:
    def test_golden_bushy_bundle(self, candidates):
        got = to_th0(candidates["bushy_ordinal_ordsucc_demo_4"].bundle)
        assert got == (GOLDEN / "ordinal_ordsucc_demo_bushy.p").read_text()

    def test_every_bushy_problem_round_trips(self, dev, candidates):
        checked = 0
        for cand in candidates.values():
            text = to_th0(cand.bundle)
            parsed = parse_th0(text)
            assert parsed.problem_id == cand.problem_id
            orig = {f.name: f.prop for f in cand.bundle.formulas}
            names = cand.bundle.names()
            recovered = set()
            for emitted, role, prop in parsed.formulas:
                src, kind = recover_formula_name(emitted, names)
                if kind == "conjecture":
                    assert alpha_eq(prop, cand.bundle.conjecture), cand.problem_id
                    continue
                assert alpha_eq(prop, orig[src]), (cand.problem_id, src)
                recovered.add(src)
            assert recovered == set(orig), cand.problem_id
            checked += 1
        assert checked == len(candidates)

    def test_statement_ordinals_are_unique_and_increasing(self, candidates):
        text = to_th0(candidates["bushy_ordinal_ordsucc_demo_4"].bundle)
        ordinals = [
            int(m.group(1))
            for m in re.finditer(r"thf\([A-Za-z0-9_']*?(\d+), (?!type)", text)
        ]
        # the counter covers every statement, type declarations included,
        # so the first formula ordinal equals the declaration count
        n_decls = len(re.findall(r"thf\([^,]+, type,", text))
        assert ordinals[0] == n_decls
        assert ordinals == sorted(set(ordinals))

    def test_literal_defs_inlines_definitions(self, candidates):
        b = candidates["bushy_ordinal_ordsucc_demo_4"].bundle
        eq_style = to_th0(b)
        literal = to_th0(b, literal_defs=True)
        assert eq_style != literal
        assert parse_th0(literal).problem_id == b.problem_id


class TestFof:
    def test_golden_fof(self, candidates):
        b = candidates["bushy_not_In_Empty_1"].bundle
        fo_fragment_check(b)
        assert to_fof(b) == (GOLDEN / "not_In_Empty_bushy.fof").read_text()

    def test_prop_quantified_bundle_is_rejected(self, candidates):
        b = candidates["bushy_imp_refl_1"].bundle
        with pytest.raises(NotFirstOrder) as ei:
            fo_fragment_check(b)
        assert str(ei.value)

    def test_higher_order_constant_is_rejected(self, candidates):
        b = candidates["bushy_ordinal_ordsucc_demo_4"].bundle
        with pytest.raises(NotFirstOrder) as ei:
            to_fof(b)
        assert "Eps" in str(ei.value)

    def test_fof_output_is_well_formed(self, candidates):
        b = candidates["bushy_not_In_Empty_1"].bundle
        check_fof_text(to_fof(b))


def check_fof_text(text: str) -> None:
    """Small independent well-formedness check for FOF output."""
    saw_conjecture = False
    for line in text.splitlines():
        if not line or line.startswith("%"):
            continue
        m = re.fullmatch(r"fof\(([A-Za-z0-9_]+), (axiom|definition|conjecture), (.*)\)\.", line)
        assert m, line
        if m.group(2) == "conjecture":
            saw_conjecture = True
        body = m.group(3)
        assert body.count("(") == body.count(")")
        for banned in ("@", "^", "$o", "$tType", "thf("):
            assert banned not in body
    assert saw_conjecture
