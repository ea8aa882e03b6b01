import pytest

from hammerforge.basis import MANIFEST, bootstrap, classical_frontier, signature_listing
from hammerforge.kernel import Context, Known, PApp, TApp, ThmEntry, check_proof


@pytest.fixture(scope="module")
def sig():
    return bootstrap()


def test_entry_count_matches_manifest(sig):
    assert len(sig.entries) == 38
    names = {e.name for e in sig.entries}
    for group in (MANIFEST.prim_names, MANIFEST.axiom_names, MANIFEST.connective_defs):
        assert set(group) <= names
    assert MANIFEST.xm_name in names


def test_classical_frontier_is_xm(sig):
    i = classical_frontier(sig)
    assert i == 36
    assert sig.entries[i].name == "xm"


def test_xm_is_the_only_trusted_theorem(sig):
    for e in sig.entries:
        if not isinstance(e, ThmEntry):
            continue
        if e.name == "xm":
            assert e.trusted and e.proof is None
        else:
            assert not e.trusted and e.proof is not None


def test_derived_theorem_proofs_recheck(sig):
    for e in sig.entries:
        if isinstance(e, ThmEntry) and e.proof is not None:
            report = check_proof(sig, Context(), e.proof, e.prop)
            assert list(report.holes) == [], e.name


def test_dneg_proof_cites_xm(sig):
    dneg = next(e for e in sig.entries if e.name == "dneg")
    from hammerforge.kernel import proof_deps

    globals_, _hyps = proof_deps(dneg.proof)
    assert "xm" in globals_


def test_listing_mentions_every_entry(sig):
    listing = signature_listing(sig)
    for e in sig.entries:
        assert e.name in listing
    assert "Thm! xm" in listing
