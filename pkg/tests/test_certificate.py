import copy
import json

import pytest

from trinitymaps import certificate as certmod
from trinitymaps.flagmap import invariants, is_isomorphic_pointed
from trinitymaps.norm import InputError
from trinitymaps.plan import plan


def failed_names(rep):
    return {c.name for c in rep.failed}


def test_roundtrip_k5(cert5):
    text = certmod.dumps(cert5)
    back = certmod.loads(text)
    rep = certmod.verify(back)
    assert rep.ok, failed_names(rep)
    names = {c.name for c in rep.checks}
    assert {"flag-level trinity", "matrix and flag levels agree", "R matches generator formula"} <= names


def test_certificate_is_reproducible(cert5):
    again = certmod.to_certificate(certmod.construct(5))
    assert certmod.dumps(again) == certmod.dumps(cert5)


def test_integers_serialised_as_strings(cert5):
    raw = json.loads(certmod.dumps(cert5))
    assert raw["k"] == "5" and raw["p"] == "11"
    assert raw["group_order"] == "660"
    xi = -pow(5, 3, 11) % 11  # zeta = 5
    assert raw["R"][0][0] == {"a0": str(xi), "a1": "0"} == {"a0": "7", "a1": "0"}


def test_construction_k5(construction5):
    c = construction5
    assert c.group_order == 660 and c.enumerated
    assert c.flag_check == (True, True)
    assert c.duality_witness is not None and c.petrie_witness is not None
    inv = c.invariants
    assert (inv.V, inv.E, inv.F, inv.chi) == (66, 165, 66, -33)


def test_construction_k7_quadratic(construction7):
    c = construction7
    assert c.seed.ctx.degree == 2 and c.seed.p == 13
    assert c.group_order == 1092 and c.flag_check == (True, True)
    rep = certmod.verify(certmod.loads(certmod.dumps(certmod.to_certificate(c))))
    assert rep.ok, failed_names(rep)


def test_matrix_invariants_match_flags(construction5, map5):
    assert certmod.matrix_invariants(construction5.seed) == invariants(map5)


def test_map_from_certificate(cert5, map5):
    assert is_isomorphic_pointed(certmod.map_from_certificate(cert5), map5)


def test_perturbed_matrix_entry(cert5):
    bad = copy.deepcopy(cert5)
    a0 = int(bad["R"][0][1]["a0"])
    bad["R"][0][1]["a0"] = (a0 + 1) % 11
    rep = certmod.verify(bad)
    assert not rep.ok
    assert "R matches generator formula" in failed_names(rep)


def test_wrong_residue_detected(cert5):
    bad = copy.deepcopy(cert5)
    bad["norm_report"]["admissible"][0]["residue_2k"] = "9"
    rep = certmod.verify(bad)
    assert "congruence residues match stored" in failed_names(rep)


def test_tampered_invariants_detected(cert5):
    bad = copy.deepcopy(cert5)
    bad["invariants"]["V"] = "67"
    assert "stored invariants" in failed_names(certmod.verify(bad))


def test_removed_witness_detected(cert5):
    bad = copy.deepcopy(cert5)
    bad["petrie_witness"] = None
    assert "petrie_witness absent and none exists" in failed_names(certmod.verify(bad))


def test_over_budget_verification_uses_witnesses(cert5):
    rep = certmod.verify(cert5, budget=100)
    assert rep.ok
    assert "flag-level check skipped (over budget)" in {c.name for c in rep.checks}


@pytest.mark.parametrize(
    "mutate",
    [
        lambda c: c.pop("R"),
        lambda c: c.__setitem__("schema_version", "0"),
        lambda c: c.__setitem__("k", "five"),
        lambda c: c["zeta"].__setitem__("a1", "3"),
        lambda c: c.__setitem__("S", [[1, 2, 3]]),
        lambda c: c.pop("norm_report"),
    ],
)
def test_malformed(cert5, mutate):
    bad = copy.deepcopy(cert5)
    mutate(bad)
    with pytest.raises(certmod.MalformedCertificate):
        certmod.verify(bad)


def test_loads_rejects_garbage():
    with pytest.raises(certmod.MalformedCertificate):
        certmod.loads("{not json")
    with pytest.raises(certmod.MalformedCertificate):
        certmod.loads("[1, 2]")


def test_construct_rejects_bad_valency():
    with pytest.raises(InputError, match="tetrahedron"):
        certmod.construct(3)
    for k in (4, 15):
        with pytest.raises(InputError):
            certmod.construct(k)


@pytest.mark.parametrize("m, d, n", [(5, 5, 1), (9, 9, 1), (15, 5, 3), (27, 9, 3), (35, 7, 5), (81, 9, 9), (45, 5, 9)])
def test_plan_examples(m, d, n):
    lp = plan(m)
    assert (lp.d, lp.n) == (d, n) and d * n == m


def test_plan_resolve():
    lp = plan(15, resolve=True)
    assert lp.base_prime == 11 and lp.base_group_order == 660
    assert lp.predicted_group == "(Z_3)^166 x| PSL(2,11)"


@pytest.mark.parametrize("m", [3, 1, 2, 10, -5])
def test_plan_rejects(m):
    with pytest.raises(InputError):
        plan(m)
