import itertools
import json

import pytest

from polytc import ring
from polytc.lengths import PreconditionError, is_long
from polytc.presentation import (
    FixtureError,
    build_base,
    load_fixture,
    presentation_from_dict,
    presentation_id,
    presentation_to_dict,
    validate,
)
from polytc.ring import Monomial, Polynomial, Presentation, bits, mask_of, parse_polynomial

from conftest import L, fixture_path

SPHERE = {
    "n": 4,
    "max_degree": 2,
    "annihilators": [[1, 2], [1, 3], [2, 3]],
    "linear_relations": [
        {"terms": [{"coef": 1, "r_exp": 0, "support": [i]}, {"coef": 1, "r_exp": 1, "support": []}]}
        for i in (1, 2, 3)
    ]
    + [{"terms": [{"coef": 1, "r_exp": 2, "support": []}]}],
}


def write(tmp_path, data, name="p.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


def test_base_equilateral_five():
    pres = build_base(L("1,1,1,1,1"))
    expected = {mask_of(S) for k in range(2, 5) for S in itertools.combinations(range(1, 5), k)}
    assert set(pres.annihilators) == expected
    assert pres.linear_relations == ()
    assert pres.max_degree == 0


@pytest.mark.parametrize("text", ["1,1,1,1,1", "1,3,3,3,5", "2,3,4,5,6,7", "1,1,2,3,5,8,13", "3,3,3,1"])
def test_base_annihilates_n_minus_2_products(text):
    ell = L(text)
    pres = build_base(ell)
    n = ell.n
    for S in itertools.combinations(range(1, n), n - 2):
        assert mask_of(S) in pres.annihilators
    # up-closed, and exactly the sets whose union with n is long
    for m in range(1 << (n - 1)):
        assert (m in pres.annihilators) == is_long(ell, m | 1 << (n - 1))
        if m in pres.annihilators:
            for extra in range(n - 1):
                assert m | 1 << extra in pres.annihilators


def test_base_refuses():
    with pytest.raises(PreconditionError):
        build_base(L("1,1,1,1"))
    with pytest.raises(PreconditionError):
        build_base(L("1,1,1,4"))


def test_base_is_permutation_equivariant():
    a = build_base(L("1,2,3,4,5"))
    b = build_base(L("2,1,3,4,5"))
    swap = lambda m: (m & ~0b11) | ((m & 1) << 1) | ((m >> 1) & 1)
    assert {swap(m) for m in a.annihilators} == set(b.annihilators)
    assert build_base(L("1,2,3,4,5")) == a


def test_load_sphere(tmp_path):
    pres = load_fixture(write(tmp_path, SPHERE))
    assert pres.n == 4 and pres.max_degree == 2
    assert len(pres.linear_relations) == 4
    assert validate(pres, L("1,1,1,2")).accepted


def test_bundled_sphere_matches_description(sphere):
    assert presentation_id(sphere) == presentation_id(presentation_from_dict(SPHERE))
    # V_i^2 = R V_i holds since both sides vanish: V_i(V_i + R) = 2 R V_i and R(V_i + R) = R V_i + R^2
    for i in (1, 2, 3):
        assert not ring.is_nonzero(sphere, parse_polynomial(f"R*V{i}"))
        assert not ring.is_nonzero(sphere, parse_polynomial("R^2"))


@pytest.mark.parametrize(
    "patch,fragment",
    [
        ({"linear_relations": [{"terms": [{"coef": 1, "r_exp": 1, "support": []}, {"coef": 1, "r_exp": 2, "support": []}]}]}, "inhomogeneous"),
        ({"annihilators": [[1, 4]]}, "index 4"),
        ({"linear_relations": [{"terms": [{"coef": 1, "r_exp": 0, "support": [4]}]}]}, "linear_relations[0].terms[0].support"),
        ({"n": 2}, "'n'"),
        ({"max_degree": -1}, "max_degree"),
        ({"annihilators": [["a"]]}, "annihilators[0]"),
        ({"linear_relations": [{"terms": [{"coef": 1.5, "r_exp": 0, "support": []}]}]}, "coef"),
        ({"linear_relations": [{"oops": []}]}, "linear_relations[0]"),
    ],
)
def test_load_rejects(tmp_path, patch, fragment):
    data = dict(SPHERE, **patch)
    with pytest.raises(FixtureError) as exc:
        load_fixture(write(tmp_path, data))
    assert fragment in str(exc.value)


def test_load_rejects_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(FixtureError, match="line 1"):
        load_fixture(path)


def test_dict_roundtrip_and_id(bundled):
    _, _, pres = bundled
    again = presentation_from_dict(json.loads(json.dumps(presentation_to_dict(pres))))
    assert again.annihilators == pres.annihilators
    assert set(again.linear_relations) == set(pres.linear_relations)
    assert presentation_id(again) == presentation_id(pres)


def test_validate_sphere(sphere):
    rep = validate(sphere, L("1,1,1,2"))
    assert rep.accepted
    assert rep.betti == [1, 1]
    assert [c.name for c in rep.checks] == [
        "generators",
        "n-2 distinct V product vanishes",
        "monomials with equal support agree",
        "connected (betti_0 = 1)",
        "top class is Z",
        "Poincare symmetry",
        "nonzero top monomial",
    ]


def test_validate_base_forced_to_degree_two():
    pres = build_base(L("1,1,1,1,1")).with_max_degree(2)
    rep = validate(pres)
    assert not rep.accepted
    assert rep.betti == [1, 5, 5]
    assert rep.get("Poincare symmetry").passed is False
    assert rep.get("top class is Z").passed is False


def test_validate_base_structural_only():
    rep = validate(build_base(L("1,1,1,1,1")))
    assert rep.get("generators").passed
    assert rep.get("n-2 distinct V product vanishes").passed
    assert rep.get("monomials with equal support agree").passed
    assert rep.get("connected (betti_0 = 1)").passed
    assert rep.get("top class is Z").passed is None
    assert not rep.accepted


def test_validate_foreign_generator():
    base = build_base(L("1,1,1,1,1"))
    pres = base.with_relations([parse_polynomial("V5 - R")]).with_max_degree(2)
    rep = validate(pres)
    assert rep.get("generators").passed is False
    assert not rep.accepted


def test_validate_missing_annihilator():
    pres = Presentation.build(5, [], [], max_degree=3)
    rep = validate(pres)
    assert rep.get("n-2 distinct V product vanishes").passed is False


def test_validate_size_mismatch(sphere):
    rep = validate(sphere, L("1,1,1,1,1"))
    assert not rep.accepted


def test_validate_monotone_in_relations():
    base = build_base(L("1,3,3,3,5")).with_max_degree(3)
    rng_rel = [parse_polynomial(s) for s in ("R*V1 - R*V2", "R^2", "V2 + V3 - R", "R^3")]
    pres = base
    for rel in rng_rel:
        pres = pres.with_relations([rel])
        rep = validate(pres)
        assert rep.get("n-2 distinct V product vanishes").passed
        assert rep.get("monomials with equal support agree").passed


def test_bundled_fixtures_accepted_with_extended_checks(bundled):
    name, ell, pres = bundled
    rep = validate(pres, ell, extended=True)
    assert rep.accepted, rep.summary()
    assert rep.betti == rep.betti[::-1]
    assert rep.get("intersection pairing unimodular").passed


def test_equilateral_betti_numbers():
    assert validate(load_fixture(fixture_path("n5_equilateral"))).betti == [1, 5, 1]
    assert validate(load_fixture(fixture_path("n7_equilateral"))).betti == [1, 7, 22, 7, 1]


def test_report_serializes(sphere):
    d = validate(sphere).to_dict()
    assert d["accepted"] is True
    assert json.loads(json.dumps(d)) == d
    assert {c["status"] for c in d["checks"]} == {"pass"}
