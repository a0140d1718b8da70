"""Generators, domains, Maslov index, J+, admissibility and differentials."""

from __future__ import annotations

import pytest

from conftest import built
from spectral_order.corpus import finger_counts
from spectral_order.diagram import HeegaardDiagram, alpha_boundary_endpoints
from spectral_order.floer import (
    FloerError,
    asserted_differential,
    connects,
    contact_class_vanishes,
    domain_space,
    enumerate_generators,
    enumerate_positive_domains,
    empty_embedded_polygon,
    is_admissible,
    is_nice,
    j_plus,
    make_generator,
    maslov_index,
    nice_differential,
    parse_generator,
    periodic_domain_basis,
)


def _without_basepoints(d: HeegaardDiagram) -> HeegaardDiagram:
    return HeegaardDiagram(d.n_curves, d.points, d.alpha_orders, d.beta_orders, d.regions, [], contact=d.contact)


def test_generators_of_overtwisted_annulus():
    d = built("overtwisted-annulus").diagram
    assert [g.label for g in enumerate_generators(d)] == ["{x1}", "{y1.1}", "{y1.2}"]


def test_generator_parsing_and_errors(finger):
    g = parse_generator(finger, "v2,v1,x3")
    assert g.label == "{v2,v1,x3}"  # listed by α curve
    assert parse_generator(finger, ["v1", "v2", "x3"]) == g
    with pytest.raises(FloerError):
        make_generator(finger, ["y1", "u1", "x3"])  # two points on one β curve
    with pytest.raises(FloerError):
        make_generator(finger, ["y1", "y2"])


def test_generators_are_bijections(finger):
    gens = enumerate_generators(finger)
    assert len(gens) == 144
    for g in gens:
        assert sorted(g.sigma) == list(range(finger.n_curves))
        assert [finger.point(p).alpha for p in g.points] == list(range(finger.n_curves))


def test_domain_space_basics(finger, finger_gens):
    x, y, u = finger_gens["x"], finger_gens["y"], finger_gens["u"]
    same = domain_space(finger, y, y)
    assert not same.empty and same.particular.is_zero()
    space = domain_space(finger, y, u)
    assert not space.empty
    D3 = finger.domain({"B1": 1, "B2": 1})
    assert connects(finger, D3, y, u)
    assert alpha_boundary_endpoints(finger, D3) == {p: c for p, c in {"y1": 1, "y2": 1, "u1": -1, "v2": -1}.items()}
    assert not connects(finger, D3, u, y)
    assert not connects(finger, D3, y, x)


def test_domain_space_can_be_empty():
    d = built("trivial-annulus").diagram
    gens = enumerate_generators(d)
    assert all(not domain_space(d, a, b).empty for a in gens for b in gens)
    tw = built("family-1-2").diagram
    gens = enumerate_generators(tw)
    spaces = [domain_space(tw, gens[0], b) for b in gens]
    assert any(s.empty for s in spaces) and any(not s.empty for s in spaces)


def test_periodic_domains_and_basepoints():
    assert periodic_domain_basis(built("overtwisted-annulus").diagram) == ()
    d = built("trivial-annulus").diagram
    assert len(periodic_domain_basis(d)) == 1
    assert len(periodic_domain_basis(_without_basepoints(d))) == 2
    for P in periodic_domain_basis(d):
        assert not alpha_boundary_endpoints(d, P)


def test_admissibility_certificate_and_witness():
    d = built("trivial-annulus").diagram
    res = is_admissible(d)
    assert res.admissible and res.witness is None
    w = res.certificate
    assert all(c > 0 for c in w)
    for P in periodic_domain_basis(d):
        assert sum(a * b for a, b in zip(w, P.coeffs)) == 0
    bad = is_admissible(_without_basepoints(d))
    assert not bad.admissible
    assert bad.witness.is_nonnegative() and not bad.witness.is_zero()
    assert not alpha_boundary_endpoints(d, bad.witness)
    assert bad.to_json(d)["admissible"] is False


def test_enumeration_from_v(finger, finger_gens):
    v, u, x = finger_gens["v"], finger_gens["u"], finger_gens["x"]
    into_x = enumerate_positive_domains(finger, v, x, index=1)
    into_u = enumerate_positive_domains(finger, v, u, index=1)
    assert into_x.complete and into_u.complete and not into_x.capped
    assert [finger.domain_dict(D) for D in into_u.domains] == [{"B3": 1}]
    (D1,) = into_x.domains
    assert finger.domain_dict(D1) == {"A": 1, "B1": 1, "B5": 2, "C": 2, "D": 1, "F": 1, "G": 1, "H": 1}


def test_enumeration_on_inadmissible_diagram_is_capped():
    d = _without_basepoints(built("trivial-annulus").diagram)
    gens = enumerate_generators(d)
    en = enumerate_positive_domains(d, gens[0], gens[0], coeff_cap=2)
    assert en.capped and en.cap == 2


@pytest.mark.parametrize("label, jp", [("D1", 2), ("D2", 0), ("D3", 2)])
def test_finger_domains_index_and_j_plus(finger, label, jp):
    (c,) = [c for c in finger_counts(finger) if c["label"] == label]
    x, y = parse_generator(finger, c["from"]), parse_generator(finger, c["to"])
    D = finger.domain(c["domain"])
    assert maslov_index(finger, D, x, y) == 1
    assert j_plus(finger, D, x, y) == jp


def test_maslov_and_j_plus_reject_wrong_endpoints(finger, finger_gens):
    D = finger.domain({"B3": 1})
    with pytest.raises(FloerError):
        maslov_index(finger, D, finger_gens["u"], finger_gens["v"])
    with pytest.raises(FloerError):
        j_plus(finger, D, finger_gens["y"], finger_gens["v"])


def test_bigon_is_an_empty_embedded_polygon(finger, finger_gens):
    D = finger.domain({"B3": 1})
    assert empty_embedded_polygon(finger, D, finger_gens["v"], finger_gens["u"]) == 2


def test_nice_detection():
    d = built("family-2-3").diagram
    ok, bad = is_nice(d)
    assert not ok and len(bad) == 4
    assert all(d.region(r).n_corners == 6 for r in bad)
    with pytest.raises(FloerError, match="not nice"):
        nice_differential(d)
    assert is_nice(built("overtwisted-annulus").diagram)[0]


def test_nice_differential_of_overtwisted_annulus():
    d = built("overtwisted-annulus").diagram
    diff = nice_differential(d)
    xi = make_generator(d, d.contact)
    assert diff.source == "nice"
    assert len(diff.pieces) == 1  # everything at level 0
    targets = {(a.source, a.target) for a in diff.arrows}
    assert targets == {("{y1.1}", "{x1}"), ("{y1.2}", "{x1}")}
    vanishes, witness = contact_class_vanishes(diff, xi)
    assert vanishes and len(witness) == 1


def test_nice_differential_of_trivial_annulus_is_zero():
    d = built("trivial-annulus").diagram
    diff = nice_differential(d)
    assert diff.is_zero()
    assert contact_class_vanishes(diff, make_generator(d, d.contact)) == (False, [])


def test_asserted_differential_of_finger_diagram(finger, finger_gens):
    counts = finger_counts(finger)
    diff = asserted_differential(finger, counts)
    assert diff.source == "asserted"
    levels = sorted((a.source, a.target, a.level) for a in diff.arrows)
    v, u, y, x = (finger_gens[k].label for k in "vuyx")
    assert levels == sorted([(v, x, 1), (v, u, 0), (y, u, 1)])
    vanishes, witness = contact_class_vanishes(diff, finger_gens["x"])
    assert vanishes
    assert sorted(g.label for g in witness) == sorted([y, v])


def test_asserted_counts_are_revalidated(finger, finger_gens):
    base = finger_counts(finger)[1]
    bad_sign = dict(base, domain={"B3": -1})
    with pytest.raises(FloerError, match="not positive"):
        asserted_differential(finger, [bad_sign])
    wrong_pair = dict(base, to=finger_gens["y"].label)
    with pytest.raises(FloerError):
        asserted_differential(finger, [wrong_pair])
    with pytest.raises(FloerError, match="malformed"):
        asserted_differential(finger, [{"from": base["from"]}])


def test_asserted_counts_add_mod_two(finger):
    (d3,) = [c for c in finger_counts(finger) if c["label"] == "D3"]
    assert not asserted_differential(finger, [d3]).is_zero()
    assert asserted_differential(finger, [d3, d3]).is_zero()
    assert asserted_differential(finger, [dict(d3, count=2)]).is_zero()

