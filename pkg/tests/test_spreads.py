"""Spreads, pencils, reguli and Hall switching, plus the structural suites
over the spread union and the shifted spread family."""

import pytest

from spreadsmith import checks
from spreadsmith.proj_geometry import line_points, lines_meet
from spreadsmith.spreads import geometry_for_q


def test_desarguesian_spread_counts():
    for q in (3, 4, 5):
        geo = geometry_for_q(q)
        d = geo.desarguesian_spread()
        assert len(d.lines) == q * q + 1
        assert geo.is_spread(d.lines).ok
        assert len(geo.extension_points(d.lines)) == (q * q + 1) ** 2


def test_subgeometry_line_universe():
    for q in (3, 4, 5):
        geo = geometry_for_q(q)
        assert len(geo.sigma_eta_lines()) == (q * q + 1) * (q * q + q + 1)


def test_pencil_contents():
    geo = geometry_for_q(4)
    q = geo.q
    for a in geo.lam.I:
        for u in range(q + 1):
            for v in range(q + 1):
                pen = geo.pencil(a, u, v)
                assert len(pen.lines) == q + 1
                assert geo.space.r_U1 in pen.lines
    with pytest.raises(ValueError):
        geo.pencil(geo.lam.eta_index, 0, 0)


def test_line_family_sizes():
    assert len(geometry_for_q(3).line_set_L()) == 1 * 3 * 16
    assert len(geometry_for_q(4).line_set_L()) == 1 * 4 * 25
    assert len(geometry_for_q(5).line_set_L()) == 2 * 5 * 36


def test_spread_from_transversal_preconditions():
    geo = geometry_for_q(3)
    s = geo.spec
    # a subgeometry line is stable: self-conjugate diagnosis
    with pytest.raises(ValueError, match="self-conjugate"):
        geo.spread_from_transversal(geo.sigma_eta_lines()[0])
    # a one-point secant: meets-the-subgeometry diagnosis
    secant = None
    for l in geo.space.all_lines():
        pts = line_points(s, l)
        if sum(1 for P in pts if P in geo.sigma_eta) == 1:
            secant = l
            break
    assert secant is not None
    with pytest.raises(ValueError, match="meets the subgeometry"):
        geo.spread_from_transversal(secant)
    # no further precondition exists: every line avoiding the subgeometry is
    # automatically non-stable and skew to its conjugate (exhaustive at q=3)
    for l in geo.space.all_lines():
        pts = line_points(s, l)
        if all(P not in geo.sigma_eta for P in pts):
            lt = geo.tau_eta_line(l)
            assert lt != l and not lines_meet(s, l, lt)


def test_transversal_of_t1_rebuilds_desarguesian():
    for q in (3, 4):
        geo = geometry_for_q(q)
        assert geo.spread_from_transversal(geo.space.t1).key() == \
            geo.desarguesian_spread().key()


def test_regulus_membership_requires_family_line():
    geo = geometry_for_q(3)
    with pytest.raises(ValueError):
        geo.regulus_of(geo.space.t1)


def test_hall_spread_structure():
    geo = geometry_for_q(3)
    q = geo.q
    for l in geo.line_set_L():
        h = geo.hall_spread(l)
        assert geo.is_spread(h.lines).ok
        assert not set(h.lines) & set(geo.desarguesian_spread().lines)
        src = geo.spread_from_transversal(l)
        assert h.key() != src.key()
        assert len(set(h.lines) ^ set(src.lines)) == 2 * (q + 1)


def test_is_spread_negative_report():
    geo = geometry_for_q(3)
    d = list(geo.desarguesian_spread().lines)
    other = next(l for l in geo.sigma_eta_lines() if l not in d)
    mutated = d[:-1] + [other]
    rep = geo.is_spread(mutated)
    assert not rep.ok
    assert rep.multiply_covered is not None or rep.uncovered is not None
    assert not geo.is_spread(d[:-1]).ok


def test_reguli_through_distinguished_line_count():
    geo = geometry_for_q(3)
    assert len(geo.reguli_through_r_U1()) == 12


def test_scalar_line_family_is_one_punctured_pencil():
    for q in (3, 5):
        geo = geometry_for_q(q)
        a = geo.lam.I[0]
        family = {geo.l_lambda(a, scalar) for scalar in range(q)}
        pen = set(geo.pencil(a, 0, 0).punctured(geo.space.r_U1))
        assert family == pen
    with pytest.raises(ValueError):
        geometry_for_q(3).l_lambda(geometry_for_q(3).lam.I[0], 0, xtilde=1)


# structural suites (exhaustive at q=3, case splits at q in {3,5})

def test_suite_baer_subgeometries_q3():
    r = checks.check_baer_subgeometries(geometry_for_q(3))
    assert r.ok, r.detail


def test_suite_subline_extension():
    for q in (3, 4):
        r = checks.check_subline_extension(geometry_for_q(q))
        assert r.ok, r.detail


def test_suite_spread_union_sections_q3():
    r = checks.check_spread_union(geometry_for_q(3))
    assert r.ok, r.detail


def test_suite_regulus_transversal_classification_q3():
    r = checks.check_regulus_transversal_classification(geometry_for_q(3))
    assert r.ok, r.detail


def test_suite_pencil_line_family():
    for q in (3, 4):
        r = checks.check_pencils_and_line_family(geometry_for_q(q))
        assert r.ok, r.detail


def test_suite_transversal_and_hall_spreads_q4():
    geo = geometry_for_q(4)
    assert checks.check_transversal_spreads(geo).ok
    assert checks.check_hall_spreads(geo).ok


def test_suite_desarguesian_property_q3():
    r = checks.check_desarguesian_property(geometry_for_q(3))
    assert r.ok, r.detail


def test_suite_shift_maps_q3():
    r = checks.check_shift_maps(geometry_for_q(3))
    assert r.ok, r.detail


def test_suite_plane_sections_q3():
    r = checks.check_plane_sections(geometry_for_q(3))
    assert r.ok, r.detail


def test_suite_subplane_meet_q3():
    r = checks.check_subplane_meet(geometry_for_q(3))
    assert r.ok, r.detail


def test_suite_section_pivot_q3():
    r = checks.check_section_pivot(geometry_for_q(3))
    assert r.ok, r.detail
