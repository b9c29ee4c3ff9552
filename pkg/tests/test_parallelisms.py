"""Parallelism assembly, exact-cover verification, the unitriangular
group, and good-set recovery with its distinct failure reasons."""

import pytest

from spreadsmith.goodsets import (
    Candidate,
    canonical,
    dual,
    enumerate_good_sets,
    fixed_plane_good_set,
    flip_canonical,
    is_good,
)
from spreadsmith.parallelisms import (
    Parallelism,
    assemble_spread_family,
    build_parallelism,
    characterize,
    family_checksum,
    group_E,
    is_E_invariant,
    verify_parallelism,
)
from spreadsmith.spreads import Spread, geometry_for_q


def test_build_and_cover_q3_q4():
    for q in (3, 4):
        geo = geometry_for_q(q)
        gs = fixed_plane_good_set(geo.lam, geo.lam.I[0], 0)
        par = build_parallelism(geo, gs)
        assert len(par) == q * q + q + 1
        assert par.spreads[par.desarguesian_index].tag == "desarguesian"
        assert sum(1 for sp in par.spreads if sp.tag == "hall") == q * q + q
        cert = verify_parallelism(geo, par)
        assert cert.ok
        assert cert.line_count == (q * q + 1) * (q * q + q + 1)
        # every hall member switches a regulus through the distinguished line
        r_sub = set(geo.subline_points(geo.space.r_U1))
        for sp in par.spreads:
            if sp.tag != "hall":
                continue
            assert sp.switched is not None
            assert geo.space.r_U1 in sp.switched


def test_builder_rejects_non_good_input():
    geo = geometry_for_q(3)
    a = geo.lam.I[0]
    bad = (Candidate(a, 0, 0), Candidate(a, 1, 1),
           Candidate(a, 1, 2), Candidate(a, 2, 0))
    assert not is_good(geo.lam, bad).ok
    with pytest.raises(ValueError, match="not a good set"):
        build_parallelism(geo, bad)


def test_duplicated_desarguesian_member_fails_pigeonhole():
    geo = geometry_for_q(3)
    q = geo.q
    gs = fixed_plane_good_set(geo.lam, geo.lam.I[0], 0)
    par = build_parallelism(geo, gs)
    spreads = list(par.spreads)
    hall_idx = next(i for i, sp in enumerate(spreads) if sp.tag == "hall")
    spreads[hall_idx] = geo.desarguesian_spread()
    cert = verify_parallelism(geo, spreads)
    assert not cert.ok
    # the q^2+1 Desarguesian lines are double covered and the q^2+1 lines of
    # the dropped Hall member are uncovered
    assert len(cert.multiply_covered) == q * q + 1
    assert set(cert.multiply_covered) == set(geo.desarguesian_spread().lines)
    assert len(cert.uncovered) == q * q + 1
    assert set(cert.uncovered) == set(par.spreads[hall_idx].lines)


def test_mutated_families_fail_with_witness():
    geo = geometry_for_q(3)
    lam = geo.lam
    n = geo.q + 1
    found = 0
    for gs in enumerate_good_sets(lam, limit=6):
        for slot in range(n):
            for delta in range(1, n):
                for coord in ("u", "v"):
                    cands = list(gs)
                    c = cands[slot]
                    if coord == "u":
                        cands[slot] = Candidate(c.alpha_idx,
                                                (c.u_pow + delta) % n, c.v_pow)
                    else:
                        cands[slot] = Candidate(c.alpha_idx, c.u_pow,
                                                (c.v_pow + delta) % n)
                    if len(set(cands)) != n or is_good(lam, cands).ok:
                        continue
                    found += 1
                    cert = verify_parallelism(
                        geo, assemble_spread_family(geo, cands))
                    assert not cert.ok
                    assert (cert.multiply_covered or cert.uncovered
                            or cert.spread_failures)
        if found >= 20:
            break
    assert found >= 20


def test_unitriangular_group_properties():
    for q in (3, 4):
        geo = geometry_for_q(q)
        E = group_E(geo)
        assert E.order == q * q
        assert len(E.generators) == 2 * geo.spec.m
        keys = {psi.canonical_key() for psi in E.elements}
        assert len(keys) == q * q


def test_all_parallelisms_E_invariant_q3():
    geo = geometry_for_q(3)
    for gs in enumerate_good_sets(geo.lam):
        par = build_parallelism(geo, gs)
        assert is_E_invariant(geo, par)
    # full-group sweep on one of them
    assert is_E_invariant(geo, par, full=True)


def test_characterize_round_trip():
    for q in (3, 4):
        geo = geometry_for_q(q)
        lam = geo.lam
        count = 0
        for gs in enumerate_good_sets(lam, limit=12):
            par = build_parallelism(geo, gs)
            res = characterize(geo, par)
            assert res.ok, res.reason
            assert res.good_set == flip_canonical(lam, gs)
            count += 1
        assert count == 12


def test_characterize_failure_reasons():
    geo = geometry_for_q(3)
    lam = geo.lam
    q = geo.q
    gs = fixed_plane_good_set(lam, lam.I[0], 0)
    par = build_parallelism(geo, gs)
    spreads = list(par.spreads)

    # no Desarguesian member
    res = characterize(geo, [sp for sp in spreads if sp.tag == "hall"]
                       + [spreads[0]])
    assert not res.ok and res.reason == "no Desarguesian member"

    # a Hall spread switched on a regulus avoiding the distinguished line
    d = geo.desarguesian_spread()
    others = [l for l in d.lines if l != geo.space.r_U1]
    rogue = None
    for i in range(len(others)):
        reg_lines = geo.transversals_of(
            geo.transversals_of([others[0], others[1], others[i]])) \
            if i >= 2 else None
        if reg_lines and geo.space.r_U1 not in reg_lines:
            from spreadsmith.spreads import Regulus
            reg = Regulus(lines=tuple(reg_lines))
            opp = geo.opposite_regulus(reg)
            rogue_lines = (set(d.lines) - set(reg.lines)) | set(opp.lines)
            rogue = Spread(lines=tuple(rogue_lines), alpha=geo.eta, tag="hall")
            break
    assert rogue is not None
    assert geo.is_spread(rogue.lines).ok
    mutated = spreads[:]
    mutated[0] = rogue
    res = characterize(geo, mutated)
    assert not res.ok and res.reason.startswith("regulus misses r_U1")

    # break invariance under the unitriangular group: swap one Hall member
    # for a Hall spread from a pencil that is not fully included
    other_gs = next(g for g in enumerate_good_sets(lam)
                    if flip_canonical(lam, g) != flip_canonical(lam, gs))
    other_par = build_parallelism(geo, other_gs)
    foreign = next(sp for sp in other_par.spreads if sp.tag == "hall"
                   and sp.key() not in {t.key() for t in spreads})
    mutated = spreads[:]
    mutated[0] = foreign
    res = characterize(geo, mutated)
    assert not res.ok and res.reason in ("not E-invariant",
                                         "pencil labels do not form q+1 full pencils")

    # full pencils with a non-good label set (distinct line classes, one
    # bundle collision): E-invariant, correctly grouped, but not good
    a = lam.I[0]
    labels = [Candidate(a, 0, 0), Candidate(a, 1, 3),
              Candidate(a, 1, 0), Candidate(a, 3, 0)]
    assert len({(c.u_pow - c.v_pow) % (q + 1) for c in labels}) == q + 1
    assert not is_good(lam, labels).ok
    family = assemble_spread_family(geo, labels)
    assert len({sp.key() for sp in family}) == len(family)
    res = characterize(geo, family)
    assert not res.ok and res.reason == "recovered set not good"


def test_checksum_fingerprints_the_line_multiset():
    geo = geometry_for_q(3)
    gs = fixed_plane_good_set(geo.lam, geo.lam.I[0], 0)
    par = build_parallelism(geo, gs)
    c1 = family_checksum(geo, par.spreads)
    # member order does not matter
    assert family_checksum(geo, tuple(reversed(par.spreads))) == c1
    # every valid parallelism covers the same line set, so the cover
    # fingerprint agrees; a damaged multiset does not
    other = build_parallelism(geo, dual(gs))
    assert family_checksum(geo, other.spreads) == c1
    damaged = list(par.spreads)
    damaged[0] = Spread(lines=damaged[0].lines[:-1], alpha=geo.eta)
    assert family_checksum(geo, damaged) != c1


def test_q7_pipeline_end_to_end():
    # one full build/verify/recover pass at the largest suite q
    geo = geometry_for_q(7)
    gs = fixed_plane_good_set(geo.lam, geo.lam.I[0], 0)
    par = build_parallelism(geo, gs)
    assert len(par) == 57
    cert = verify_parallelism(geo, par)
    assert cert.ok and cert.line_count == 50 * 57
    res = characterize(geo, par)
    assert res.ok and res.good_set == flip_canonical(geo.lam, gs)


def test_parallelism_key_identity():
    geo = geometry_for_q(3)
    lam = geo.lam
    sets = list(enumerate_good_sets(lam))
    keys = {build_parallelism(geo, gs).key() for gs in sets}
    classes = {flip_canonical(lam, gs) for gs in sets}
    assert len(keys) == len(classes) == 4
