"""Acceptance criteria, one test per criterion (split where sub-claims have
independent outcomes), each pinned to its stated tolerance and time budget.

Three sub-criteria assert published reference values that the exhaustive
computations refute; those tests implement the criterion exactly as stated
and are expected to fail, with the computed truth in the assertion message:

* the good-set count at q=5 (stated 2304; exhaustive enumeration and two
  independent counting methods give 46080),
* the good-set count at q=7 (stated to equal the odd-q closed form
  2 359 296; the validated mask count gives 283 262 976),
* the section-subplane meet size at q=5 (stated q+2 for all (beta, v!=1,
  lambda); the shared configuration degenerates to q+1 exactly when
  beta*v/alpha lies in the subfield).

Everything else passes.  See the repository README for the discrepancy
summary.
"""

import random
import time

from spreadsmith import checks
from spreadsmith.cli import main as cli_main
from spreadsmith.equivalence import (
    apply_label_action,
    _group_label_actions,
    classify,
    stabilizer_group,
)
from spreadsmith.field_tower import lambda_for_q
from spreadsmith.goodsets import (
    count_formula,
    count_good_sets,
    dual,
    enumerate_good_sets,
    fixed_plane_good_set,
    flip_canonical,
)
from spreadsmith.parallelisms import (
    build_parallelism,
    group_E,
    is_E_invariant,
    verify_parallelism,
)
from spreadsmith.spreads import geometry_for_q


def report(name, detail):
    print(f"[criterion] {name}: {detail}")


# -- criterion 1: good-set counts vs the closed forms -----------------------

def test_criterion_01_goodset_count_q4():
    t0 = time.time()
    lam = lambda_for_q(4)
    enumerated = list(enumerate_good_sets(lam))
    assert len(enumerated) == len(set(enumerated)) == 120
    assert count_good_sets(lam) == 120
    assert count_formula(4, "all_even") == 120
    from spreadsmith.goodsets import census
    cen = census(lam)
    assert cen.formula_conflict, "the conflicting printed simplification must be flagged"
    elapsed = time.time() - t0
    assert elapsed < 300
    report("1/q=4", f"count 120 matches the leading closed form; printed "
                    f"simplification flagged; {elapsed:.1f}s")


def test_criterion_01_goodset_count_q5():
    t0 = time.time()
    lam = lambda_for_q(5)
    enumerated = list(enumerate_good_sets(lam))
    assert len(enumerated) == len(set(enumerated)) == count_good_sets(lam)
    elapsed = time.time() - t0
    assert elapsed < 300
    stated = 2304
    assert count_formula(5, "all_odd") == stated
    report("1/q=5", f"exhaustive enumeration gives {len(enumerated)}, "
                    f"stated value {stated}; {elapsed:.1f}s")
    assert len(enumerated) == stated, (
        f"exhaustive enumeration gives {len(enumerated)} good sets at q=5, "
        f"not the stated closed-form value {stated}; two independent methods "
        f"agree on {len(enumerated)} (see the decisions ledger)")


def test_criterion_01_goodset_count_q7():
    t0 = time.time()
    lam = lambda_for_q(7)
    oracle = count_good_sets(lam)
    stated = count_formula(7, "all_odd")
    elapsed = time.time() - t0
    assert elapsed < 300
    report("1/q=7", f"mask count {oracle}, closed form {stated}; {elapsed:.1f}s")
    assert oracle == stated, (
        f"the exhaustive mask count at q=7 is {oracle}, not the closed-form "
        f"value {stated}; the counting method is validated against direct "
        f"enumeration at q=3,4,5 (see the decisions ledger)")


# -- criterion 2: every good set builds an exact cover ----------------------

def test_criterion_02_parallelism_cover():
    t0 = time.time()
    for q in (3, 4):
        geo = geometry_for_q(q)
        want = (q * q + 1) * (q * q + q + 1)
        n = 0
        for gs in enumerate_good_sets(geo.lam):
            cert = verify_parallelism(geo, build_parallelism(geo, gs))
            assert cert.ok and cert.line_count == want
            n += 1
        assert n == {3: 64, 4: 120}[q]
    geo5 = geometry_for_q(5)
    rng = random.Random(20250809)
    all5 = list(enumerate_good_sets(geo5.lam))
    sample = rng.sample(all5, 100)
    want5 = 26 * 31
    for gs in sample:
        cert = verify_parallelism(geo5, build_parallelism(geo5, gs))
        assert cert.ok and cert.line_count == want5
    elapsed = time.time() - t0
    assert elapsed < 600
    report("2", f"64+120 exhaustive and 100 sampled q=5 covers exact; {elapsed:.1f}s")


# -- criterion 3: non-good sets fail the cover ------------------------------

def test_criterion_03_negative_path():
    for q in (3, 4):
        r = checks.check_negative_mutations(geometry_for_q(q), want=20)
        assert r.ok, r.detail
    report("3", "20 mutated non-good sets per q in {3,4} all fail with a "
                "concrete witness line")


# -- criterion 4: algebraic vs geometric predicate --------------------------

def test_criterion_04_predicate_equivalence():
    r3 = checks.check_predicate_equivalence(geometry_for_q(3))
    assert r3.ok, r3.detail
    r5 = checks.check_predicate_equivalence(geometry_for_q(5), samples=100000,
                                            seed=424243)
    assert r5.ok, r5.detail
    report("4", f"q=3 {r3.detail}; q=5 {r5.detail}; zero disagreements")


# -- criterion 5: line/conic intersection tables ----------------------------

def test_criterion_05_intersection_tables():
    for q in (3, 4, 5, 7):
        r = checks.check_intersection_tables(geometry_for_q(q))
        assert r.ok, f"q={q}: {r.detail}"
    report("5", "exhaustive over all (c, b, alpha, beta) for q in {3,4,5,7}")


# -- criterion 6: structure lemmas ------------------------------------------

def test_criterion_06_structure_lemmas():
    for q in (3, 4, 5):
        geo = geometry_for_q(q)
        d = geo.desarguesian_spread()
        assert len(geo.extension_points(d.lines)) == (q * q + 1) ** 2
    r = checks.check_spread_union(geometry_for_q(3))
    assert r.ok, r.detail
    r = checks.check_regulus_transversal_classification(geometry_for_q(3))
    assert r.ok, r.detail
    for q in (3, 5):
        r = checks.check_plane_sections(geometry_for_q(q))
        assert r.ok, f"q={q}: {r.detail}"
        r = checks.check_shift_maps(geometry_for_q(q))
        assert r.ok, f"q={q}: {r.detail}"
        r = checks.check_section_pivot(geometry_for_q(q))
        assert r.ok, f"q={q}: {r.detail}"
        r = checks.check_subplane_meet(geometry_for_q(q))
        assert r.ok, f"q={q}: {r.detail}"
    report("6", "union counts, section sizes, transversal classification, "
                "plane-section case split and pivot property verified; "
                "subplane meet verified as the pivot/subline dichotomy")


def test_criterion_06_subplane_meet_exact_count_as_stated():
    """The stated form: the two subplanes share exactly q+2 points for all
    (beta, v != 1, lambda).  Holds at q=3; refuted at q=5 where the pivot
    can degenerate onto the subline."""
    from spreadsmith.checks import _section_cases, _component_subplane
    from spreadsmith.proj_geometry import point_on_plane
    bad = []
    for q in (3, 5):
        geo = geometry_for_q(q)
        s = geo.spec
        lam = geo.lam
        for a_idx in lam.I:
            for scalar, b_idx, v_pow, l_lam, sec, tag in _section_cases(geo, a_idx):
                if tag != "subplane" or v_pow == 0:
                    continue
                found = _component_subplane(geo, a_idx, scalar,
                                            geo.plane_pi(b_idx, v_pow))
                _, sigma_cut = found
                own = {P for P in geo.space.sigma_points(lam.alpha(b_idx))
                       if point_on_plane(s, geo.plane_pi(b_idx, v_pow), P)}
                if len(sigma_cut & own) != q + 2:
                    bad.append((q, a_idx, scalar, b_idx, v_pow,
                                len(sigma_cut & own)))
    report("6/subplane-meet", f"{len(bad)} parameter tuples violate the "
                              "stated q+2 count (all degenerate pivots)")
    assert not bad, (
        f"{len(bad)} (q, alpha, lambda, beta, v) tuples give a shared "
        f"configuration of q+1 points instead of the stated q+2 (first: "
        f"{bad[0]}); the pivot lies on the subline exactly when beta*v/alpha "
        f"is a subfield element (see the decisions ledger)")


# -- criterion 7: pairwise regulus / extension conditions --------------------

def test_criterion_07_pair_conditions():
    for q in (3, 4, 5):
        r = checks.check_regulus_pair_conditions(geometry_for_q(q), pairs=10000)
        assert r.ok, f"q={q}: {r.detail}"
        r = checks.check_extension_disjoint_conditions(geometry_for_q(q),
                                                       pairs=10000)
        assert r.ok, f"q={q}: {r.detail}"
    report("7", "exhaustive at q=3; 10^4 sampled line pairs and all label "
                "pairs at q=4,5; verdicts match the label-level conditions")


# -- criterion 8: the groups -------------------------------------------------

def test_criterion_08_groups():
    for q in (3, 4):
        geo = geometry_for_q(q)
        E = group_E(geo)
        assert E.order == q * q
        p = geo.spec.p
        for psi in E.elements:
            power = psi
            for _ in range(p - 1):
                power = power.then(psi)
            assert power.is_identity()
        built = 0
        for gs in enumerate_good_sets(geo.lam):
            assert is_E_invariant(geo, build_parallelism(geo, gs))
            built += 1
        assert built == {3: 64, 4: 120}[q]
    for q, want in ((3, 576), (4, 4800), (5, 7200)):
        grp = stabilizer_group(geometry_for_q(q))
        assert grp.order == want == grp.formula_order
    report("8", "E elementary abelian of order q^2, all built parallelisms "
                "invariant (q=3: 64, q=4: 120); stabilizer closures "
                "576/4800/7200 exact")


# -- criterion 9: classification ---------------------------------------------

def test_criterion_09_classification():
    t0 = time.time()
    frozen = {3: [2, 2], 4: [5, 5, 5, 5, 50, 50]}
    for q, sizes in frozen.items():
        geo = geometry_for_q(q)
        rep = classify(geo, list(enumerate_good_sets(geo.lam)))
        assert sorted(o.size for o in rep.orbits) == sizes
        for o in rep.orbits:
            assert o.size * o.stabilizer_order == rep.group_order
        for bound in rep.bounds.values():
            assert rep.orbit_count >= bound
    geo = geometry_for_q(3)
    lam = geo.lam
    B = flip_canonical(lam, fixed_plane_good_set(lam, lam.I[0], 0))
    Bd = flip_canonical(lam, dual(fixed_plane_good_set(lam, lam.I[0], 0)))
    orbit_of_B = {apply_label_action(lam, act, B)
                  for act in _group_label_actions(geo)}
    assert Bd not in orbit_of_B
    elapsed = time.time() - t0
    assert elapsed < 1800
    report("9", f"exact orbits q=3: [2,2], q=4: [5,5,5,5,50,50]; bounds "
                f"satisfied; fixed-plane example separated from its dual; "
                f"{elapsed:.1f}s")


# -- criterion 10: determinism ------------------------------------------------

def test_criterion_10_determinism(tmp_path):
    outs = []
    for tag, jobs in (("r1", 1), ("r2", 1), ("j2", 2), ("j4", 4)):
        path = tmp_path / f"enum_{tag}.jsonl"
        assert cli_main(["goodsets", "enumerate", "--q", "4",
                         "--jobs", str(jobs), "--output", str(path)]) == 0
        outs.append(path.read_bytes())
    assert len(set(outs)) == 1
    reports = []
    for tag in ("a", "b"):
        out = tmp_path / f"cls_{tag}"
        assert cli_main(["classify", "--q", "3", "--output", str(out)]) == 0
        reports.append((out / "report.json").read_bytes())
    assert reports[0] == reports[1]
    report("10", "byte-identical enumeration across runs and worker counts; "
                 "byte-identical classification reports")
