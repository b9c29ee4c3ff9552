"""Named verification suites over the whole construction: each suite checks
one structural fact (a partition, an intersection pattern, a case split, a
group order) by direct computation, exhaustively at small q and by seeded
sampling where the search space is larger.

Every suite returns a CheckResult; the command-line selftest prints one
line per suite and the pytest modules assert on the same functions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from spreadsmith.goodsets import (
    Candidate,
    G1Element,
    PlaneModel,
    apply_G1,
    candidate_universe,
    canonical,
    census,
    dual,
    enumerate_good_sets,
    enumerate_good_sets_parallel,
    fixed_plane_good_set,
    flip_canonical,
    is_good,
    is_good_geometric,
)
from spreadsmith.parallelisms import (
    assemble_spread_family,
    build_parallelism,
    characterize,
    group_E,
    is_E_invariant,
    verify_parallelism,
)
from spreadsmith.proj_geometry import (
    Collineation,
    line_in_plane,
    line_intersection,
    line_plane_meet,
    line_points,
    line_through,
    lines_meet,
    point_on_line,
    point_on_plane,
    tau_line,
)
from spreadsmith.spreads import Geometry
from spreadsmith.equivalence import (
    apply_label_action,
    are_equivalent,
    classify,
    full_stabilizer_group,
    label_action,
    stabilizer_group,
)


@dataclass
class CheckResult:
    name: str
    q: int
    ok: bool
    detail: str = ""

    def line(self) -> str:
        mark = "pass" if self.ok else "FAIL"
        return f"[{mark}] q={self.q} {self.name}: {self.detail}"


def _fail(name, q, detail):
    return CheckResult(name, q, False, detail)


def _ok(name, q, detail=""):
    return CheckResult(name, q, True, detail)


# ---------------------------------------------------------------------------
# field level


def check_field_automorphism(geo: Geometry, seed: int = 0) -> CheckResult:
    """Conjugation x -> x^q: involutory automorphism fixing exactly the
    subfield; the norm is multiplicative and lands in the subfield."""
    name = "field-automorphism"
    s = geo.spec
    rng = random.Random(seed)
    pairs = ([(a, b) for a in range(s.order) for b in range(s.order)]
             if s.q <= 5 else
             [(rng.randrange(s.order), rng.randrange(s.order)) for _ in range(4000)])
    for a, b in pairs:
        if s.frobenius(s.add(a, b)) != s.add(s.frobenius(a), s.frobenius(b)):
            return _fail(name, s.q, f"additivity fails at {(a, b)}")
        if s.frobenius(s.mul(a, b)) != s.mul(s.frobenius(a), s.frobenius(b)):
            return _fail(name, s.q, f"multiplicativity fails at {(a, b)}")
        if s.norm(s.mul(a, b)) != s.mul(s.norm(a), s.norm(b)):
            return _fail(name, s.q, f"norm not multiplicative at {(a, b)}")
    fixed = [x for x in range(s.order) if s.frobenius(x) == x]
    if sorted(fixed) != list(range(s.q)):
        return _fail(name, s.q, "fixed set of conjugation is not the subfield")
    if any(s.frobenius(s.frobenius(x)) != x for x in range(s.order)):
        return _fail(name, s.q, "conjugation is not an involution")
    if any(not s.in_subfield(s.norm(x)) for x in range(s.order)):
        return _fail(name, s.q, "norm leaves the subfield")
    circle = [x for x in range(1, s.order) if s.norm(x) == 1]
    if sorted(circle) != sorted(s.unit_circle()) or len(circle) != s.q + 1:
        return _fail(name, s.q, "unit circle mismatch")
    return _ok(name, s.q, f"{len(pairs)} pairs, circle size {s.q + 1}")


def check_norm_partition(geo: Geometry) -> CheckResult:
    """The three-part partition of the nonzero subfield with A disjoint
    from its inverses (and from its negatives for odd q)."""
    name = "norm-partition"
    s = geo.spec
    part = geo.lam.partition
    q = s.q
    A, Ainv = set(part.A), set(part.A_inv)
    units = set(part.units_part)
    if A & Ainv:
        return _fail(name, q, "A meets its inverse set")
    if units | A | Ainv != set(range(1, q)):
        return _fail(name, q, "parts do not cover the nonzero subfield")
    if len(units) + len(A) + len(Ainv) != q - 1:
        return _fail(name, q, "parts overlap")
    if q % 2:
        if units != {1, s.minus_one()}:
            return _fail(name, q, "unit part must be {1,-1}")
        if any(s.neg(a) in A for a in A):
            return _fail(name, q, "A meets -A")
        want_t = (q - 3) // 2
    else:
        if units != {1}:
            return _fail(name, q, "unit part must be {1}")
        want_t = (q - 2) // 2
    if part.t != want_t or len(A) != want_t:
        return _fail(name, q, f"t = {part.t}, expected {want_t}")
    return _ok(name, q, f"t = {part.t}")


def check_lambda_classes(geo: Geometry) -> CheckResult:
    """Sizes and closure properties of the I classes: inverse-norm flip,
    negated-norm exclusion, and the square/nonsquare split."""
    name = "lambda-classes"
    lam = geo.lam
    s = geo.spec
    q = s.q
    norms = [lam.norm_of(k) for k in range(q - 1)]
    if len(set(norms)) != q - 1:
        return _fail(name, q, "norms not pairwise distinct")
    if s.norm(lam.eta) != 1 or lam.eta_index in lam.I:
        return _fail(name, q, "eta must have norm 1 and avoid the I class")
    want = (q - 2) // 2 if q % 2 == 0 else (q - 1) // 2
    if len(lam.I) != want:
        return _fail(name, q, f"|I| = {len(lam.I)}, expected {want}")
    for k in range(q - 1):
        j = lam.inverse_norm_index(k)
        if s.mul(norms[k], norms[j]) != 1:
            return _fail(name, q, "inverse-norm partner wrong")
        if norms[k] not in (1, s.minus_one()):
            if (k in lam.I) == (j in lam.I):
                return _fail(name, q, f"I membership does not flip at index {k}")
    if q % 2:
        for k in lam.I:
            if lam.negated_norm_index(k) in lam.I:
                return _fail(name, q, "negated norm stayed in I")
        i1, i2 = len(lam.I1), len(lam.I2)
        want12 = ((q - 1) // 4, (q - 1) // 4) if q % 4 == 1 else ((q - 3) // 4, (q + 1) // 4)
        if (i1, i2) != want12:
            return _fail(name, q, f"|I1|,|I2| = {(i1, i2)}, expected {want12}")
        if set(lam.I1) | set(lam.I2) != set(lam.I) or set(lam.I1) & set(lam.I2):
            return _fail(name, q, "I1, I2 do not partition I")
    return _ok(name, q, f"|I| = {len(lam.I)}")


# ---------------------------------------------------------------------------
# subgeometry geometry


def check_baer_subgeometries(geo: Geometry) -> CheckResult:
    """Fixed-point sets of the involutions: sizes, pairwise disjointness,
    transversal avoidance; at q = 3 the subline counts of every ambient
    line against the stability predicate."""
    name = "baer-subgeometries"
    s = geo.spec
    q = s.q
    lam = geo.lam
    space = geo.space
    for k in range(q - 1):
        alpha = lam.alpha(k)
        sig = space.sigma_points(alpha)
        if len(sig) != (q + 1) * (q * q + 1):
            return _fail(name, q, f"wrong subgeometry size at index {k}")
        for P in line_points(s, space.t1) + line_points(s, space.t2):
            if P in sig:
                return _fail(name, q, "transversal line meets a subgeometry")
    for k1, k2 in combinations(range(q - 1), 2):
        if space.sigma_points(lam.alpha(k1)) & space.sigma_points(lam.alpha(k2)):
            return _fail(name, q, f"subgeometries {k1},{k2} intersect")
    if q == 3:
        eta = geo.eta
        sig = geo.sigma_eta
        for l in space.all_lines():
            cnt = sum(1 for P in line_points(s, l) if P in sig)
            if cnt not in (0, 1, 2, q + 1):
                return _fail(name, q, f"line meets subgeometry in {cnt} points")
            if space.is_baer_subline(l, eta) != (cnt == q + 1):
                return _fail(name, q, "stability predicate disagrees with point count")
        detail = "exhaustive over all ambient lines"
    else:
        detail = "sizes and disjointness"
    return _ok(name, q, detail)


def check_subline_extension(geo: Geometry) -> CheckResult:
    """A plane cutting one subgeometry in a subplane cuts every other in a
    spread subline; a line cutting one subgeometry in a subline outside
    its spread avoids every other subgeometry."""
    name = "subline-extension"
    s = geo.spec
    q = s.q
    lam = geo.lam
    space = geo.space
    checked = 0
    if q == 3:
        for k in range(q - 1):
            alpha = lam.alpha(k)
            sig = space.sigma_points(alpha)
            d_lines = {k2: set(geo._desarguesian_for(lam.alpha(k2)).lines)
                       for k2 in range(q - 1)}
            for pl in space.all_planes():
                sec = [P for P in sig if point_on_plane(s, pl, P)]
                if len(sec) != q * q + q + 1:
                    continue
                checked += 1
                for k2 in range(q - 1):
                    if k2 == k:
                        continue
                    other = [P for P in space.sigma_points(lam.alpha(k2))
                             if point_on_plane(s, pl, P)]
                    if len(other) != q + 1:
                        return _fail(name, q, "cross section size wrong")
                    l = line_through(s, other[0], other[1])
                    if any(not point_on_line(s, l, P) for P in other):
                        return _fail(name, q, "cross section not collinear")
                    if l not in d_lines[k2]:
                        return _fail(name, q, "cross section not a spread line")
        probe = geo.line_set_L()
    else:
        for a in lam.I:
            for v in (0, 1):
                pl = geo.plane_pi(a, v)
                for k2 in range(q - 1):
                    if k2 == a:
                        continue
                    other = [P for P in space.sigma_points(lam.alpha(k2))
                             if point_on_plane(s, pl, P)]
                    if len(other) != q + 1:
                        return _fail(name, q, "cross section size wrong")
                    l = line_through(s, other[0], other[1])
                    if l not in set(geo._desarguesian_for(lam.alpha(k2)).lines):
                        return _fail(name, q, "cross section not a spread line")
                checked += 1
        probe = geo.line_set_L()[: 4 * (q + 1)]
    for l in probe:
        k = geo.label_of(l)[0]
        for k2 in range(q - 1):
            if k2 != k and any(P in space.sigma_points(lam.alpha(k2))
                               for P in line_points(s, l)):
                return _fail(name, q, "pencil line meets a second subgeometry")
    return _ok(name, q, f"{checked} subplane sections, {len(probe)} lines")


def check_spread_union(geo: Geometry) -> CheckResult:
    """The union of the extended Desarguesian lines has (q^2+1)^2 points
    and every plane cuts it in q^2+1 or 2q^2+1 points, the larger case
    splitting as one spread line plus a transversal or one subplane."""
    name = "spread-union-sections"
    s = geo.spec
    q = s.q
    d = geo.desarguesian_spread()
    ext = geo.extension_points(d.lines)
    if len(ext) != (q * q + 1) ** 2:
        return _fail(name, q, f"extension union has {len(ext)} points")
    if q != 3:
        return _ok(name, q, "union size (plane sections exhaustive at q=3)")
    lam = geo.lam
    space = geo.space
    t1_pts = set(line_points(s, space.t1))
    t2_pts = set(line_points(s, space.t2))
    sizes_seen = set()
    for pl in space.all_planes():
        sec = {P for P in ext if point_on_plane(s, pl, P)}
        if len(sec) not in (q * q + 1, 2 * q * q + 1):
            return _fail(name, q, f"plane section of size {len(sec)}")
        sizes_seen.add(len(sec))
        if len(sec) == 2 * q * q + 1:
            inside = [l for l in d.lines if line_in_plane(s, l, pl)]
            if len(inside) != 1:
                return _fail(name, q, "large section without a unique spread line")
            lpts = set(line_points(s, inside[0]))
            residue_ok = any(
                sec == lpts | cand and len(cand) == q * q + 1
                for cand in (t1_pts & sec, t2_pts & sec))
            if not residue_ok:
                for k in range(q - 1):
                    cut = {P for P in space.sigma_points(lam.alpha(k))
                           if point_on_plane(s, pl, P)}
                    if len(cut) == q * q + q + 1 and sec == lpts | cut:
                        residue_ok = True
                        break
            if not residue_ok:
                return _fail(name, q, "large section does not decompose")
    if sizes_seen != {q * q + 1, 2 * q * q + 1}:
        return _fail(name, q, f"section sizes seen: {sizes_seen}")
    return _ok(name, q, "exhaustive over all planes")


def check_regulus_transversal_classification(geo: Geometry) -> CheckResult:
    """Every ambient line meeting all extended lines of a spread regulus
    through the distinguished line is a transversal line or cuts exactly
    one subgeometry in a non-spread subline, and meets r_U1 once."""
    name = "regulus-transversal-classification"
    s = geo.spec
    q = s.q
    if q != 3:
        return _ok(name, q, "exhaustive only at q=3 (skipped)")
    lam = geo.lam
    space = geo.space
    reguli = geo.reguli_through_r_U1()
    if len(reguli) != q * q + q:
        return _fail(name, q, f"{len(reguli)} reguli through the line")
    all_lines = space.all_lines()
    for reg in reguli[:4]:
        transversals = [l for l in all_lines
                        if all(lines_meet(s, l, r) for r in reg.lines)]
        if len(transversals) != q * q + 1:
            return _fail(name, q, f"{len(transversals)} ambient transversals")
        for l in transversals:
            if l in (space.t1, space.t2):
                continue
            hits = [k for k in range(q - 1)
                    if space.is_baer_subline(l, lam.alpha(k))]
            if len(hits) != 1:
                return _fail(name, q, f"transversal cuts {len(hits)} subgeometries")
            if l in set(geo._desarguesian_for(lam.alpha(hits[0])).lines):
                return _fail(name, q, "transversal subline lies in its spread")
            if line_intersection(s, l, space.r_U1) is None:
                return _fail(name, q, "transversal misses r_U1")
    return _ok(name, q, f"{len(reguli)} reguli, 4 fully classified")


def check_pencils_and_line_family(geo: Geometry) -> CheckResult:
    """Pencil sizes, r_U1 membership, family size |I| q (q+1)^2, stability
    of members, and avoidance of the distinguished subgeometry."""
    name = "pencil-line-family"
    s = geo.spec
    q = s.q
    lam = geo.lam
    L = geo.line_set_L()
    want = len(lam.I) * q * (q + 1) ** 2
    if len(L) != want:
        return _fail(name, q, f"|family| = {len(L)}, expected {want}")
    for a in lam.I:
        alpha = lam.alpha(a)
        for u in range(q + 1):
            for v in range(q + 1):
                pen = geo.pencil(a, u, v)
                if len(pen.lines) != q + 1 or geo.space.r_U1 not in pen.lines:
                    return _fail(name, q, f"pencil {(a, u, v)} malformed")
                for l in pen.lines:
                    if tau_line(s, alpha, l) != l:
                        return _fail(name, q, "pencil member not stable")
                    if not point_on_line(s, l, pen.base_point):
                        return _fail(name, q, "pencil member misses base point")
                    if not line_in_plane(s, l, pen.plane):
                        return _fail(name, q, "pencil member leaves the plane")
    sig = geo.sigma_eta
    probe = L if q == 3 else L[:60]
    for l in probe:
        if any(P in sig for P in line_points(s, l)):
            return _fail(name, q, "family line meets the distinguished subgeometry")
    return _ok(name, q, f"{len(L)} lines in {len(lam.I) * (q + 1)**2} pencils")


def check_transversal_spreads(geo: Geometry, sample: int = 40, seed: int = 0) -> CheckResult:
    """Spreads induced by family transversals: valid spreads sharing a
    regulus through r_U1 with the Desarguesian spread; the conjugate
    transversal induces the same spread."""
    name = "transversal-spreads"
    q = geo.q
    rng = random.Random(seed)
    L = list(geo.line_set_L())
    probe = L if q <= 4 else rng.sample(L, sample)
    d_lines = set(geo.desarguesian_spread().lines)
    if geo.spread_from_transversal(geo.space.t1).key() != geo.desarguesian_spread().key():
        return _fail(name, q, "transversal t1 does not rebuild the spread")
    for l in probe:
        sp = geo.spread_from_transversal(l)
        rep = geo.is_spread(sp.lines)
        if not rep.ok:
            return _fail(name, q, f"induced family is not a spread: {rep.reason}")
        common = set(sp.lines) & d_lines
        if len(common) != q + 1 or geo.space.r_U1 not in common:
            return _fail(name, q, "shared lines are not a regulus through r_U1")
        if geo.spread_from_transversal(geo.tau_eta_line(l)).key() != sp.key():
            return _fail(name, q, "conjugate transversal changes the spread")
    return _ok(name, q, f"{len(probe)} transversals")


def check_hall_spreads(geo: Geometry, sample: int = 30, seed: int = 1) -> CheckResult:
    """Regulus switching: the switched family is a spread disjoint from the
    Desarguesian one, differing from its source in 2(q+1) lines; the
    opposite of the opposite is the regulus and incidences are exact."""
    name = "hall-spreads"
    s = geo.spec
    q = geo.q
    rng = random.Random(seed)
    L = list(geo.line_set_L())
    probe = L if q <= 4 else rng.sample(L, sample)
    d_lines = set(geo.desarguesian_spread().lines)
    for l in probe:
        reg = geo.regulus_of(l)
        opp = geo.opposite_regulus(reg)
        if geo.opposite_regulus(opp) != reg:
            return _fail(name, q, "double opposite is not the identity")
        for a in reg.lines:
            for b in opp.lines:
                pt = line_intersection(s, a, b)
                if pt is None or pt not in geo.sigma_eta:
                    return _fail(name, q, "regulus/opposite incidence broken")
        h = geo.hall_spread(l)
        rep = geo.is_spread(h.lines)
        if not rep.ok:
            return _fail(name, q, f"switched family is not a spread: {rep.reason}")
        if set(h.lines) & d_lines:
            return _fail(name, q, "switched spread meets the Desarguesian one")
        src = geo.spread_from_transversal(l)
        if len(set(h.lines) ^ set(src.lines)) != 2 * (q + 1):
            return _fail(name, q, "switch did not replace exactly one regulus")
    return _ok(name, q, f"{len(probe)} switched spreads")


def check_desarguesian_property(geo: Geometry, sample: int = 50, seed: int = 3) -> CheckResult:
    """External subgeometry lines meet the spread in a regulus: the q+1
    spread lines they touch admit a full set of common transversals."""
    name = "desarguesian-regulus-property"
    s = geo.spec
    q = geo.q
    rng = random.Random(seed)
    d = geo.desarguesian_spread()
    d_set = set(d.lines)
    universe = [l for l in geo.sigma_eta_lines() if l not in d_set]
    probe = rng.sample(universe, min(sample, len(universe)))
    for l in probe:
        touched = [m for m in d.lines if lines_meet(s, m, l)]
        if len(touched) != q + 1:
            return _fail(name, q, f"external line meets {len(touched)} spread lines")
        if len(geo.transversals_of(touched)) != q + 1:
            return _fail(name, q, "touched lines admit no full transversal set")
    return _ok(name, q, f"{len(probe)} external lines")


# ---------------------------------------------------------------------------
# plane sections of the shifted spread family


def _shift_image(geo: Geometry, a_idx: int, scalar: int, k: int) -> frozenset:
    """Image of the k-th Baer component under the composite shift map."""
    cache = getattr(geo, "_shift_images", None)
    if cache is None:
        cache = {}
        geo._shift_images = cache
    key = (a_idx, scalar, k)
    if key not in cache:
        phi_l = geo.phi_lambda_map(a_idx, scalar)
        cache[key] = frozenset(phi_l.apply_point(P)
                               for P in geo.space.sigma_points(geo.lam.alpha(k)))
    return cache[key]


def _component_subplane(geo: Geometry, a_idx: int, scalar: int, plane):
    """The unique shifted component cutting the plane in a Baer subplane,
    as (component index, point set); None if there is not exactly one."""
    s = geo.spec
    q = geo.q
    matches = []
    for k in range(q - 1):
        img = _shift_image(geo, a_idx, scalar, k)
        cut = {P for P in img if point_on_plane(s, plane, P)}
        if len(cut) == q * q + q + 1:
            matches.append((k, cut))
    return matches[0] if len(matches) == 1 else None


def _section_cases(geo: Geometry, a_idx: int):
    """(scalar, beta_idx, v_pow, shifted line, section points, case tag)
    for every distinguished plane against every shifted spread."""
    s = geo.spec
    q = geo.q
    lam = geo.lam
    alpha = lam.alpha(a_idx)
    minus1 = s.minus_one()
    for scalar in range(q):
        l_lam = geo.l_lambda(a_idx, scalar)
        sp = geo.spread_from_transversal(l_lam)
        for b_idx in lam.I:
            for v_pow in range(q + 1):
                pl = geo.plane_pi(b_idx, v_pow)
                sec: set = set()
                for l in sp.lines:
                    hit = line_plane_meet(s, l, pl)
                    if hit is None:
                        sec.update(line_points(s, l))
                    else:
                        sec.add(hit)
                v = geo.U[v_pow]
                if (b_idx, v) == (a_idx, 1):
                    tag = "contains-shifted-line"
                elif (q % 2 and s.norm(alpha) == minus1
                      and b_idx == a_idx and v == minus1):
                    tag = "contains-conjugate-line"
                else:
                    tag = "subplane"
                yield scalar, b_idx, v_pow, l_lam, sec, tag


def check_plane_sections(geo: Geometry) -> CheckResult:
    """Sections of the extended shifted spreads with the distinguished
    planes: always 2q^2+1 points; the residue past r_U1 is the shifted
    line, its conjugate, or a Baer subplane of the predicted component."""
    name = "shifted-spread-plane-sections"
    s = geo.spec
    q = geo.q
    lam = geo.lam
    r_pts = set(line_points(s, geo.space.r_U1))
    cases = 0
    for a_idx in lam.I:
        alpha = lam.alpha(a_idx)
        for scalar, b_idx, v_pow, l_lam, sec, tag in _section_cases(geo, a_idx):
            cases += 1
            if len(sec) != 2 * q * q + 1:
                return _fail(name, q, f"section size {len(sec)}")
            if not r_pts <= sec:
                return _fail(name, q, "section misses r_U1")
            if tag == "contains-shifted-line":
                if sec != r_pts | set(line_points(s, l_lam)):
                    return _fail(name, q, "section is not r_U1 + shifted line")
                continue
            if tag == "contains-conjugate-line":
                lt = geo.tau_eta_line(l_lam)
                if sec != r_pts | set(line_points(s, lt)):
                    return _fail(name, q, "section is not r_U1 + conjugate line")
                continue
            beta = lam.alpha(b_idx)
            v = geo.U[v_pow]
            num = s.sub(s.mul(beta, v), alpha)
            den = s.sub(s.mul(s.mul(beta, s.frobenius(alpha)), v), 1)
            if num == 0 or den == 0:
                return _fail(name, q, "degenerate component predictor")
            found = _component_subplane(geo, a_idx, scalar, geo.plane_pi(b_idx, v_pow))
            if found is None:
                return _fail(name, q, "no unique component subplane in section")
            k, cut = found
            if s.norm(lam.alpha(k)) != s.norm(s.div(num, den)):
                return _fail(name, q, "wrong component cut by the plane")
            if sec != r_pts | cut:
                return _fail(name, q, "section residue is not the subplane")
    return _ok(name, q, f"{cases} (shift, plane) sections")


def check_shift_maps(geo: Geometry) -> CheckResult:
    """The maps behind the shifted spreads: the mixing map fixes the
    distinguished subgeometry and r_U1 and carries the transversal pair to
    the scalar-0 line pair; the unitriangular shift fixes r_U1 pointwise,
    every component and every distinguished plane, and translates the
    line family; their composite carries the Desarguesian spread over."""
    name = "shift-maps"
    s = geo.spec
    q = geo.q
    lam = geo.lam
    for a_idx in lam.I:
        phi = geo.phi_map(a_idx)
        sig = geo.sigma_eta
        if {phi.apply_point(P) for P in sig} != sig:
            return _fail(name, q, "mixing map moves the distinguished subgeometry")
        if phi.apply_line(geo.space.r_U1) != geo.space.r_U1:
            return _fail(name, q, "mixing map moves r_U1")
        l0 = geo.l_lambda(a_idx, 0)
        if phi.apply_line(geo.space.t1) != l0:
            return _fail(name, q, "mixing map misses the scalar-0 line")
        if phi.apply_line(geo.space.t2) != geo.tau_eta_line(l0):
            return _fail(name, q, "mixing map misses the conjugate line")
        for scalar in range(q):
            xi = geo.xi_map(scalar)
            for P in line_points(s, geo.space.r_U1):
                if xi.apply_point(P) != P:
                    return _fail(name, q, "shift moves a point of r_U1")
            for k in list(range(q - 1))[:3]:
                comp = geo.space.sigma_points(lam.alpha(k))
                if {xi.apply_point(P) for P in comp} != comp:
                    return _fail(name, q, "shift moves a component")
            for v_pow in range(q + 1):
                pl = geo.plane_pi(a_idx, v_pow)
                if xi.apply_plane(pl) != pl:
                    return _fail(name, q, "shift moves a distinguished plane")
            if xi.apply_line(l0) != geo.l_lambda(a_idx, scalar):
                return _fail(name, q, "shift misplaces the line family")
            phi_l = geo.phi_lambda_map(a_idx, scalar)
            img = {phi_l.apply_line(l) for l in geo.desarguesian_spread().lines}
            sp = geo.spread_from_transversal(geo.l_lambda(a_idx, scalar))
            if img != set(sp.lines):
                return _fail(name, q, "composite map misses the shifted spread")
            ext = geo.extension_points(sp.lines)
            union = set(line_points(s, geo.l_lambda(a_idx, scalar)))
            union |= set(line_points(s, geo.tau_eta_line(geo.l_lambda(a_idx, scalar))))
            for k in range(q - 1):
                union |= _shift_image(geo, a_idx, scalar, k)
            if ext != union:
                return _fail(name, q, "extension union is not components plus directors")
    return _ok(name, q, "all shift and component cases")


def check_subplane_meet(geo: Geometry) -> CheckResult:
    """The section subplane and the plane's own Baer subplane share the
    predicted pivot point together with the predicted subline (the shift
    image of the explicit trace-zero subline): q+2 points in general, and
    q+1 exactly when the pivot degenerates onto the subline, which happens
    iff beta*v/alpha lies in the subfield."""
    name = "section-subplane-meet"
    s = geo.spec
    q = geo.q
    lam = geo.lam
    from spreadsmith.proj_geometry import normalize
    trace_zero = [x for x in range(s.order) if s.add(x, s.frobenius(x)) == 0]
    cases = degenerate = 0
    for a_idx in lam.I:
        alpha = lam.alpha(a_idx)
        for scalar, b_idx, v_pow, l_lam, sec, tag in _section_cases(geo, a_idx):
            if tag != "subplane" or v_pow == 0:
                continue
            cases += 1
            beta = lam.alpha(b_idx)
            v = geo.U[v_pow]
            pl = geo.plane_pi(b_idx, v_pow)
            found = _component_subplane(geo, a_idx, scalar, pl)
            if found is None:
                return _fail(name, q, "missing section subplane")
            _, sigma_cut = found
            own = {P for P in geo.space.sigma_points(beta)
                   if point_on_plane(s, pl, P)}
            shared = sigma_cut & own
            pivot_c = s.mul(s.div(s.mul(s.frobenius(beta), alpha),
                                  s.frobenius(alpha)), s.frobenius(v))
            pivot = (1, 0, pivot_c, 0)
            bv = s.mul(beta, v)
            xi = geo.xi_map(scalar)
            subline = set()
            for x in trace_zero:
                for y in trace_zero:
                    if x or y:
                        subline.add(xi.apply_point(
                            normalize(s, (x, y, s.mul(bv, x), s.mul(bv, y)))))
            if len(subline) != q + 1:
                return _fail(name, q, f"predicted subline has {len(subline)} points")
            if shared != subline | {pivot}:
                return _fail(name, q, "configuration is not pivot + subline")
            pivot_on_subline = s.in_subfield(s.div(bv, alpha))
            want = q + 1 if pivot_on_subline else q + 2
            if len(shared) != want:
                return _fail(name, q,
                             f"shared configuration has {len(shared)} points, "
                             f"expected {want}")
            degenerate += pivot_on_subline
    return _ok(name, q, f"{cases} subplane pairs, {degenerate} with the pivot "
                        "on the subline")


def check_section_pivot(geo: Geometry) -> CheckResult:
    """A family line inside a distinguished plane that touches the shifted
    spread outside the shared regulus passes through the pivot point."""
    name = "section-pivot-point"
    s = geo.spec
    q = geo.q
    lam = geo.lam
    cases = 0
    for a_idx in lam.I:
        alpha = lam.alpha(a_idx)
        for scalar in range(q):
            l_lam = geo.l_lambda(a_idx, scalar)
            sp = geo.spread_from_transversal(l_lam)
            reg = geo.regulus_of(l_lam)
            diff = (geo.extension_points(sp.lines)
                    - geo.extension_points(reg.lines))
            for b_idx in lam.I:
                beta = lam.alpha(b_idx)
                for v_pow in range(q + 1):
                    v = geo.U[v_pow]
                    pivot_c = s.mul(s.div(s.mul(s.frobenius(beta), alpha),
                                          s.frobenius(alpha)), s.frobenius(v))
                    pivot = (1, 0, pivot_c, 0)
                    for u_pow in range(q + 1):
                        pen = geo.pencil(b_idx, u_pow, v_pow)
                        for l in pen.punctured(geo.space.r_U1):
                            if l == l_lam:
                                continue
                            cases += 1
                            pts = line_points(s, l)
                            if any(P in diff for P in pts) and pivot not in pts:
                                return _fail(
                                    name, q,
                                    f"line misses the pivot at {(a_idx, scalar, b_idx, v_pow)}")
    return _ok(name, q, f"{cases} line/section incidences")


# ---------------------------------------------------------------------------
# pairwise regulus / extension conditions on family lines


def _pair_data(geo: Geometry, l):
    cache = getattr(geo, "_pair_data_cache", None)
    if cache is None:
        cache = {}
        geo._pair_data_cache = cache
    got = cache.get(l)
    if got is None:
        label = geo.label_of(l)
        reg = geo.regulus_of(l)
        sp = geo.spread_from_transversal(l)
        outside = geo.extension_points(sp.lines) - geo.extension_points(reg.lines)
        got = (label, frozenset(reg.lines), frozenset(outside))
        cache[l] = got
    return got


def _sampled_ordered_pairs(geo: Geometry, count: int, seed: int):
    L = geo.line_set_L()
    rng = random.Random(seed)
    if geo.q == 3:
        return [(a, b) for a in L for b in L if a != b]
    out = []
    n = len(L)
    for _ in range(count):
        i = rng.randrange(n)
        j = rng.randrange(n - 1)
        if j >= i:
            j += 1
        out.append((L[i], L[j]))
    return out


def _ratio_form(geo, lab_i, lab_j) -> bool:
    """u_i v_j - u_j v_i != 0 on unit-circle exponents."""
    s = geo.spec
    U = geo.U
    ui, vi = U[lab_i[1]], U[lab_i[2]]
    uj, vj = U[lab_j[1]], U[lab_j[2]]
    return s.sub(s.mul(ui, vj), s.mul(uj, vi)) != 0


def _twisted_form(geo, lab_i, lab_j) -> bool:
    """a u_i (b v_j)^q - (a v_i)^q b u_j != 0 on full labels."""
    s = geo.spec
    U = geo.U
    lam = geo.lam
    alpha, beta = lam.alpha(lab_i[0]), lam.alpha(lab_j[0])
    ui, vi = U[lab_i[1]], U[lab_i[2]]
    uj, vj = U[lab_j[1]], U[lab_j[2]]
    lhs = s.mul(s.mul(alpha, ui), s.frobenius(s.mul(beta, vj)))
    rhs = s.mul(s.frobenius(s.mul(alpha, vi)), s.mul(beta, uj))
    return lhs != rhs


def _all_labels(geo):
    return [(a, u, v) for a in geo.lam.I
            for u in range(geo.q + 1) for v in range(geo.q + 1)]


def check_regulus_pair_conditions(geo: Geometry, pairs: int = 10000,
                                  seed: int = 11) -> CheckResult:
    """Shared spread-reguli across the line family.  Per line pair: equal
    labels or a nonzero unit cross form force distinct reguli.  Per label
    pair: some cross pair shares a regulus exactly when the labels differ
    and the form vanishes (the sharing is a partial matching, never the
    full pencil product)."""
    name = "regulus-pair-conditions"
    q = geo.q
    checked = 0
    for li, lj in _sampled_ordered_pairs(geo, pairs, seed):
        (lab_i, reg_i, _) = _pair_data(geo, li)
        (lab_j, reg_j, _) = _pair_data(geo, lj)
        checked += 1
        if (lab_i == lab_j or _ratio_form(geo, lab_i, lab_j)) \
                and li != lj and reg_i == reg_j:
            return _fail(name, q, f"regulus collision at labels {lab_i}, {lab_j}")
    labels = _all_labels(geo)
    agg = 0
    for lab_i in labels:
        pen_i = geo.pencil(*lab_i).punctured(geo.space.r_U1)
        regs_i = {geo.regulus_of(l).lines for l in pen_i}
        if len(regs_i) != q:
            return _fail(name, q, f"pencil {lab_i} repeats a regulus")
        for lab_j in labels:
            if lab_j <= lab_i:
                continue
            agg += 1
            pen_j = geo.pencil(*lab_j).punctured(geo.space.r_U1)
            regs_j = {geo.regulus_of(l).lines for l in pen_j}
            shares = bool(regs_i & regs_j)
            if shares == _ratio_form(geo, lab_i, lab_j):
                return _fail(name, q, f"label verdict wrong at {lab_i}, {lab_j}")
    return _ok(name, q, f"{checked} line pairs, {agg} label pairs")


def check_extension_disjoint_conditions(geo: Geometry, pairs: int = 10000,
                                        seed: int = 13) -> CheckResult:
    """Interference between a family line and the extension of another
    line's spread minus their shared regulus.  Per line pair: equal labels
    or a nonzero twisted form force empty intersection.  Per label pair:
    some cross pair interferes exactly when the labels differ and the
    twisted form vanishes."""
    name = "extension-disjointness-conditions"
    s = geo.spec
    q = geo.q
    pts_cache: dict = {}

    def pts(l):
        got = pts_cache.get(l)
        if got is None:
            got = pts_cache[l] = line_points(s, l)
        return got

    checked = 0
    for li, lj in _sampled_ordered_pairs(geo, pairs, seed):
        (lab_i, _, outside_i) = _pair_data(geo, li)
        (lab_j, _, _) = _pair_data(geo, lj)
        checked += 1
        if lab_i == lab_j or _twisted_form(geo, lab_i, lab_j):
            if any(P in outside_i for P in pts(lj)):
                return _fail(name, q, f"interference at labels {lab_i}, {lab_j}")
    labels = _all_labels(geo)
    agg = 0
    for lab_i in labels:
        pen_i = geo.pencil(*lab_i).punctured(geo.space.r_U1)
        for lab_j in labels:
            if lab_j == lab_i:
                continue
            agg += 1
            want = not _twisted_form(geo, lab_i, lab_j)
            found = False
            for li in pen_i:
                (_, _, outside_i) = _pair_data(geo, li)
                for lj in geo.pencil(*lab_j).punctured(geo.space.r_U1):
                    if any(P in outside_i for P in pts(lj)):
                        found = True
                        break
                if found:
                    break
            if found != want:
                return _fail(name, q, f"label verdict wrong at {lab_i}, {lab_j}")
    return _ok(name, q, f"{checked} line pairs, {agg} label pairs")


# ---------------------------------------------------------------------------
# good sets, parallelisms, groups


def check_plane_model_partitions(geo: Geometry) -> CheckResult:
    """Model point sets have size (q+1)^2, are pairwise disjoint, and are
    partitioned by the line family and by each conic family into q+1
    classes of q+1 points."""
    name = "plane-model-partitions"
    q = geo.q
    lam = geo.lam
    model = PlaneModel(lam)
    zsets = {a: model.Z_alpha(a) for a in lam.I}
    for a, z in zsets.items():
        if len(z) != (q + 1) ** 2:
            return _fail(name, q, f"|Z| = {len(z)} at index {a}")
        for c in model.U:
            cls = [p for p in z if model.on_line(c, p)]
            if len(cls) != q + 1:
                return _fail(name, q, "line class size wrong")
        for b in model.U:
            cls = [p for p in z if model.on_conic(lam.alpha(a), b, p)]
            if len(cls) != q + 1:
                return _fail(name, q, "conic class size wrong")
    for a1, a2 in combinations(lam.I, 2):
        if zsets[a1] & zsets[a2]:
            return _fail(name, q, "model point sets intersect")
    return _ok(name, q, f"{len(lam.I)} components of size {(q + 1)**2}")


def check_predicate_equivalence(geo: Geometry, samples: int = 20000,
                                seed: int = 5) -> CheckResult:
    """The pairwise algebraic predicate agrees with the one-point-per-line,
    one-point-per-bundle geometric predicate."""
    name = "goodset-predicate-equivalence"
    q = geo.q
    lam = geo.lam
    univ = candidate_universe(lam)
    if q <= 4:
        todo = combinations(univ, q + 1)
        note = "exhaustive"
    else:
        rng = random.Random(seed)
        todo = (tuple(rng.sample(univ, q + 1)) for _ in range(samples))
        note = f"{samples} sampled"
    n = 0
    for sub in todo:
        n += 1
        if is_good(lam, sub).ok != is_good_geometric(lam, sub):
            return _fail(name, q, f"predicates disagree on {sub}")
    return _ok(name, q, f"{note}, {n} subsets")


def check_intersection_tables(geo: Geometry) -> CheckResult:
    """Line/conic/component intersection counts and their bundle row sums,
    exhaustively over all (c, b, alpha, beta)."""
    name = "line-conic-intersections"
    s = geo.spec
    q = geo.q
    lam = geo.lam
    minus1 = s.minus_one()
    half = (q + 1) // 2
    i1, i2 = len(lam.I1), len(lam.I2)
    for c in geo.U:
        for b in geo.U:
            prof = {}
            from spreadsmith.goodsets import intersection_profile
            prof = intersection_profile(lam, c, b)
            for (a_idx, b_idx), cnt in prof.items():
                if a_idx != b_idx:
                    if cnt != 0:
                        return _fail(name, q, "off-component intersection nonzero")
                    continue
                if q % 2 == 0:
                    if cnt != 1:
                        return _fail(name, q, f"even-q count {cnt} != 1")
                    continue
                sign = s.pow(s.mul(c, b), half)
                square = s.is_square_subfield(lam.norm_of(a_idx)) \
                    if lam.norm_of(a_idx) != 0 else False
                want = 2 if ((square and sign == 1)
                             or (not square and sign == minus1)) else 0
                if cnt != want:
                    return _fail(name, q, f"odd-q count {cnt} != {want}")
            row = sum(prof[(a_idx, a_idx)] for a_idx in lam.I)
            if q % 2 == 0:
                if row != len(lam.I):
                    return _fail(name, q, "bundle row sum wrong")
            else:
                sign = s.pow(s.mul(c, b), half)
                want_row = 2 * i1 if sign == 1 else 2 * i2
                if row != want_row:
                    return _fail(name, q, "bundle row sum wrong")
    return _ok(name, q, f"all {(q + 1) ** 2} (c,b) cells")


def check_count_census(geo: Geometry, jobs: int = 1) -> CheckResult:
    """Enumeration agrees with the mask count, is duplicate-free, emits
    only good sets, and is deterministic (repeat runs and worker counts
    give identical streams).  Closed-form agreement is reported as data."""
    name = "goodset-census"
    q = geo.q
    lam = geo.lam
    cen = census(lam)
    detail = f"oracle {cen.oracle}"
    if q <= 5:
        run1 = list(enumerate_good_sets(lam))
        run2 = list(enumerate_good_sets(lam))
        if run1 != run2:
            return _fail(name, q, "two enumeration runs differ")
        if len(run1) != len(set(run1)):
            return _fail(name, q, "enumeration emitted duplicates")
        if len(run1) != cen.oracle:
            return _fail(name, q, f"enumeration {len(run1)} != mask count {cen.oracle}")
        probe = run1 if len(run1) <= 256 else run1[:256]
        for gs in probe:
            if not is_good(lam, gs).ok:
                return _fail(name, q, "enumeration emitted a non-good set")
        if jobs > 1:
            # worker count must not change the stream (or this output)
            par = enumerate_good_sets_parallel(q, jobs=jobs)
            if par != run1:
                return _fail(name, q, f"{jobs}-worker stream differs from serial")
    for k, v in cen.formulas.items():
        detail += f", {k}={v}{'(match)' if cen.oracle_matches.get(k) else '(differs)'}"
    if cen.formula_conflict:
        detail += ", even-q printed forms conflict"
    return _ok(name, q, detail)


def check_parallelism_roundtrip(geo: Geometry, count: int = 4) -> CheckResult:
    """Build a few parallelisms, verify exact cover, invariance under the
    unitriangular group, and label recovery."""
    name = "parallelism-roundtrip"
    q = geo.q
    lam = geo.lam
    sets = [fixed_plane_good_set(lam, lam.I[0], 0),
            dual(fixed_plane_good_set(lam, lam.I[0], 0))]
    for gs in enumerate_good_sets(lam, limit=count):
        sets.append(gs)
    for gs in sets:
        par = build_parallelism(geo, gs)
        cert = verify_parallelism(geo, par)
        if not cert.ok:
            return _fail(name, q, f"certificate failed: {cert.reason()}")
        if cert.line_count != (q * q + 1) * (q * q + q + 1):
            return _fail(name, q, "covered line count wrong")
        if not is_E_invariant(geo, par):
            return _fail(name, q, "not invariant under the unitriangular group")
        res = characterize(geo, par)
        if not res.ok or res.good_set != flip_canonical(lam, gs):
            return _fail(name, q, f"label recovery failed: {res.reason}")
    return _ok(name, q, f"{len(sets)} parallelisms")


def check_negative_mutations(geo: Geometry, want: int = 20) -> CheckResult:
    """Families assembled from non-good label sets must fail the exact
    cover with a concrete overcovered or uncovered line."""
    name = "non-good-families-fail"
    q = geo.q
    lam = geo.lam
    n = q + 1
    tried = 0
    for gs in enumerate_good_sets(lam, limit=8):
        for slot in range(n):
            for delta in range(1, n):
                if tried >= want:
                    break
                cands = list(gs)
                c = cands[slot]
                cands[slot] = Candidate(c.alpha_idx, c.u_pow, (c.v_pow + delta) % n)
                if len(set(cands)) != n:
                    continue
                if is_good(lam, cands).ok:
                    continue
                tried += 1
                family = assemble_spread_family(geo, cands)
                cert = verify_parallelism(geo, family)
                if cert.ok:
                    return _fail(name, q, f"mutant {cands} passed verification")
                if not cert.multiply_covered and not cert.uncovered \
                        and not cert.spread_failures:
                    return _fail(name, q, "failure without a concrete witness")
    if tried < want:
        return _fail(name, q, f"only {tried} mutants exercised")
    try:
        build_parallelism(geo, cands)
        return _fail(name, q, "builder accepted a non-good set")
    except ValueError:
        pass
    return _ok(name, q, f"{tried} mutants all failed with witnesses")


def check_pencil_orbits(geo: Geometry, sample: int = 6, seed: int = 17) -> CheckResult:
    """The unitriangular group is transitive on each punctured pencil:
    the orbit of any member is the full punctured pencil."""
    name = "pencil-orbits"
    q = geo.q
    rng = random.Random(seed)
    E = group_E(geo)
    labels = [(a, u, v) for a in geo.lam.I
              for u in range(q + 1) for v in range(q + 1)]
    for a, u, v in rng.sample(labels, min(sample, len(labels))):
        pen = geo.pencil(a, u, v)
        punct = set(pen.punctured(geo.space.r_U1))
        l = next(iter(punct))
        orbit = {psi.apply_line(l) for psi in E.elements}
        if orbit != punct:
            return _fail(name, q, f"orbit mismatch at {(a, u, v)}")
    return _ok(name, q, f"{min(sample, len(labels))} pencils")


def check_unitriangular_group(geo: Geometry) -> CheckResult:
    """Order q^2, elementary abelian, fixes r_U1 pointwise, stabilizes the
    transversal pair, every component, and every distinguished plane."""
    name = "unitriangular-group"
    s = geo.spec
    q = geo.q
    E = group_E(geo)
    if E.order != q * q:
        return _fail(name, q, f"order {E.order} != q^2")
    ident = Collineation.identity(s)
    for psi in E.elements:
        power = psi
        for _ in range(s.p - 1):
            power = power.then(psi)
        if not power.is_identity():
            return _fail(name, q, "element order does not divide p")
    for g1 in E.generators:
        for g2 in E.generators:
            if g1.then(g2).canonical_key() != g2.then(g1).canonical_key():
                return _fail(name, q, "generators do not commute")
    for P in line_points(s, geo.space.r_U1):
        if any(psi.apply_point(P) != P for psi in E.generators):
            return _fail(name, q, "r_U1 not fixed pointwise")
    for psi in E.generators:
        if psi.apply_line(geo.space.t1) != geo.space.t1:
            return _fail(name, q, "t1 moved")
        if psi.apply_line(geo.space.t2) != geo.space.t2:
            return _fail(name, q, "t2 moved")
        for k in range(q - 1):
            sig = geo.space.sigma_points(geo.lam.alpha(k))
            if {psi.apply_point(P) for P in sig} != sig:
                return _fail(name, q, "component moved")
        for a in geo.lam.I[:1]:
            for v_pow in range(q + 1):
                pl = geo.plane_pi(a, v_pow)
                if psi.apply_plane(pl) != pl:
                    return _fail(name, q, "distinguished plane moved")
    return _ok(name, q, f"order {E.order}")


def check_distinct_parallelisms(geo: Geometry, sample: int = 24, seed: int = 23) -> CheckResult:
    """Distinct norm-minus-one-free good sets give distinct parallelisms;
    flip-conjugate good sets give the same parallelism."""
    name = "distinct-parallelisms"
    q = geo.q
    lam = geo.lam
    s = geo.spec
    rng = random.Random(seed)
    if q % 2 == 0:
        family = list(enumerate_good_sets(lam))
    else:
        family = list(enumerate_good_sets(lam, exclude_norm_minus_one=True))
        if len(family) > sample:
            family = rng.sample(family, sample)
    keys = {}
    for gs in family:
        key = build_parallelism(geo, gs).key()
        if key in keys:
            return _fail(name, q, f"collision between {keys[key]} and {gs}")
        keys[key] = gs
    detail = f"{len(family)} norm-filtered good sets pairwise distinct"
    if q % 2 and any(lam.norm_of(a) == s.minus_one() for a in lam.I):
        gs = next(iter(enumerate_good_sets(lam, limit=1)))
        n = q + 1
        flipped = []
        changed = False
        for c in gs:
            if lam.norm_of(c.alpha_idx) == s.minus_one() and not changed:
                flipped.append(Candidate(c.alpha_idx, (c.u_pow + n // 2) % n,
                                         (c.v_pow + n // 2) % n))
                changed = True
            else:
                flipped.append(c)
        if changed:
            k1 = build_parallelism(geo, gs).key()
            k2 = build_parallelism(geo, canonical(flipped)).key()
            if k1 != k2:
                return _fail(name, q, "flip-conjugate labels changed the parallelism")
            detail += "; flip-conjugate collapse confirmed"
    return _ok(name, q, detail)


def check_group_actions(geo: Geometry, sample: int = 4, seed: int = 29) -> CheckResult:
    """Model-plane group actions: images of good sets are good, the label
    swap is an involution, and the diagonal action yields equivalent
    parallelisms via the explicit diagonal witness."""
    name = "model-group-actions"
    s = geo.spec
    q = geo.q
    lam = geo.lam
    rng = random.Random(seed)
    sets = list(enumerate_good_sets(lam, limit=64))
    probe = rng.sample(sets, min(sample, len(sets)))
    gens = [G1Element(1, 0), G1Element(0, 1), G1Element(0, 0, swapped=True)]
    for gs in probe:
        if dual(dual(gs)) != gs:
            return _fail(name, q, "label swap is not an involution")
        if not is_good(lam, dual(gs)).ok:
            return _fail(name, q, "dual of a good set is not good")
        for g in gens:
            apply_G1(lam, gs, g)   # raises if the image is not good
    # diagonal action: explicit ambient witness maps the parallelisms
    gs = probe[0]
    u_pow, v_pow = 1, 2
    img = apply_G1(lam, gs, G1Element(u_pow, v_pow))
    u0, v0 = geo.U[u_pow], geo.U[v_pow]
    ratio = s.div(v0, u0)
    c = next(x for x in range(1, s.order) if s.pow(x, q - 1) == ratio)
    witness = Collineation.linear(s, (
        (1, 0, 0, 0),
        (0, c, 0, 0),
        (0, 0, u0, 0),
        (0, 0, 0, s.mul(s.frobenius(c), u0))))
    p1 = build_parallelism(geo, gs)
    p2 = build_parallelism(geo, img)
    mapped = sorted(tuple(sorted(witness.apply_line(l) for l in sp.lines))
                    for sp in p1.spreads)
    if mapped != sorted(sp.key() for sp in p2.spreads):
        return _fail(name, q, "diagonal witness does not map the parallelisms")
    if are_equivalent(geo, p1, p2) is None:
        return _fail(name, q, "diagonal images not detected as equivalent")
    return _ok(name, q, f"{len(probe)} sets, diagonal witness verified")


def check_stabilizer_order(geo: Geometry) -> CheckResult:
    """Closure of the line-stabilizer generators has the reference order
    and every generator preserves the spread union and the line."""
    name = "stabilizer-order"
    q = geo.q
    grp = stabilizer_group(geo)
    if grp.order != grp.formula_order:
        return _fail(name, q, f"closure {grp.order} != formula {grp.formula_order}")
    d_key = set(geo.desarguesian_spread().lines)
    for psi in grp.generators:
        if {psi.apply_line(l) for l in d_key} != d_key:
            return _fail(name, q, "generator moves the Desarguesian spread")
        if psi.apply_line(geo.space.r_U1) != geo.space.r_U1:
            return _fail(name, q, "generator moves the distinguished line")
    return _ok(name, q, f"order {grp.order}")


def check_equivalence_search(geo: Geometry, trials: int = 10, seed: int = 31) -> CheckResult:
    """Randomized soundness of the equivalence search, inequivalence of the
    fixed-plane example and its dual, and (q=3) confirmation against the
    full spread stabilizer."""
    name = "equivalence-search"
    q = geo.q
    lam = geo.lam
    rng = random.Random(seed)
    grp = stabilizer_group(geo)
    sets = list(enumerate_good_sets(lam, limit=64))
    for _ in range(trials):
        gs = rng.choice(sets)
        psi = rng.choice(grp.elements)
        act = label_action(geo, psi)
        moved = apply_label_action(lam, act, gs)
        if are_equivalent(geo, canonical(gs), moved) is None:
            return _fail(name, q, "search missed a constructed equivalence")
    B = fixed_plane_good_set(lam, lam.I[0], 0)
    Bd = dual(B)
    if are_equivalent(geo, B, Bd) is not None:
        return _fail(name, q, "fixed-plane example equivalent to its dual")
    detail = f"{trials} random pairs, dual separation"
    if q == 3:
        # sweep the full spread stabilizer: no element carries the
        # fixed-plane parallelism to its dual, and every element that
        # stabilizes it also fixes the distinguished line
        full = full_stabilizer_group(geo)
        pb = build_parallelism(geo, B)
        pd = build_parallelism(geo, Bd)
        own_key = sorted(sp.key() for sp in pb.spreads)
        dual_key = sorted(sp.key() for sp in pd.spreads)
        own_members = set(map(tuple, own_key))
        dual_members = set(map(tuple, dual_key))
        probe_spread = pb.spreads[0]
        cross_hits = 0
        stab_size = 0
        for psi in full.elements:
            img0 = tuple(sorted(psi.apply_line(l) for l in probe_spread.lines))
            if img0 not in own_members and img0 not in dual_members:
                continue
            whole = sorted(tuple(sorted(psi.apply_line(l) for l in sp.lines))
                           for sp in pb.spreads)
            if whole == dual_key:
                cross_hits += 1
            elif whole == own_key:
                stab_size += 1
                if psi.apply_line(geo.space.r_U1) != geo.space.r_U1:
                    return _fail(name, q,
                                 "a parallelism stabilizer element moves r_U1")
        if cross_hits:
            return _fail(name, q, "full-group sweep found a forbidden equivalence")
        detail += (f", full-group sweep over {full.order} elements clean "
                   f"(stabilizer size {stab_size}, all fixing the line)")
    return _ok(name, q, detail)


def check_orbit_consistency(geo: Geometry, family_limit: int = 0) -> CheckResult:
    """Orbit sizes divide the group order, stabilizer orders multiply back,
    and family counts sum to the family size."""
    name = "orbit-consistency"
    q = geo.q
    lam = geo.lam
    family = list(enumerate_good_sets(lam, limit=family_limit or None))
    report = classify(geo, family)
    if sum(o.family_count for o in report.orbits) != report.family_size:
        return _fail(name, q, "family counts do not sum up")
    for o in report.orbits:
        if o.size * o.stabilizer_order != report.group_order:
            return _fail(name, q, "orbit-stabilizer relation broken")
    return _ok(name, q,
               f"{report.orbit_count} orbits on {report.family_size} classes")


# ---------------------------------------------------------------------------
# registry


def _wants(*qs):
    qset = set(qs)
    return lambda q: q in qset


SUITES = [
    ("field-automorphism", check_field_automorphism, lambda q: True),
    ("norm-partition", check_norm_partition, lambda q: True),
    ("lambda-classes", check_lambda_classes, lambda q: True),
    ("baer-subgeometries", check_baer_subgeometries, lambda q: q <= 5),
    ("subline-extension", check_subline_extension, lambda q: q <= 5),
    ("spread-union-sections", check_spread_union, lambda q: q <= 5),
    ("regulus-transversal-classification",
     check_regulus_transversal_classification, _wants(3)),
    ("pencil-line-family", check_pencils_and_line_family, lambda q: q <= 5),
    ("transversal-spreads", check_transversal_spreads, lambda q: q <= 5),
    ("hall-spreads", check_hall_spreads, lambda q: q <= 5),
    ("desarguesian-regulus-property", check_desarguesian_property, lambda q: q <= 5),
    ("shifted-spread-plane-sections", check_plane_sections, _wants(3, 5)),
    ("shift-maps", check_shift_maps, _wants(3, 5)),
    ("section-subplane-meet", check_subplane_meet, _wants(3, 5)),
    ("section-pivot-point", check_section_pivot, _wants(3, 5)),
    ("regulus-pair-conditions", check_regulus_pair_conditions, lambda q: q <= 5),
    ("extension-disjointness-conditions",
     check_extension_disjoint_conditions, lambda q: q <= 5),
    ("plane-model-partitions", check_plane_model_partitions, lambda q: q <= 7),
    ("goodset-predicate-equivalence", check_predicate_equivalence, lambda q: q <= 7),
    ("line-conic-intersections", check_intersection_tables, lambda q: q <= 7),
    ("goodset-census", check_count_census, lambda q: True),
    ("parallelism-roundtrip", check_parallelism_roundtrip, lambda q: q <= 5),
    ("non-good-families-fail", check_negative_mutations, lambda q: q <= 4),
    ("pencil-orbits", check_pencil_orbits, lambda q: q <= 5),
    ("unitriangular-group", check_unitriangular_group, lambda q: q <= 5),
    ("distinct-parallelisms", check_distinct_parallelisms, lambda q: q <= 5),
    ("model-group-actions", check_group_actions, lambda q: q <= 4),
    ("stabilizer-order", check_stabilizer_order, lambda q: q <= 5),
    ("equivalence-search", check_equivalence_search, lambda q: q <= 4),
    ("orbit-consistency", check_orbit_consistency, lambda q: q <= 4),
]


def run_selftest(geo: Geometry, jobs: int = 1,
                 sample_seed: int | None = None) -> list[CheckResult]:
    """Run every suite applicable at this q, in registry order.  A sample
    seed overrides the fixed default of every sampling suite."""
    import inspect

    q = geo.q
    results = []
    for name, fn, wants in SUITES:
        if not wants(q):
            continue
        kwargs = {}
        params = inspect.signature(fn).parameters
        if fn is check_count_census:
            kwargs["jobs"] = jobs
        if sample_seed is not None and "seed" in params:
            kwargs["seed"] = sample_seed
        results.append(fn(geo, **kwargs))
    return results
