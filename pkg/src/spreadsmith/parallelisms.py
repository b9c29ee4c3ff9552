"""Assemble a parallelism from a good set, verify the exact-cover property,
build the prescribed elementary abelian automorphism group, and recover a
good set from a parallelism of the right shape.

A parallelism of the distinguished Baer subgeometry is q^2+q+1 pairwise
line-disjoint spreads whose union is the full line set.  The construction
switches, for every line of every selected punctured pencil, the regulus
that the transversal-induced spread shares with the Desarguesian one.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from spreadsmith.goodsets import (
    Candidate,
    GoodSet,
    canonical,
    flip_canonical,
    is_good,
)
from spreadsmith.proj_geometry import (
    Collineation,
    Line,
    line_intersection,
    line_plane_meet,
    line_points,
    line_through,
    lines_meet,
    plane_through,
)
from spreadsmith.spreads import Geometry, Spread, SpreadReport


@dataclass(frozen=True)
class Parallelism:
    spreads: tuple[Spread, ...]
    desarguesian_index: int
    source: GoodSet | None = None

    def key(self):
        return tuple(sorted(sp.key() for sp in self.spreads))

    def __len__(self):
        return len(self.spreads)


@dataclass
class Certificate:
    ok: bool
    spread_failures: list[tuple[int, SpreadReport]]
    uncovered: list[Line]
    multiply_covered: list[Line]
    line_count: int
    checksum: str

    def reason(self) -> str | None:
        if self.ok:
            return None
        if self.spread_failures:
            idx, rep = self.spread_failures[0]
            return f"member {idx} is not a spread: {rep.reason}"
        if self.multiply_covered:
            return f"line covered more than once: {self.multiply_covered[0]}"
        return f"line not covered: {self.uncovered[0]}"


def assemble_spread_family(geo: Geometry, cands) -> list[Spread]:
    """The q^2+q Hall spreads of the punctured pencils of the given labels,
    then the Desarguesian spread.  No goodness check: callers that want the
    guarantee go through build_parallelism."""
    family = []
    for cand in canonical(cands):
        pencil = geo.pencil(*cand)
        for l in pencil.punctured(geo.space.r_U1):
            family.append(geo.hall_spread(l))
    family.append(geo.desarguesian_spread())
    return family


def build_parallelism(geo: Geometry, gs) -> Parallelism:
    verdict = is_good(geo.lam, gs)
    if not verdict.ok:
        raise ValueError(
            f"not a good set: pair {verdict.witness} fails the "
            f"{verdict.condition} condition")
    family = assemble_spread_family(geo, gs)
    par = Parallelism(spreads=tuple(family),
                      desarguesian_index=len(family) - 1,
                      source=canonical(gs))
    cert = verify_parallelism(geo, par)
    assert cert.ok, f"construction from a good set must verify: {cert.reason()}"
    return par


def family_checksum(geo: Geometry, spreads) -> str:
    """SHA-256 over the canonical serialization of the sorted line multiset."""
    blobs = []
    for sp in spreads:
        for l in sp.lines:
            blobs.append(",".join(
                "".join(map(str, geo.spec.elem_vec(x))) for row in l for x in row))
    digest = hashlib.sha256("|".join(sorted(blobs)).encode()).hexdigest()
    return digest


def verify_parallelism(geo: Geometry, par) -> Certificate:
    """Every member passes the spread verdict and every subgeometry line is
    covered exactly once."""
    spreads = par.spreads if isinstance(par, Parallelism) else tuple(par)
    failures = []
    for i, sp in enumerate(spreads):
        rep = geo.is_spread(sp.lines)
        if not rep.ok:
            failures.append((i, rep))
    counts: dict[Line, int] = {}
    for sp in spreads:
        for l in sp.lines:
            counts[l] = counts.get(l, 0) + 1
    universe = geo.sigma_eta_lines()
    uncovered = [l for l in universe if l not in counts]
    multi = sorted(l for l, c in counts.items() if c > 1)
    stray = [l for l in counts if l not in geo._line_id]
    ok = not failures and not uncovered and not multi and not stray
    return Certificate(ok=ok, spread_failures=failures, uncovered=uncovered,
                       multiply_covered=multi,
                       line_count=sum(counts.values()),
                       checksum=family_checksum(geo, spreads))


# ---------------------------------------------------------------------------
# the elementary abelian group fixing r_U1 pointwise


@dataclass(frozen=True)
class GroupE:
    elements: tuple[Collineation, ...]
    generators: tuple[Collineation, ...]

    @property
    def order(self):
        return len(self.elements)


def _e_element(geo: Geometry, b: int) -> Collineation:
    s = geo.spec
    mat = ((1, b, 0, 0),
           (0, 1, 0, 0),
           (0, 0, 1, s.frobenius(b)),
           (0, 0, 0, 1))
    return Collineation.linear(s, mat)


def group_E(geo: Geometry) -> GroupE:
    """All q^2 unitriangular members; the generators are the p-basis
    powers g^0 .. g^(2m-1) of the parameter."""
    s = geo.spec
    elements = tuple(_e_element(geo, b) for b in range(s.order))
    gens = tuple(_e_element(geo, s.pow(s.generator, k))
                 for k in range(2 * s.m))
    return GroupE(elements=elements, generators=gens)


def spread_image(geo: Geometry, sp: Spread, coll: Collineation) -> frozenset[Line]:
    return frozenset(coll.apply_line(l) for l in sp.lines)


def is_E_invariant(geo: Geometry, par, full: bool = False) -> bool:
    """Invariance of the spread set under the unitriangular group; the
    generator check suffices by closure, the full sweep is the slow mode."""
    spreads = par.spreads if isinstance(par, Parallelism) else tuple(par)
    keys = {frozenset(sp.lines) for sp in spreads}
    grp = group_E(geo)
    todo = grp.elements if full else grp.generators
    for psi in todo:
        imaged = {frozenset(psi.apply_line(l) for l in key) for key in keys}
        if imaged != keys:
            return False
    return True


# ---------------------------------------------------------------------------
# converse: read a good set off a parallelism of the right shape


@dataclass
class CharacterizeResult:
    ok: bool
    good_set: GoodSet | None = None
    reason: str | None = None
    labels: list[Candidate] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _ambient_directors(geo: Geometry, spread_lines) -> list[Line]:
    """The two transversal (director) lines of a Desarguesian spread given
    by its extended lines: common transversals of three of them, filtered
    against two more, then verified against all."""
    spec = geo.spec
    lines = sorted(spread_lines)
    l1, l2, l3, l4, l5 = lines[0], lines[1], lines[2], lines[3], lines[4]
    cands = []
    for X in line_points(spec, l1):
        pl = plane_through(spec, l2, X)
        Z = line_plane_meet(spec, l3, pl)
        if Z is None or Z == X:
            continue
        cand = line_through(spec, X, Z)
        if lines_meet(spec, cand, l4) and lines_meet(spec, cand, l5):
            cands.append(cand)
    directors = [c for c in dict.fromkeys(cands)
                 if all(lines_meet(spec, c, l) for l in lines)]
    return directors


def _label_of_director(geo: Geometry, director: Line) -> Candidate | None:
    """Pencil label (alpha_idx, u_pow, v_pow) of a transversal line whose
    point on r_U1 lies in a subgeometry of the I class; None otherwise."""
    spec = geo.spec
    P = line_intersection(spec, director, geo.space.r_U1)
    if P is None or P[0] != 1 or P[1] != 0 or P[3] != 0:
        return None
    c = P[2]
    if c == 0:
        return None
    try:
        a_idx = geo.lam.index_by_norm(spec.norm(c))
    except KeyError:
        return None
    if a_idx not in geo.lam.I:
        return None
    alpha = geo.lam.alpha(a_idx)
    u = spec.div(c, alpha)
    pl = plane_through(spec, director, geo.space.U1)
    if pl[0] != 0 or pl[2] != 0 or pl[3] == 0:
        return None
    coeff = spec.neg(spec.div(pl[1], pl[3]))
    v = spec.div(coeff, alpha)
    ui = geo.u_index.get(u)
    vi = geo.u_index.get(v)
    if ui is None or vi is None:
        return None
    return Candidate(a_idx, ui, vi)


def _hall_member_label(geo: Geometry, sp: Spread) -> tuple[Candidate | None, str | None]:
    """Validate one non-Desarguesian member as a Hall spread switched on a
    regulus through r_U1 and recover its pencil label."""
    cache = getattr(geo, "_member_label_cache", None)
    if cache is None:
        cache = {}
        geo._member_label_cache = cache
    key = sp.key()
    if key in cache:
        return cache[key]
    result = _hall_member_label_uncached(geo, sp)
    cache[key] = result
    return result


def _hall_member_label_uncached(geo, sp):
    spec = geo.spec
    q = geo.q
    r_pts = set(geo.subline_points(geo.space.r_U1))
    touching = [l for l in sp.lines
                if any(P in r_pts for P in geo.subline_points(l))]
    if len(touching) != q + 1:
        return None, "does not meet the distinguished line in a regulus pattern"
    try:
        reg = geo.transversals_of(touching)
    except AssertionError:
        reg = []
    if len(reg) != q + 1:
        return None, "lines through the distinguished line admit no opposite regulus"
    d_lines = set(geo.desarguesian_spread().lines)
    if geo.space.r_U1 not in reg or not set(reg) <= d_lines:
        return None, "switched regulus misses the distinguished line"
    # the unswitched Desarguesian spread this member came from
    source_lines = (set(sp.lines) - set(touching)) | set(reg)
    if not geo.is_spread(source_lines).ok:
        return None, "unswitching does not yield a spread"
    directors = _ambient_directors(geo, source_lines)
    labels = [lab for d in directors
              if (lab := _label_of_director(geo, d)) is not None]
    if not labels:
        return None, "no director line carries an I-class pencil label"
    return min(labels), None


def characterize(geo: Geometry, par) -> CharacterizeResult:
    """Check the shape hypotheses (Desarguesian member present, all other
    members Hall spreads switched on reguli through r_U1, invariance under
    the unitriangular group) and read off the good set."""
    spreads = list(par.spreads if isinstance(par, Parallelism) else par)
    q = geo.q
    d_key = geo.desarguesian_spread().key()
    rest = [sp for sp in spreads if sp.key() != d_key]
    if len(rest) == len(spreads):
        return CharacterizeResult(False, reason="no Desarguesian member")
    if len(spreads) != q * q + q + 1 or len(rest) != len(spreads) - 1:
        return CharacterizeResult(False, reason="malformed family size")
    labels = []
    for sp in rest:
        label, err = _hall_member_label(geo, sp)
        if label is None:
            return CharacterizeResult(False, reason=f"regulus misses r_U1: {err}",
                                      labels=labels)
        labels.append(label)
    if not is_E_invariant(geo, spreads):
        return CharacterizeResult(False, reason="not E-invariant", labels=labels)
    distinct = sorted(set(labels))
    if len(distinct) != q + 1 or any(labels.count(l) != q for l in distinct):
        return CharacterizeResult(False, reason="pencil labels do not form q+1 full pencils",
                                  labels=labels)
    gs = flip_canonical(geo.lam, distinct)
    verdict = is_good(geo.lam, gs)
    if not verdict.ok:
        return CharacterizeResult(False, reason="recovered set not good",
                                  labels=labels)
    return CharacterizeResult(True, good_set=gs, labels=labels)
