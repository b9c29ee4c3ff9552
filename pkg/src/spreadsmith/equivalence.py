"""Collineations of the distinguished Baer subgeometry that stabilize the
Desarguesian spread and its distinguished line, equivalence testing of the
constructed parallelisms, and orbit classification of small families.

Collineations are stored as ambient semilinear maps of PG(3,q^2); two maps
inducing the same action on the subgeometry differ by the subgeometry
involution, so group elements are deduplicated by the minimum of the two
canonical keys.  Group orders therefore count induced collineations, which
is what the reference order 2 m q^2 (q^2-1) (q+1) speaks about.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math

from spreadsmith.field_tower import LambdaSystem
from spreadsmith.goodsets import Candidate, GoodSet, canonical, flip_canonical, is_good
from spreadsmith.parallelisms import Parallelism, characterize
from spreadsmith.proj_geometry import Collineation
from spreadsmith.spreads import Geometry


# ---------------------------------------------------------------------------
# generators and closure


def _block_pair(geo: Geometry, m2) -> Collineation:
    """diag(M, M^(q)) for M in GL(2,q^2): stabilizes every Baer component
    of the spread union."""
    s = geo.spec
    (a, b), (c, d) = m2
    f = s.frobenius
    mat = ((a, b, 0, 0),
           (c, d, 0, 0),
           (0, 0, f(a), f(b)),
           (0, 0, f(c), f(d)))
    return Collineation.linear(s, mat)


def _swap_iota(geo: Geometry) -> Collineation:
    s = geo.spec
    return Collineation.linear(s, ((0, 0, 1, 0), (0, 0, 0, 1),
                                   (1, 0, 0, 0), (0, 1, 0, 0)))


def stabilizer_gens(geo: Geometry) -> list[Collineation]:
    """Generators of the stabilizer of the Desarguesian spread and the
    distinguished line: upper-triangular block pairs, the transversal swap,
    and the coordinatewise p-power."""
    g = geo.spec.generator
    return [
        _block_pair(geo, ((g, 0), (0, 1))),
        _block_pair(geo, ((1, 0), (0, g))),
        _block_pair(geo, ((1, 1), (0, 1))),
        _swap_iota(geo),
        Collineation.frobenius(geo.spec, 1),
    ]


def full_stabilizer_gens(geo: Geometry) -> list[Collineation]:
    """Generators of the full spread stabilizer (line not fixed): add the
    lower unitriangular block pair."""
    return stabilizer_gens(geo) + [_block_pair(geo, ((1, 0), (1, 1)))]


@dataclass
class StabilizerGroup:
    generators: list[Collineation]
    elements: list[Collineation]          # one ambient representative per induced map
    order: int
    formula_order: int | None = None


def _induced_key(geo: Geometry, coll: Collineation):
    tau = Collineation.from_tau(geo.spec, geo.eta)
    return min(coll.canonical_key(), coll.then(tau).canonical_key())


def close_group(geo: Geometry, gens) -> list[Collineation]:
    """Breadth-first closure under composition, deduplicating by induced
    action on the subgeometry.  Deterministic element order."""
    tau = Collineation.from_tau(geo.spec, geo.eta)
    ident = Collineation.identity(geo.spec)

    def key(c):
        return min(c.canonical_key(), c.then(tau).canonical_key())

    seen = {key(ident)}
    elements = [ident]
    frontier = [ident]
    while frontier:
        new = []
        for e in frontier:
            for g in gens:
                n = e.then(g)
                k = key(n)
                if k not in seen:
                    seen.add(k)
                    elements.append(n)
                    new.append(n)
        frontier = new
    return elements


def stabilizer_group(geo: Geometry) -> StabilizerGroup:
    """Closure of the line-stabilizer generators; the order must equal
    2 m q^2 (q^2-1) (q+1)."""
    cached = getattr(geo, "_stab_group", None)
    if cached is not None:
        return cached
    gens = stabilizer_gens(geo)
    elements = close_group(geo, gens)
    q, m = geo.q, geo.spec.m
    grp = StabilizerGroup(generators=gens, elements=elements,
                          order=len(elements),
                          formula_order=2 * m * q * q * (q * q - 1) * (q + 1))
    geo._stab_group = grp
    return grp


def full_stabilizer_group(geo: Geometry) -> StabilizerGroup:
    cached = getattr(geo, "_full_stab_group", None)
    if cached is not None:
        return cached
    gens = full_stabilizer_gens(geo)
    elements = close_group(geo, gens)
    q, m = geo.q, geo.spec.m
    grp = StabilizerGroup(generators=gens, elements=elements,
                          order=len(elements),
                          formula_order=2 * m * q * q * (q**4 - 1) * (q + 1))
    geo._full_stab_group = grp
    return grp


# ---------------------------------------------------------------------------
# induced action on pencil labels


def _pencil_label_from(geo: Geometry, P, pl) -> Candidate:
    """Label of the pencil with base point P on r_U1 and plane pl through
    r_U1, normalizing by the subgeometry involution when the base point
    falls outside the I classes."""
    s = geo.spec
    for _ in range(2):
        assert P[0] == 1 and P[1] == 0 and P[3] == 0, f"base point {P} not on r_U1"
        c = P[2]
        assert pl[0] == 0 and pl[2] == 0 and pl[3] != 0, f"plane {pl} not through r_U1"
        cp = s.neg(s.div(pl[1], pl[3]))
        a_idx = geo.lam.index_by_norm(s.norm(c))
        if a_idx in geo.lam.I:
            alpha = geo.lam.alpha(a_idx)
            u = s.div(c, alpha)
            v = s.div(cp, alpha)
            return Candidate(a_idx, geo.u_index[u], geo.u_index[v])
        # conjugate pencil: flip both labels through the involution
        P = (1, 0, s.inv(s.frobenius(c)), 0)
        pl = (0, s.neg(s.inv(s.frobenius(cp))), 0, 1)
    raise AssertionError("pencil label did not normalize into the I classes")


def label_action(geo: Geometry, psi: Collineation) -> dict[Candidate, Candidate]:
    """How an element of the line stabilizer permutes pencil labels."""
    out = {}
    for a in geo.lam.I:
        for u in range(geo.q + 1):
            for v in range(geo.q + 1):
                P = psi.apply_point(geo.point_P(a, u))
                pl = psi.apply_plane(geo.plane_pi(a, v))
                out[Candidate(a, u, v)] = _pencil_label_from(geo, P, pl)
    return out


def apply_label_action(lam: LambdaSystem, act: dict[Candidate, Candidate],
                       gs) -> GoodSet:
    return flip_canonical(lam, tuple(act[Candidate(*c)] for c in gs))


def _group_label_actions(geo: Geometry) -> list[dict[Candidate, Candidate]]:
    cached = getattr(geo, "_label_actions", None)
    if cached is None:
        grp = stabilizer_group(geo)
        cached = [label_action(geo, psi) for psi in grp.elements]
        geo._label_actions = cached
    return cached


# ---------------------------------------------------------------------------
# equivalence and classification


def _as_canonical_goodset(geo: Geometry, obj) -> GoodSet:
    """Accept a Parallelism of the constructed family, a raw spread list,
    or a good set; reject anything outside the family the search is sound
    for."""
    from spreadsmith.spreads import Spread

    if not isinstance(obj, Parallelism) and any(isinstance(x, Spread) for x in obj):
        obj = Parallelism(spreads=tuple(obj), desarguesian_index=-1)
    if isinstance(obj, Parallelism):
        if obj.source is not None:
            gs = obj.source
        else:
            res = characterize(geo, obj)
            if not res.ok:
                raise ValueError(f"parallelism outside the searched family: {res.reason}")
            gs = res.good_set
    else:
        gs = canonical(obj)
        verdict = is_good(geo.lam, gs)
        if not verdict.ok:
            raise ValueError("label set is not a good set")
    return flip_canonical(geo.lam, gs)


def are_equivalent(geo: Geometry, p1, p2) -> Collineation | None:
    """Search the line stabilizer for a witness mapping one parallelism to
    the other; sound and complete for the constructed family."""
    g1 = _as_canonical_goodset(geo, p1)
    g2 = _as_canonical_goodset(geo, p2)
    grp = stabilizer_group(geo)
    for psi, act in zip(grp.elements, _group_label_actions(geo)):
        if apply_label_action(geo.lam, act, g1) == g2:
            return psi
    return None


@dataclass
class Orbit:
    representative: GoodSet
    size: int
    stabilizer_order: int
    family_count: int


@dataclass
class OrbitReport:
    group_order: int
    family_size: int
    orbits: list[Orbit]
    bounds: dict[str, Fraction]

    @property
    def orbit_count(self):
        return len(self.orbits)


def lower_bound_formulas(q: int, m: int) -> dict[str, Fraction]:
    """The published lower bounds on the number of inequivalent
    parallelisms, evaluated exactly (they may be fractional)."""
    h = m
    out: dict[str, Fraction] = {}
    if q % 2 == 0:
        base = Fraction(math.factorial(q - 2), 2 * h * q * (q + 1))
        out["even_printed"] = Fraction(q - 1, 2) ** (q + 1) * base
        out["even_I_based"] = Fraction(q - 2, 2) ** (q + 1) * base
    else:
        tail = Fraction((q * q - 1) ** ((q - 1) // 2), 2 * h * q * q * (q + 1))
        if q % 4 == 1:
            out["odd_1_mod_4"] = Fraction((q - 5) * (q - 1), 16) ** ((q + 1) // 2) * tail
        else:
            out["odd_3_mod_4"] = Fraction(q - 3, 4) ** (q + 1) * tail
    return out


def classify(geo: Geometry, family) -> OrbitReport:
    """Orbit partition of a family of parallelisms (given as parallelisms
    or good sets) under the line stabilizer.  The family must be closed
    under the group action; orbits are reported with exact sizes and
    stabilizer orders from the orbit-stabilizer relation."""
    lam = geo.lam
    keys = [_as_canonical_goodset(geo, obj) for obj in family]
    family_keys = set(keys)
    grp = stabilizer_group(geo)
    actions = _group_label_actions(geo)
    remaining = dict.fromkeys(sorted(family_keys))
    orbits = []
    for gs in remaining:
        if remaining[gs] is not None:
            continue
        orbit = {apply_label_action(lam, act, gs) for act in actions}
        if not orbit <= family_keys:
            raise ValueError("family is not closed under the stabilizer action")
        for member in orbit:
            remaining[member] = True
        size = len(orbit)
        assert grp.order % size == 0
        orbits.append(Orbit(representative=min(orbit), size=size,
                            stabilizer_order=grp.order // size,
                            family_count=len(orbit & family_keys)))
    orbits.sort(key=lambda o: o.representative)
    return OrbitReport(group_order=grp.order, family_size=len(family_keys),
                       orbits=orbits,
                       bounds=lower_bound_formulas(geo.q, geo.spec.m))
