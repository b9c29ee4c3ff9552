"""Desarguesian spreads of the Baer subgeometry fixed by tau_eta, pencils of
Baer sublines through points of r_U1, transversal-induced spreads, reguli
and their opposites, and Hall spreads obtained by regulus switching.

Lines of the distinguished Baer subgeometry are always stored as their
ambient extensions in PG(3,q^2): the ambient line is stable under the
involution and meets the subgeometry in q+1 points, and this single
representation serves both incidence levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from spreadsmith.field_tower import FieldSpec, LambdaSystem, lambda_for_q
from spreadsmith.proj_geometry import (
    AmbientSpace,
    Collineation,
    Line,
    Plane,
    Point,
    line_points,
    line_through,
    lines_meet,
    normalize,
    point_on_plane,
    tau_line,
    tau_point,
)


@dataclass(frozen=True)
class Spread:
    """q^2+1 pairwise disjoint lines covering the subgeometry of alpha."""
    lines: tuple[Line, ...]
    alpha: int
    tag: str = "unknown"            # desarguesian | hall | unknown
    transversal: Line | None = None
    switched: tuple[Line, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(sorted(self.lines)))

    def key(self) -> tuple[Line, ...]:
        return self.lines


@dataclass(frozen=True)
class Regulus:
    lines: tuple[Line, ...]

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(sorted(self.lines)))


@dataclass(frozen=True)
class Pencil:
    """The q+1 lines through P (inside the plane) carrying Baer sublines of
    the plane's Baer subplane; always contains r_U1."""
    alpha_idx: int
    u_pow: int
    v_pow: int
    base_point: Point
    plane: Plane
    lines: tuple[Line, ...]

    def punctured(self, r_U1: Line) -> tuple[Line, ...]:
        return tuple(l for l in self.lines if l != r_U1)


@dataclass
class SpreadReport:
    ok: bool
    reason: str | None = None
    uncovered: Point | None = None
    multiply_covered: Point | None = None


class Geometry:
    """Shared context: field tower, Lambda system, ambient space and the
    cached spread/pencil apparatus of the distinguished subgeometry."""

    def __init__(self, lam: LambdaSystem):
        self.lam = lam
        self.spec: FieldSpec = lam.spec
        self.space = AmbientSpace(self.spec)
        self.q = self.spec.q
        self.eta = lam.eta
        assert self.spec.norm(self.eta) == 1
        self.U = self.spec.unit_circle()
        self.u_index = {u: i for i, u in enumerate(self.U)}
        self._sigma_eta = None
        self._sigma_eta_lines = None
        self._line_id = None
        self._subline_pts: dict[Line, tuple[Point, ...]] = {}
        self._d_eta = None
        self._L = None
        self._L_label: dict[Line, tuple[int, int, int]] = {}
        self._pencils: dict[tuple[int, int, int], Pencil] = {}
        self._spread_cache: dict[Line, Spread] = {}
        self._regulus_cache: dict[Line, Regulus] = {}
        self._opposite_cache: dict[tuple[Line, ...], Regulus] = {}
        self._hall_cache: dict[Line, Spread] = {}

    @classmethod
    def from_q(cls, q: int) -> "Geometry":
        return cls(lambda_for_q(q))

    # -- the distinguished subgeometry ----------------------------------------

    @property
    def sigma_eta(self) -> frozenset[Point]:
        if self._sigma_eta is None:
            self._sigma_eta = self.space.sigma_points(self.eta)
        return self._sigma_eta

    def tau_eta_point(self, P: Point) -> Point:
        return tau_point(self.spec, self.eta, P)

    def tau_eta_line(self, l: Line) -> Line:
        return tau_line(self.spec, self.eta, l)

    def subline_points(self, l: Line) -> tuple[Point, ...]:
        """The q+1 points of a subgeometry line (ambient representation)."""
        pts = self._subline_pts.get(l)
        if pts is None:
            sig = self.sigma_eta
            pts = tuple(P for P in line_points(self.spec, l) if P in sig)
            self._subline_pts[l] = pts
        return pts

    def sigma_eta_lines(self) -> list[Line]:
        """All (q^2+1)(q^2+q+1) lines of the subgeometry."""
        if self._sigma_eta_lines is None:
            spec = self.spec
            pts = sorted(self.sigma_eta)
            seen = set()
            for i, P in enumerate(pts):
                for Q in pts[i + 1:]:
                    seen.add(line_through(spec, P, Q))
            q = self.q
            assert len(seen) == (q * q + 1) * (q * q + q + 1)
            self._sigma_eta_lines = sorted(seen)
            self._line_id = {l: k for k, l in enumerate(self._sigma_eta_lines)}
        return self._sigma_eta_lines

    def line_id(self, l: Line) -> int:
        if self._line_id is None:
            self.sigma_eta_lines()
        return self._line_id[l]

    def line_ids(self, lines) -> frozenset[int]:
        return frozenset(self.line_id(l) for l in lines)

    # -- distinguished points, planes, pencils --------------------------------

    def alpha_of(self, alpha_idx: int) -> int:
        return self.lam.alpha(alpha_idx)

    def point_P(self, alpha_idx: int, u_pow: int) -> Point:
        """(1, 0, alpha*u, 0) on r_U1."""
        s = self.spec
        c = s.mul(self.alpha_of(alpha_idx), self.U[u_pow % (self.q + 1)])
        return (1, 0, c, 0)

    def plane_pi(self, alpha_idx: int, v_pow: int) -> Plane:
        """The plane X4 = alpha*v X2 through r_U1."""
        s = self.spec
        c = s.mul(self.alpha_of(alpha_idx), self.U[v_pow % (self.q + 1)])
        return normalize(s, (0, s.neg(c), 0, 1))

    def pencil(self, alpha_idx: int, u_pow: int, v_pow: int) -> Pencil:
        key = (alpha_idx, u_pow % (self.q + 1), v_pow % (self.q + 1))
        got = self._pencils.get(key)
        if got is not None:
            return got
        if alpha_idx not in self.lam.I:
            raise ValueError(f"alpha index {alpha_idx} is not in the I class")
        spec = self.spec
        alpha = self.alpha_of(alpha_idx)
        P = self.point_P(alpha_idx, u_pow)
        pi = self.plane_pi(alpha_idx, v_pow)
        section = [S for S in self.space.sigma_points(alpha)
                   if point_on_plane(spec, pi, S)]
        assert len(section) == self.q**2 + self.q + 1, "plane section must be a Baer subplane"
        members = {line_through(spec, P, S) for S in section if S != P}
        assert len(members) == self.q + 1
        assert self.space.r_U1 in members
        got = Pencil(*key, base_point=P, plane=pi, lines=tuple(sorted(members)))
        self._pencils[key] = got
        return got

    def line_set_L(self) -> tuple[Line, ...]:
        """Union of all punctured pencils: |I| q (q+1)^2 lines."""
        if self._L is None:
            out = []
            for a in self.lam.I:
                for u in range(self.q + 1):
                    for v in range(self.q + 1):
                        pencil = self.pencil(a, u, v)
                        for l in pencil.punctured(self.space.r_U1):
                            out.append(l)
                            self._L_label[l] = (a, u, v)
            assert len(out) == len(set(out)) == len(self.lam.I) * self.q * (self.q + 1)**2
            self._L = tuple(out)
        return self._L

    def label_of(self, l: Line) -> tuple[int, int, int]:
        self.line_set_L()
        try:
            return self._L_label[l]
        except KeyError:
            raise ValueError("line does not belong to the pencil line family") from None

    # -- spreads ---------------------------------------------------------------

    def desarguesian_spread(self, alpha_idx: int | None = None) -> Spread:
        """{ <P, P^tau> : P in t1 } restricted to the subgeometry of alpha."""
        alpha = self.eta if alpha_idx is None else self.alpha_of(alpha_idx)
        return self._desarguesian_for(alpha)

    def _desarguesian_for(self, alpha: int) -> Spread:
        if alpha == self.eta and self._d_eta is not None:
            return self._d_eta
        spec = self.spec
        lines = set()
        for P in line_points(spec, self.space.t1):
            lines.add(line_through(spec, P, tau_point(spec, alpha, P)))
        assert len(lines) == self.q**2 + 1
        sp = Spread(lines=tuple(lines), alpha=alpha, tag="desarguesian",
                    transversal=self.space.t1)
        if alpha == self.eta:
            self._d_eta = sp
        return sp

    def spread_from_transversal(self, l: Line) -> Spread:
        """The Desarguesian spread with director lines l, l^tau.

        The only genuine precondition is that l avoids the subgeometry: a
        stable line always meets it in a subline, and a meeting point of l
        and its conjugate is fixed, hence in the subgeometry.  Violations
        are still reported distinctly, and the skewness assertion guards
        the derivation."""
        got = self._spread_cache.get(l)
        if got is not None:
            return got
        spec = self.spec
        lt = self.tau_eta_line(l)
        if lt == l:
            raise ValueError("transversal is self-conjugate")
        pts = line_points(spec, l)
        if any(P in self.sigma_eta for P in pts):
            raise ValueError("transversal meets the subgeometry")
        if lines_meet(spec, l, lt):
            raise ValueError("transversal and its conjugate are not skew")
        lines = {line_through(spec, Q, self.tau_eta_point(Q)) for Q in pts}
        assert len(lines) == self.q**2 + 1
        got = Spread(lines=tuple(lines), alpha=self.eta, tag="desarguesian",
                     transversal=l)
        self._spread_cache[l] = got
        self._spread_cache[lt] = got
        return got

    def regulus_of(self, l: Line) -> Regulus:
        """D_eta intersect S_l, a regulus through r_U1 when l is a pencil line."""
        got = self._regulus_cache.get(l)
        if got is not None:
            return got
        self.label_of(l)  # membership check
        common = set(self.desarguesian_spread().lines) & set(
            self.spread_from_transversal(l).lines)
        assert len(common) == self.q + 1
        assert self.space.r_U1 in common
        got = Regulus(lines=tuple(common))
        self._regulus_cache[l] = got
        return got

    def transversals_of(self, lines) -> list[Line]:
        """All subgeometry lines meeting each of the given pairwise skew
        subgeometry lines; direct incidence search."""
        spec = self.spec
        first, second, *rest = list(lines)
        found = set()
        for X in self.subline_points(first):
            for Y in self.subline_points(second):
                cand = line_through(spec, X, Y)
                if all(lines_meet(spec, cand, r) for r in rest):
                    found.add(cand)
        return sorted(found)

    def opposite_regulus(self, reg: Regulus) -> Regulus:
        got = self._opposite_cache.get(reg.lines)
        if got is None:
            opp = self.transversals_of(reg.lines)
            assert len(opp) == self.q + 1
            got = Regulus(lines=tuple(opp))
            self._opposite_cache[reg.lines] = got
        return got

    def hall_spread(self, l: Line) -> Spread:
        """Switch the regulus of S_l shared with D_eta for its opposite."""
        got = self._hall_cache.get(l)
        if got is not None:
            return got
        reg = self.regulus_of(l)
        sl = self.spread_from_transversal(l)
        opp = self.opposite_regulus(reg)
        lines = (set(sl.lines) - set(reg.lines)) | set(opp.lines)
        got = Spread(lines=tuple(lines), alpha=self.eta, tag="hall",
                     transversal=l, switched=reg.lines)
        self._hall_cache[l] = got
        return got

    def is_spread(self, lines) -> SpreadReport:
        """Verdict: q^2+1 subgeometry lines, pairwise disjoint, covering
        every subgeometry point exactly once."""
        lines = list(lines)
        q = self.q
        if len(lines) != q * q + 1:
            return SpreadReport(False, f"expected {q*q+1} lines, got {len(lines)}")
        counts: dict[Point, int] = {}
        for l in lines:
            if self.tau_eta_line(l) != l:
                return SpreadReport(False, "line is not stable under the involution")
            pts = self.subline_points(l)
            if len(pts) != q + 1:
                return SpreadReport(False, "line does not meet the subgeometry in a subline")
            for P in pts:
                counts[P] = counts.get(P, 0) + 1
        for P, c in counts.items():
            if c > 1:
                return SpreadReport(False, "point covered more than once",
                                    multiply_covered=P)
        for P in self.sigma_eta:
            if P not in counts:
                return SpreadReport(False, "point not covered", uncovered=P)
        return SpreadReport(True)

    # -- the distinguished transversal family of one pencil -------------------

    def l_lambda(self, alpha_idx: int, scalar: int, xtilde: int | None = None) -> Line:
        """The pencil line through (1,0,alpha,0) inside the plane X4 = alpha X2
        determined by the subfield scalar; scalar 0 gives the line through
        (0,1,0,alpha)."""
        spec = self.spec
        if not spec.in_subfield(scalar):
            raise ValueError("scalar must lie in the subfield")
        if xtilde is None:
            xtilde = spec.generator
        if spec.in_subfield(xtilde):
            raise ValueError("xtilde must lie outside the subfield")
        alpha = self.alpha_of(alpha_idx)
        x = spec.mul(scalar, xtilde)
        second = (x, 1, spec.mul(alpha, spec.frobenius(x)), alpha)
        return line_through(spec, (1, 0, alpha, 0), second)

    def phi_map(self, alpha_idx: int) -> Collineation:
        """Linear map sending t1, t2 to the scalar-0 pencil line and its
        conjugate while fixing the distinguished subgeometry."""
        a = self.alpha_of(alpha_idx)
        aq = self.spec.frobenius(a)
        mat = ((1, 0, aq, 0),
               (0, 1, 0, aq),
               (a, 0, 1, 0),
               (0, a, 0, 1))
        return Collineation.linear(self.spec, mat)

    def xi_map(self, scalar: int, xtilde: int | None = None) -> Collineation:
        """Unitriangular map fixing r_U1 pointwise and every Baer component
        of the spread union; shifts the scalar-0 pencil line family."""
        spec = self.spec
        if xtilde is None:
            xtilde = spec.generator
        x = spec.mul(scalar, xtilde)
        mat = ((1, x, 0, 0),
               (0, 1, 0, 0),
               (0, 0, 1, spec.frobenius(x)),
               (0, 0, 0, 1))
        return Collineation.linear(spec, mat)

    def phi_lambda_map(self, alpha_idx: int, scalar: int,
                       xtilde: int | None = None) -> Collineation:
        return self.phi_map(alpha_idx).then(self.xi_map(scalar, xtilde))

    # -- misc helpers ----------------------------------------------------------

    def extension_points(self, lines) -> set[Point]:
        """Union of the ambient points of the extended lines."""
        out: set[Point] = set()
        for l in lines:
            out.update(line_points(self.spec, l))
        return out

    def reguli_through_r_U1(self) -> list[Regulus]:
        """All reguli of D_eta containing r_U1, by brute force over triples."""
        d = self.desarguesian_spread()
        others = [l for l in d.lines if l != self.space.r_U1]
        found = set()
        for i, l2 in enumerate(others):
            for l3 in others[i + 1:]:
                trip = [self.space.r_U1, l2, l3]
                transversals = self.transversals_of(trip)
                reg = tuple(sorted(l for l in d.lines
                                   if all(lines_meet(self.spec, l, t)
                                          for t in transversals)))
                found.add(reg)
        return [Regulus(lines=r) for r in sorted(found)]


@lru_cache(maxsize=None)
def geometry_for_q(q: int) -> Geometry:
    return Geometry.from_q(q)
