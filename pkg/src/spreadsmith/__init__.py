"""spreadsmith: exact line-parallelisms of PG(3,q) from Desarguesian and
Hall spreads, with enumeration, verification and equivalence classification."""

from spreadsmith.field_tower import (
    FieldSpec,
    LambdaSystem,
    NormPartition,
    build_lambda,
    build_partition,
    field_for_q,
    lambda_for_q,
)
from spreadsmith.spreads import Geometry, Pencil, Regulus, Spread, geometry_for_q
from spreadsmith.goodsets import (
    Candidate,
    census,
    count_formula,
    count_good_sets,
    dual,
    enumerate_good_sets,
    fixed_plane_good_set,
    fixed_point_good_set,
    is_good,
    is_good_geometric,
)
from spreadsmith.parallelisms import (
    Parallelism,
    build_parallelism,
    characterize,
    group_E,
    is_E_invariant,
    verify_parallelism,
)
from spreadsmith.equivalence import are_equivalent, classify, stabilizer_group

__all__ = [
    "FieldSpec",
    "LambdaSystem",
    "NormPartition",
    "build_lambda",
    "build_partition",
    "field_for_q",
    "lambda_for_q",
    "Geometry",
    "Pencil",
    "Regulus",
    "Spread",
    "geometry_for_q",
    "Candidate",
    "census",
    "count_formula",
    "count_good_sets",
    "dual",
    "enumerate_good_sets",
    "fixed_plane_good_set",
    "fixed_point_good_set",
    "is_good",
    "is_good_geometric",
    "Parallelism",
    "build_parallelism",
    "characterize",
    "group_E",
    "is_E_invariant",
    "verify_parallelism",
    "are_equivalent",
    "classify",
    "stabilizer_group",
]
