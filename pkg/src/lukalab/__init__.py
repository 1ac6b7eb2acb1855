"""lukalab: an exact workbench for infinite-valued Łukasiewicz logic.

Formulas compile to piecewise-linear functions over the rational unit
cube; semantic and stable consequence are decided exactly, differential
valuations refine satisfaction beyond order 0, and Bouligand-Severi
tangents of model sets connect the logic to cube geometry.  Every number
anywhere is an exact rational.
"""

from .formula import (
    Formula,
    Impl,
    Max,
    Min,
    Neg,
    OPlus,
    OTimes,
    ParseError,
    Var,
    count_connectives,
    expand_derived,
    parse,
    to_text,
    top_dimension,
    variables_of,
)
from .geometry import (
    AffineFn,
    ConvexCell,
    LPResult,
    Point,
    Polyhedron,
    Simplex,
    feasible_point,
    flag_simplex,
    format_point,
    format_rat,
    in_cube,
    lex_sequence,
    lex_sign,
    lp_min,
    parse_point,
    rat,
    sign_threshold,
    unit_cube,
    vertices_of,
)
from .pl_engine import (
    Cell,
    DimensionError,
    PLFunction,
    RegionUnion,
    compile_formula,
    difference_min,
    dir_deriv,
    dump_pl,
    eval_formula,
    eval_pl,
    germ_cell,
    min_over_region,
    one_set,
    stable_step,
)
from .diffval import (
    DifferentialValuation,
    DominationReport,
    Validity,
    coordinate_probe,
    dominates,
    dominates_report,
    in_ideal,
    make_valuation,
    satisfies,
    validate,
)
from .consequence import (
    ConsequenceReport,
    InternalSoundnessError,
    Theory,
    WitnessReport,
    formula_from_interval,
    semantic_consequence,
    semantic_over_set,
    stable_consequence,
    witness_verify,
)
from .tangent import (
    ClosedSetDescription,
    PointSequence,
    PolyhedralSet,
    SSSReport,
    TangentReport,
    certify_outgoing,
    certify_tangent_sequence,
    cone_contains,
    sss_check,
    tangent_cone_polyhedral,
)
from .files import (
    FileFormatError,
    load_region,
    load_sequence,
    load_theory,
    load_valuation,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
