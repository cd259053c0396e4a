"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`BCHError`
and carries a stable machine-readable ``code`` that the CLI reports.
"""


class BCHError(Exception):
    code = "bch_error"


class ExponentOverflow(BCHError, OverflowError):
    code = "exponent_overflow"


# jacobi
class SingularSystem(BCHError):
    code = "singular_system"


class InconsistentSystem(BCHError):
    code = "inconsistent_system"


# triple
class JacobiViolation(BCHError):
    code = "jacobi_violation"


class NoConvergence(BCHError):
    code = "no_convergence"


class DegenerateSplit(BCHError):
    code = "degenerate_split"


class NotARoot(BCHError):
    code = "not_a_root"


class OracleMismatch(BCHError):
    code = "oracle_mismatch"


# virasoro
class ZeroParameter(BCHError, ValueError):
    code = "zero_parameter"


class ClosureViolation(BCHError):
    code = "closure_violation"


# mat2
class NotInImage(BCHError):
    code = "not_in_image"


class NotUnimodular(BCHError, ValueError):
    code = "not_unimodular"


class SingularMatrix(BCHError, ValueError):
    code = "singular_matrix"


class ZeroCorner(BCHError):
    code = "zero_corner"


class ScalarMatrix(BCHError):
    code = "scalar_matrix"


class DegenerateGeometry(BCHError):
    code = "degenerate_geometry"


# oracle
class DimensionMismatch(BCHError, ValueError):
    code = "dimension_mismatch"


class OrderOutOfRange(BCHError, ValueError):
    code = "order_out_of_range"


class InvalidBracketTable(BCHError, ValueError):
    code = "invalid_bracket_table"
