"""Correlation sums of multiplicative functions against their summatory past,
the zeta function on and near the critical strip, and sums over nontrivial
zeros, with reproducible compensated accumulation throughout."""

from .correlation import (
    CompensatedSum,
    CorrAccumulator,
    CorrCheckpoint,
    CorrKindPair,
    WeightedSumParams,
    correlation_checkpoints,
    normalized,
    shifted_autocorr,
    weighted_theorem_sum,
)
from .sieve import (
    DEFAULT_SEGMENT_CAPACITY,
    ArithmeticFunctionKind,
    ArithmeticSegment,
    SummatoryState,
    naive_value,
    primes_upto,
    sieve_segment,
    summatory_stream,
)
from .zeros import (
    ZeroRecord,
    ZeroSumReport,
    ZeroTable,
    ZeroTableError,
    fnv1a64,
    load_zeros,
    moment_j,
    reconstruct_liouville,
    reconstruct_mertens,
    sum_a,
    sum_b,
    sum_c,
    zero_sum_checkpoints,
    zero_sum_report,
)
from .zeta import (
    AccuracyError,
    EulerMaclaurinParams,
    ReferenceConstants,
    bernoulli_even,
    certified_bound,
    constants,
    k_series,
    zeta,
    zeta_line_batch,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "ArithmeticFunctionKind",
    "ArithmeticSegment",
    "CompensatedSum",
    "CorrAccumulator",
    "CorrCheckpoint",
    "CorrKindPair",
    "DEFAULT_SEGMENT_CAPACITY",
    "EulerMaclaurinParams",
    "ReferenceConstants",
    "SummatoryState",
    "WeightedSumParams",
    "ZeroRecord",
    "ZeroSumReport",
    "ZeroTable",
    "ZeroTableError",
    "bernoulli_even",
    "certified_bound",
    "constants",
    "correlation_checkpoints",
    "fnv1a64",
    "k_series",
    "load_zeros",
    "moment_j",
    "naive_value",
    "normalized",
    "primes_upto",
    "reconstruct_liouville",
    "reconstruct_mertens",
    "shifted_autocorr",
    "sieve_segment",
    "sum_a",
    "sum_b",
    "sum_c",
    "summatory_stream",
    "weighted_theorem_sum",
    "zeta",
    "zeta_line_batch",
    "zero_sum_checkpoints",
    "zero_sum_report",
    "__version__",
]
