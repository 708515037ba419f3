"""Nullvectors of defective eigenvalues by rank-one lifting.

>>> import numpy as np
>>> from liftkit import make_2x2, random_lift_vectors, build_lift, solve_nullpair
>>> fam = make_2x2(0.0)
>>> sys = build_lift(fam.a, random_lift_vectors(2, beta=1.0, seed=1))
>>> pair = solve_nullpair(sys)
>>> x = pair.recovered_right
>>> bool(abs(x[1] / x[0] - fam.ratio_plus) < 1e-12)
True
"""

from .backend import (
    EigenPairSet,
    eig_all,
    left_nullpair,
    nearest_eigenpair,
    phase_normalize,
    random_orthogonal,
    svd_nullvectors,
)
from .errors import (
    BackendFailure,
    DegenerateLift,
    DimensionError,
    DimensionMismatch,
    DivisionDegenerate,
    LiftkitError,
    NonSquare,
    ParseError,
    SpectralCollision,
    ZeroVector,
)
from .experiments import (
    Large,
    Small,
    SweepRecord,
    TrialResult,
    aggregate,
    baseline_no_lift,
    condition_s0,
    error_2x2,
    error_large,
    run_trials,
    sweep,
)
from .lifting import (
    ConditionReport,
    LiftedSystem,
    LiftVectors,
    NullPair,
    Strategy,
    build_lift,
    check_conditions,
    gram_nondefect_check,
    solve_nullpair,
    verify_alpha,
)
from .matgen import (
    LargeTestMatrix,
    TwoByTwoFamily,
    adjoint_lift_vectors,
    make_2x2,
    make_large,
    poisson_block,
    random_lift_vectors,
)
from .mmio import emit_csv, read_csv, read_matrix, write_matrix

__version__ = "0.1.0"
