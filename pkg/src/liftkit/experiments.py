"""Error metrics, trial runner and (epsilon, beta) sweeps.

Each trial draws its lift vectors from ``default_rng((seed, t))``, so a cell
is reproducible no matter how cells are scheduled across threads.
"""

import functools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from .backend import MACHINE_EPS, as_matrix, eig_all, nearest_eigenpair
from .errors import DegenerateLift, DivisionDegenerate
from .lifting import build_lift, solve_nullpair
from .matgen import adjoint_lift_vectors, make_2x2, make_large, random_lift_vectors

__all__ = [
    "Small",
    "Large",
    "TrialResult",
    "SweepRecord",
    "CSV_COLUMNS",
    "ratio_error",
    "error_2x2",
    "error_large",
    "baseline_no_lift",
    "condition_s0",
    "run_trials",
    "aggregate",
    "run_cell",
    "sweep",
    "optimal_beta",
]

THREADS_ENV = "LIFTKIT_THREADS"


@dataclass(frozen=True)
class Small:
    """The 2x2 family ``M(epsilon)``."""

    epsilon: float


@dataclass(frozen=True)
class Large:
    """``M(epsilon)`` hidden in an ``n x n`` matrix by a seeded similarity."""

    n: int
    epsilon: float
    matrix_seed: int = 42


@dataclass(frozen=True)
class TrialResult:
    """One random lift.  Flagged (degenerate) trials carry NaN metrics."""

    error: float
    lambda0_abs: float
    cond_recip: float
    baseline_error: float
    seed: int
    trial: int
    flagged: bool = False


@dataclass(frozen=True)
class SweepRecord:
    epsilon: float
    beta: float
    n_trials: int
    n_flagged: int
    mean_error: float
    rms_error: float
    mean_lambda0_abs: float
    mean_cond_recip: float
    baseline_error: float


CSV_COLUMNS = tuple(f.name for f in fields(SweepRecord))


def ratio_error(u, ratio_ref, scale=None):
    """``|u[1]/u[0] - ratio_ref|``; ``scale`` defaults to ``||u||``."""
    u = np.asarray(u)
    if scale is None:
        scale = np.linalg.norm(u)
    if abs(u[0]) < MACHINE_EPS * scale:
        raise DivisionDegenerate(f"leading component {abs(u[0]):.3e} is negligible")
    return float(abs(u[1] / u[0] - ratio_ref))


def error_2x2(family, pair):
    """Lifting error on the 2x2 problem, from the first two entries of Phi."""
    phi = pair.phi_lifted
    return ratio_error(phi[:2], family.ratio_plus, np.linalg.norm(phi))


def error_large(tm, pair):
    """Lifting error on the large problem after undoing the similarity."""
    u = tm.q @ pair.phi_lifted[:-1]
    return ratio_error(u, tm.ratio_plus, np.linalg.norm(pair.phi_lifted))


def baseline_no_lift(m, mu_plus, ratio_ref, transform=None):
    """Same ratio error for the eigenvector of ``m`` nearest ``mu_plus``."""
    _, vec = nearest_eigenpair(eig_all(as_matrix(m)), mu_plus)
    if transform is not None:
        vec = np.asarray(transform) @ vec
    return ratio_error(vec, ratio_ref)


def condition_s0(pair):
    """``s(0) = |Psi^H Phi|`` for the unit lifted nullpair.

    ``Psi^H`` is the adjoint left nullvector (``L^H Psi = 0``), which is
    ``conj(pair.psi_lifted)`` because the stored vector solves
    ``psi_lifted^T L = 0``.  The condition number of the zero eigenvalue is
    ``1 / s(0)``.
    """
    psi_adjoint = np.conj(pair.psi_lifted)
    return float(abs(np.vdot(psi_adjoint, pair.phi_lifted)))


@dataclass(frozen=True, eq=False)
class _Prepared:
    a: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    error: object
    baseline: float


@functools.lru_cache(maxsize=8)
def _prepare(problem):
    if isinstance(problem, Small):
        fam = make_2x2(problem.epsilon)
        baseline = baseline_no_lift(fam.m, fam.mu_plus, fam.ratio_plus)
        return _Prepared(fam.a, fam.right_nullvector(), fam.left_nullvector(),
                         functools.partial(error_2x2, fam), baseline)
    if isinstance(problem, Large):
        tm = make_large(problem.n, problem.epsilon, problem.matrix_seed)
        baseline = baseline_no_lift(tm.m, tm.mu_plus, tm.ratio_plus, transform=tm.q)
        return _Prepared(tm.a, tm.right_nullvector(), tm.left_nullvector(),
                         functools.partial(error_large, tm), baseline)
    raise TypeError(f"unknown problem {problem!r}")


def run_trials(problem, beta, n_trials, seed=42, strategy="random"):
    """Lift ``problem`` ``n_trials`` times with ``gamma = beta``.

    ``strategy="adjoint"`` lifts along the analytic nullvectors instead of
    random vectors; every trial is then identical.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    prep = _prepare(problem)
    n = prep.a.shape[0]
    out = []
    for t in range(n_trials):
        if strategy == "random":
            lift = random_lift_vectors(n, beta, beta, seed=(seed, t))
        elif strategy == "adjoint":
            lift = adjoint_lift_vectors(prep.phi, prep.psi, beta)
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        sys = build_lift(prep.a, lift, prep.phi, prep.psi)
        try:
            pair = solve_nullpair(sys)
            err = prep.error(pair)
        except (DegenerateLift, DivisionDegenerate):
            nan = float("nan")
            out.append(TrialResult(nan, nan, nan, prep.baseline, seed, t, flagged=True))
            continue
        out.append(TrialResult(
            error=err,
            lambda0_abs=abs(pair.lambda0),
            cond_recip=condition_s0(pair),
            baseline_error=prep.baseline,
            seed=seed,
            trial=t,
        ))
    return out


def aggregate(trials):
    """Mean and rms-about-the-mean over unflagged trials.

    Returns a dict of the statistical :class:`SweepRecord` fields.
    """
    if not trials:
        raise ValueError("no trials to aggregate")
    good = [t for t in trials if not t.flagged]
    nan = float("nan")
    if good:
        err = np.array([t.error for t in good])
        mean = float(err.mean())
        rms = float(np.sqrt(np.mean((err - mean) ** 2)))
        lam = float(np.mean([t.lambda0_abs for t in good]))
        s0 = float(np.mean([t.cond_recip for t in good]))
    else:
        mean = rms = lam = s0 = nan
    return {
        "n_trials": len(trials),
        "n_flagged": len(trials) - len(good),
        "mean_error": mean,
        "rms_error": rms,
        "mean_lambda0_abs": lam,
        "mean_cond_recip": s0,
        "baseline_error": trials[0].baseline_error,
    }


def run_cell(problem, beta, n_trials, seed=42):
    """One sweep cell: ``run_trials`` followed by ``aggregate``."""
    trials = run_trials(problem, beta, n_trials, seed)
    return SweepRecord(epsilon=problem.epsilon, beta=float(beta), **aggregate(trials))


def _max_workers(n_cells):
    env = os.environ.get(THREADS_ENV)
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(cap, n_cells))


def sweep(epsilons, betas, problem="small", n_trials=1000, seed=42, n=100, matrix_seed=42,
          workers=None):
    """Tabulate every ``(epsilon, beta)`` cell, epsilon outer, beta inner.

    ``problem`` is ``"small"`` or ``"large"`` (``n``, ``matrix_seed`` apply to
    the latter).  Cells run on a thread pool capped by ``workers`` or the
    ``LIFTKIT_THREADS`` environment variable; output order and values do not
    depend on the pool size.
    """
    epsilons = [float(e) for e in epsilons]
    betas = [float(b) for b in betas]
    if not epsilons or not betas:
        raise ValueError("epsilon and beta grids must be nonempty")
    if problem == "small":
        problems = [Small(e) for e in epsilons]
    elif problem == "large":
        problems = [Large(n, e, matrix_seed) for e in epsilons]
    else:
        raise ValueError(f"unknown problem {problem!r}")
    cells = [(p, b) for p in problems for b in betas]
    if workers is None:
        workers = _max_workers(len(cells))
    if workers <= 1:
        return [run_cell(p, b, n_trials, seed) for p, b in cells]
    # prepare each problem once before fanning out
    for p in problems:
        _prepare(p)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: run_cell(c[0], c[1], n_trials, seed), cells))


def optimal_beta(records):
    """``{epsilon: beta}`` minimizing the mean error in each epsilon row."""
    best = {}
    for rec in records:
        if math.isnan(rec.mean_error):
            continue
        cur = best.get(rec.epsilon)
        if cur is None or rec.mean_error < cur.mean_error:
            best[rec.epsilon] = rec
    return {eps: rec.beta for eps, rec in best.items()}

