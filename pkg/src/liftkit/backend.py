"""Dense eigendecomposition wrapper and eigenpair selection.

Everything is carried as ``complex128`` even for real input, so a single
code path covers both the real and the complex-shifted problems.  The
decomposition itself is LAPACK ``geev`` through :func:`numpy.linalg.eig`.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BackendFailure, DimensionMismatch, NonSquare, ZeroVector

__all__ = [
    "MACHINE_EPS",
    "EigenPairSet",
    "as_matrix",
    "as_vector",
    "eig_all",
    "nearest_eigenpair",
    "left_nullpair",
    "phase_normalize",
    "random_orthogonal",
    "svd_nullvectors",
    "residual_tolerance",
]

MACHINE_EPS = float(np.finfo(np.float64).eps)


def as_matrix(m, square=True):
    """Return ``m`` as a finite complex 2-D array (a copy is not forced)."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise NonSquare(f"matrix is {m.shape[0]}x{m.shape[1]}, not square")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_vector(v, n=None):
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise DimensionMismatch(f"expected length {n}, got {v.shape[0]}")
    return v


@dataclass(frozen=True, eq=False)
class EigenPairSet:
    """All eigenvalues of a matrix with unit right eigenvectors as columns."""

    values: np.ndarray
    right_vectors: np.ndarray
    machine_eps: float = MACHINE_EPS

    def __len__(self):
        return self.values.shape[0]

    def residuals(self, m):
        """Column-wise ``||m v_i - lambda_i v_i||``."""
        m = np.asarray(m, dtype=np.complex128)
        r = m @ self.right_vectors - self.right_vectors * self.values
        return np.linalg.norm(r, axis=0)


def eig_all(m):
    """Eigenvalues and unit right eigenvectors of a square matrix.

    Every returned pair satisfies ``||m v - lam v|| <= residual_tolerance(m)``.

    Raises
    ------
    NonSquare
        If ``m`` is not square.
    BackendFailure
        If LAPACK reports non-convergence or the residual bound cannot be met.
    """
    m = as_matrix(m)
    try:
        values, vectors = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        # geev can fail to converge on entries spanning ~100 orders of
        # magnitude; dropping entries below eps*||m|| is a perturbation
        # well inside the residual contract, checked against m below.
        tiny = np.abs(m) < MACHINE_EPS * np.linalg.norm(m)
        if not tiny.any():
            raise BackendFailure(str(exc)) from exc
        try:
            values, vectors = np.linalg.eig(np.where(tiny, 0.0, m))
        except np.linalg.LinAlgError:
            raise BackendFailure(str(exc)) from exc
    vectors = vectors / np.linalg.norm(vectors, axis=0)
    pairs = EigenPairSet(values, vectors)
    bound = residual_tolerance(m)
    bad = np.flatnonzero(~(pairs.residuals(m) <= bound))
    if bad.size:
        # geev's balancing can return garbage vectors when entries span
        # hundreds of orders of magnitude; fall back to the SVD null
        # direction of the shifted matrix for those columns only.
        eye = np.eye(m.shape[0])
        for k in bad:
            _, _, vh = np.linalg.svd(m - values[k] * eye)
            vectors[:, k] = np.conj(vh[-1])
        pairs = EigenPairSet(values, vectors)
        if not np.all(pairs.residuals(m)[bad] <= bound):
            raise BackendFailure("eigenvector residuals exceed the backend contract")
    return pairs


def residual_tolerance(m):
    """``100 * n * ||m||_F * eps``, the residual every returned pair must meet."""
    m = np.asarray(m)
    return 100 * m.shape[0] * float(np.linalg.norm(m)) * MACHINE_EPS


def phase_normalize(v):
    """Scale ``v`` to unit norm with its largest entry real and positive.

    Vectors already in that form are returned unchanged (as a copy), which
    makes the map exactly idempotent.
    """
    v = np.array(v, dtype=np.complex128)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {v.shape}")
    if _is_phase_normal(v):
        return v
    norm = np.linalg.norm(v)
    if not norm > 0.0 or not np.isfinite(norm):
        raise ZeroVector("cannot normalize a zero or non-finite vector")
    u = v / norm
    k = int(np.argmax(np.abs(u)))
    c = u[k]
    u = u * (np.conj(c) / abs(c))
    u[k] = abs(c)
    return u


def _is_phase_normal(v):
    if v.size == 0:
        return False
    mod = np.abs(v)
    top = mod.max()
    if not top > 0.0 or abs(np.linalg.norm(v) - 1.0) > 8 * MACHINE_EPS:
        return False
    cand = (v.imag == 0.0) & (v.real > 0.0) & (mod >= top * (1.0 - 8 * MACHINE_EPS))
    return bool(cand.any())


def nearest_eigenpair(pairs, target):
    """Eigenpair whose eigenvalue is closest to ``target``.

    Ties go to the lowest index.  The vector is phase-normalized.
    """
    if len(pairs) == 0:
        raise ValueError("empty eigenpair set")
    k = int(np.argmin(np.abs(pairs.values - complex(target))))
    return complex(pairs.values[k]), phase_normalize(pairs.right_vectors[:, k])


def left_nullpair(m, target=0.0):
    """Eigenpair of the plain transpose ``m.T`` nearest ``target``.

    The returned ``y`` satisfies ``y @ m ~= lam * y`` (bilinear, no
    conjugation).
    """
    m = as_matrix(m)
    return nearest_eigenpair(eig_all(m.T), target)


def svd_nullvectors(a):
    """Right and left null directions of ``a`` from its smallest singular triple.

    Returns unit ``(phi, psi, sigma_min)`` with ``a @ phi ~= 0`` and
    ``psi @ a ~= 0``.  For a zero eigenvalue of geometric multiplicity one
    these directions stay well conditioned even when the eigenvalue is
    defective, unlike eigenvectors returned by :func:`eig_all`.
    """
    a = as_matrix(a)
    try:
        u, s, vh = np.linalg.svd(a)
    except np.linalg.LinAlgError as exc:
        raise BackendFailure(str(exc)) from exc
    phi = phase_normalize(np.conj(vh[-1]))
    psi = phase_normalize(np.conj(u[:, -1]))
    return phi, psi, float(s[-1])


def random_orthogonal(n, seed):
    """Seeded real orthogonal ``n x n`` matrix.

    QR of a standard Gaussian matrix with the sign of each column fixed so
    that ``R`` has a positive diagonal.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    return q * d
