"""Test problems: the 2x2 near-Jordan family, its large embedding, lift vectors."""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .backend import as_vector, phase_normalize, random_orthogonal
from .errors import SpectralCollision
from .lifting import LiftVectors, Strategy

__all__ = [
    "TwoByTwoFamily",
    "LargeTestMatrix",
    "make_2x2",
    "poisson_block",
    "poisson_grid_shape",
    "make_large",
    "random_lift_vectors",
    "adjoint_lift_vectors",
    "COLLISION_GAP",
]

COLLISION_GAP = 1e-3


def mu_pair(epsilon):
    """Both eigenvalues of ``[[pi, 1], [-pi**2/4, eps]]``, ``(mu_plus, mu_minus)``.

    When the roots are real and distinct ``mu_minus`` comes from the product
    of the roots to avoid cancellation.
    """
    root = cmath.sqrt(complex(epsilon * (epsilon - 2.0 * math.pi)))
    mu_plus = (math.pi + epsilon + root) / 2.0
    if root.imag == 0.0 and root.real != 0.0 and mu_plus != 0.0:
        return mu_plus, math.pi * (math.pi / 4.0 + epsilon) / mu_plus
    return mu_plus, (math.pi + epsilon - root) / 2.0


def _two_by_two(epsilon):
    return np.array([[math.pi, 1.0], [-math.pi ** 2 / 4.0, epsilon]])


@dataclass(frozen=True, eq=False)
class TwoByTwoFamily:
    """``M(eps) = [[pi, 1], [-pi^2/4, eps]]``, defective at ``eps = 0``.

    An eigenvector for eigenvalue ``mu`` has component ratio ``mu - pi``.
    """

    epsilon: float
    m: np.ndarray
    mu_plus: complex
    mu_minus: complex
    ratio_plus: complex

    @property
    def a(self):
        """``M - mu_plus I`` in complex arithmetic."""
        return self.m.astype(np.complex128) - self.mu_plus * np.eye(2)

    def right_nullvector(self):
        """Unit right nullvector of ``a`` from the closed form."""
        return phase_normalize(np.array([1.0, self.ratio_plus]))

    def left_nullvector(self):
        """Unit ``psi`` with ``psi @ a == 0``: ``(mu_plus - eps, 1)`` normalized."""
        return phase_normalize(np.array([self.mu_plus - self.epsilon, 1.0]))


def make_2x2(epsilon):
    epsilon = float(epsilon)
    if not math.isfinite(epsilon):
        raise ValueError("epsilon must be finite")
    mu_plus, mu_minus = mu_pair(epsilon)
    return TwoByTwoFamily(
        epsilon=epsilon,
        m=_two_by_two(epsilon),
        mu_plus=mu_plus,
        mu_minus=mu_minus,
        ratio_plus=mu_plus - math.pi,
    )


def _second_difference(k):
    return 2.0 * np.eye(k) - np.eye(k, k=1) - np.eye(k, k=-1)


def poisson_grid_shape(m_count):
    """Most nearly square ``(p, q)`` with ``p * q == m_count``, ``p <= q``."""
    p = math.isqrt(m_count)
    while p > 1 and m_count % p:
        p -= 1
    return p, m_count // p


def poisson_block(m_count, variant="auto"):
    """Dirichlet discrete Laplacian with ``m_count`` unknowns.

    ``variant="auto"`` uses the 5-point stencil on the most nearly square
    ``p x q`` grid (``p, q > 1``) and falls back to the 1-D second difference
    when ``m_count`` has no such factorization.  ``"1d"`` forces the
    tridiagonal matrix.

    >>> poisson_block(4).real
    array([[ 4., -1., -1.,  0.],
           [-1.,  4.,  0., -1.],
           [-1.,  0.,  4., -1.],
           [ 0., -1., -1.,  4.]])
    """
    if m_count < 1:
        raise ValueError("m_count must be >= 1")
    if variant not in ("auto", "1d"):
        raise ValueError(f"unknown Poisson variant {variant!r}")
    p, q = poisson_grid_shape(m_count)
    if variant == "1d" or p == 1:
        return _second_difference(m_count)
    return np.kron(_second_difference(p), np.eye(q)) + np.kron(np.eye(p), _second_difference(q))


@dataclass(frozen=True, eq=False)
class LargeTestMatrix:
    """``a = Q^T (C - mu_plus I) Q`` with ``C = blockdiag(M(eps), P)``.

    ``m`` keeps the unshifted ``Q^T C Q`` for the no-lift comparison and
    ``q`` is the similarity transform mapping nullvectors of ``a`` back to
    the block coordinates (``u = q @ x``).
    """

    n: int
    epsilon: float
    a: np.ndarray
    q: np.ndarray
    mu_plus: complex
    seed: int
    m: np.ndarray
    poisson_variant: str

    @property
    def ratio_plus(self):
        return self.mu_plus - math.pi

    def right_nullvector(self):
        phi = np.zeros(self.n, dtype=np.complex128)
        phi[:2] = make_2x2(self.epsilon).right_nullvector()
        return self.q.T @ phi

    def left_nullvector(self):
        psi = np.zeros(self.n, dtype=np.complex128)
        psi[:2] = make_2x2(self.epsilon).left_nullvector()
        return self.q.T @ psi


def make_large(n, epsilon, seed):
    """Hide ``M(eps)`` in an ``n x n`` matrix with no special structure.

    Raises
    ------
    SpectralCollision
        If every Poisson variant has an eigenvalue within ``COLLISION_GAP``
        of ``mu_plus``.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    fam = make_2x2(epsilon)
    for variant in ("auto", "1d"):
        p = poisson_block(n - 2, variant)
        gap = np.min(np.abs(np.linalg.eigvalsh(p) - fam.mu_plus))
        if gap > COLLISION_GAP:
            break
    else:
        raise SpectralCollision(
            f"Poisson block of size {n - 2} has an eigenvalue within "
            f"{COLLISION_GAP} of mu_plus={fam.mu_plus}")

    c = np.zeros((n, n))
    c[:2, :2] = fam.m
    c[2:, 2:] = p
    q = random_orthogonal(n, seed)
    shifted = c.astype(np.complex128) - fam.mu_plus * np.eye(n)
    return LargeTestMatrix(
        n=n,
        epsilon=fam.epsilon,
        a=q.T @ shifted @ q,
        q=q,
        mu_plus=fam.mu_plus,
        seed=seed,
        m=q.T @ c @ q,
        poisson_variant=variant,
    )


def _unit_uniform(rng, n):
    x = rng.uniform(-1.0, 1.0, n)
    return x / np.linalg.norm(x)


def random_lift_vectors(n, beta=1.0, gamma=1.0, seed=42):
    """``v = beta*v_r``, ``w = gamma*w_r`` with ``eta = omega = 1``.

    ``v_r`` and ``w_r`` are drawn componentwise from U[-1, 1] and normalized.
    ``seed`` is anything :func:`numpy.random.default_rng` accepts; the trial
    harness passes ``(seed, trial)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (beta > 0 and gamma > 0):
        raise ValueError("beta and gamma must be positive")
    rng = np.random.default_rng(seed)
    v_r = _unit_uniform(rng, n)
    w_r = _unit_uniform(rng, n)
    return LiftVectors(beta * v_r, 1.0, gamma * w_r, 1.0, beta=beta, gamma=gamma,
                       strategy=Strategy.RANDOM, seed=seed)


def adjoint_lift_vectors(phi, psi, beta=1.0):
    """Lift along the nullvectors themselves: ``v = beta*psi``, ``w = beta*phi``.

    Complex inputs are conjugated so that ``w.phi = beta*|phi|^2`` and
    ``psi.v = beta*|psi|^2`` hold by construction; real inputs are unaffected.
    """
    phi = as_vector(phi)
    psi = as_vector(psi, phi.shape[0])
    return LiftVectors(beta * np.conj(psi), 1.0, beta * np.conj(phi), 1.0,
                       beta=beta, gamma=beta, strategy=Strategy.ADJOINT)
