"""Rank-one lifting of a matrix with a defective zero eigenvalue.

Given ``A`` (N x N) and border vectors ``vv = (v, eta)``, ``ww = (w, omega)``
the lifted matrix is::

    L = [[A, 0], [0^T, 0]] + outer(vv, ww)          # (N+1) x (N+1)

When ``w.phi``, ``psi.v`` and ``eta*omega`` are nonzero (``phi``/``psi`` the
right/left nullvectors of ``A``), zero is a simple eigenvalue of ``L`` and
the first N entries of its right nullvector are proportional to ``phi``.
For almost-defective ``A`` the bordered inner product

    psi.phi + (psi.v / eta) * (w.phi / omega)

must also be nonzero.  All inner products here are bilinear (``x^T y``);
the only conjugated product in the package is the condition number in
:mod:`liftkit.experiments`.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .backend import (
    MACHINE_EPS,
    as_matrix,
    as_vector,
    eig_all,
    left_nullpair,
    nearest_eigenpair,
    phase_normalize,
    svd_nullvectors,
)
from .errors import DegenerateLift, DimensionMismatch

__all__ = [
    "CONDITION_TOL",
    "DEGENERATE_TOL",
    "Strategy",
    "LiftVectors",
    "ConditionReport",
    "LiftedSystem",
    "NullPair",
    "build_lift",
    "check_conditions",
    "solve_nullpair",
    "verify_alpha",
    "gram_nondefect_check",
]

# A quantity counts as "nonzero" when its modulus exceeds this multiple of
# machine epsilon times the norms of the factors that produced it.
CONDITION_TOL = 1e3 * MACHINE_EPS
DEGENERATE_TOL = 1e3 * MACHINE_EPS


class Strategy(enum.Enum):
    RANDOM = "random"
    ADJOINT = "adjoint"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class LiftVectors:
    """Border vectors ``(v, eta)`` and ``(w, omega)`` plus how they were made."""

    v: np.ndarray
    eta: complex
    w: np.ndarray
    omega: complex
    beta: float = 1.0
    gamma: float = 1.0
    strategy: Strategy = Strategy.CUSTOM
    seed: object = None

    def __post_init__(self):
        v = as_vector(self.v)
        w = as_vector(self.w, v.shape[0])
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "eta", complex(self.eta))
        object.__setattr__(self, "omega", complex(self.omega))

    @property
    def n(self):
        return self.v.shape[0]

    @property
    def full_v(self):
        return np.append(self.v, self.eta)

    @property
    def full_w(self):
        return np.append(self.w, self.omega)

    @classmethod
    def from_columns(cls, vv, ww, **kwargs):
        """Build from the (N+1)-vectors ``vv = (v, eta)`` and ``ww = (w, omega)``."""
        vv = as_vector(vv)
        ww = as_vector(ww, vv.shape[0])
        return cls(vv[:-1], vv[-1], ww[:-1], ww[-1], **kwargs)


@dataclass(frozen=True)
class ConditionReport:
    w_dot_phi: complex
    psi_dot_v: complex
    eta_omega: complex
    lifted_inner: complex
    w_dot_phi_ok: bool
    psi_dot_v_ok: bool
    eta_omega_ok: bool
    lifted_inner_ok: bool

    @property
    def passed(self):
        return (self.w_dot_phi_ok and self.psi_dot_v_ok
                and self.eta_omega_ok and self.lifted_inner_ok)

    def flags(self):
        return {
            "w_dot_phi": self.w_dot_phi_ok,
            "psi_dot_v": self.psi_dot_v_ok,
            "eta_omega": self.eta_omega_ok,
            "lifted_inner": self.lifted_inner_ok,
        }

    def failed(self):
        return [name for name, ok in self.flags().items() if not ok]


@dataclass(frozen=True, eq=False)
class LiftedSystem:
    """The lifted matrix ``L`` with the data it was built from.

    ``phi`` and ``psi`` are the reference nullvectors of ``A`` used for the
    condition checks and for aligning the recovered nullvectors.
    """

    L: np.ndarray
    A: np.ndarray
    lift: LiftVectors
    checks: ConditionReport
    phi: np.ndarray
    psi: np.ndarray

    @property
    def n(self):
        return self.A.shape[0]


@dataclass(frozen=True, eq=False)
class NullPair:
    """Right/left nullvectors of ``L`` split into original and inflated parts.

    ``r`` and ``s`` are the least-squares multipliers with ``x ~= r*phi`` and
    ``y ~= s*psi`` against the reference nullvectors stored on the system.
    """

    phi_lifted: np.ndarray
    psi_lifted: np.ndarray
    lambda0: complex
    lambda0_left: complex
    recovered_right: np.ndarray
    recovered_left: np.ndarray
    xi: complex
    zeta: complex
    r: complex = None
    s: complex = None

    @property
    def x(self):
        return self.phi_lifted[:-1]

    @property
    def y(self):
        return self.psi_lifted[:-1]


def check_conditions(a, lift, phi, psi, tol=CONDITION_TOL):
    """Evaluate the three nonorthogonality conditions and the bordered product.

    Each "nonzero" test is ``|value| > tol * scale`` where ``scale`` is the
    product of the norms of the participating vectors (and ``|eta|``,
    ``|omega|``), so the flags are invariant under rescaling of the inputs.
    Failures are reported, never raised.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if lift.n != n:
        raise DimensionMismatch(f"lift vectors have length {lift.n}, matrix is {n}x{n}")
    phi = as_vector(phi, n)
    psi = as_vector(psi, n)

    w_phi = complex(lift.w @ phi)
    psi_v = complex(psi @ lift.v)
    eta_omega = lift.eta * lift.omega

    nphi = np.linalg.norm(phi)
    npsi = np.linalg.norm(psi)
    nv = np.linalg.norm(lift.v)
    nw = np.linalg.norm(lift.w)
    eta, omega = abs(lift.eta), abs(lift.omega)

    if eta_omega != 0:
        lifted = complex(psi @ phi) + (psi_v / lift.eta) * (w_phi / lift.omega)
        lifted_scale = npsi * nphi + (npsi * nv / eta) * (nw * nphi / omega)
    else:
        lifted = complex("nan")
        lifted_scale = np.inf

    return ConditionReport(
        w_dot_phi=w_phi,
        psi_dot_v=psi_v,
        eta_omega=eta_omega,
        lifted_inner=lifted,
        w_dot_phi_ok=bool(abs(w_phi) > tol * nw * nphi),
        psi_dot_v_ok=bool(abs(psi_v) > tol * npsi * nv),
        eta_omega_ok=bool(abs(eta_omega) > tol * eta * omega),
        lifted_inner_ok=bool(abs(lifted) > tol * lifted_scale),
    )


def build_lift(a, lift, phi=None, psi=None):
    """Assemble the lifted matrix and its condition report.

    Parameters
    ----------
    a : (N, N) array_like
        Matrix whose (near-)zero eigenvalue is to be lifted.  Shift by the
        eigenvalue of interest beforehand.
    lift : LiftVectors
    phi, psi : (N,) array_like, optional
        Reference right/left nullvectors of ``a``.  When omitted they are
        taken from the smallest singular triple of ``a``.

    Returns
    -------
    LiftedSystem
        Construction never fails on unmet conditions; see ``checks``.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if lift.n != n:
        raise DimensionMismatch(f"lift vectors have length {lift.n}, matrix is {n}x{n}")
    if phi is None or psi is None:
        svd_phi, svd_psi, _ = svd_nullvectors(a)
        phi = svd_phi if phi is None else phi
        psi = svd_psi if psi is None else psi
    phi = as_vector(phi, n)
    psi = as_vector(psi, n)

    L = np.zeros((n + 1, n + 1), dtype=np.complex128)
    L[:n, :n] = a
    L += np.outer(lift.full_v, lift.full_w)
    checks = check_conditions(a, lift, phi, psi)
    return LiftedSystem(L=L, A=a, lift=lift, checks=checks, phi=phi, psi=psi)


def solve_nullpair(sys):
    """Compute the lifted nullpair and project it back to the original space.

    Raises
    ------
    DegenerateLift
        If the inflated component of either nullvector is below
        ``DEGENERATE_TOL``; the lift then carries no usable information.
    """
    n = sys.n
    lam0, Phi = nearest_eigenpair(eig_all(sys.L), 0.0)
    lam0_left, Psi = left_nullpair(sys.L, 0.0)
    x, xi = Phi[:n], complex(Phi[n])
    y, zeta = Psi[:n], complex(Psi[n])
    if abs(xi) < DEGENERATE_TOL or abs(zeta) < DEGENERATE_TOL:
        raise DegenerateLift(
            f"inflated components too small: |xi|={abs(xi):.3e}, |zeta|={abs(zeta):.3e}",
            xi=xi, zeta=zeta,
        )
    r = complex(np.vdot(sys.phi, x) / np.vdot(sys.phi, sys.phi))
    s = complex(np.vdot(sys.psi, y) / np.vdot(sys.psi, sys.psi))
    return NullPair(
        phi_lifted=Phi,
        psi_lifted=Psi,
        lambda0=lam0,
        lambda0_left=lam0_left,
        recovered_right=phase_normalize(x),
        recovered_left=phase_normalize(y),
        xi=xi,
        zeta=zeta,
        r=r,
        s=s,
    )


def verify_alpha(sys, pair):
    """Return ``alpha = w.x + omega*xi``, which vanishes for a true nullvector."""
    x = pair.phi_lifted[:-1]
    xi = pair.phi_lifted[-1]
    return complex(sys.lift.w @ x + sys.lift.omega * xi)


def gram_nondefect_check(right_null, left_null, tol=CONDITION_TOL):
    """Gram test for a multiple zero eigenvalue.

    ``G[j, i] = Psi_j . Phi_i``.  The zero eigenvalue is nondefective iff no
    right nullvector is orthogonal to the whole left nullspace, i.e. iff
    ``G`` is nonsingular.  Returns ``(G, smallest_singular_value > tol)``.
    """
    right = [as_vector(p) for p in right_null]
    left = [as_vector(p) for p in left_null]
    if not right or len(right) != len(left):
        raise DimensionMismatch(
            f"need equal, nonzero numbers of right/left vectors ({len(right)} vs {len(left)})")
    dim = right[0].shape[0]
    if any(p.shape[0] != dim for p in right + left):
        raise DimensionMismatch("nullvectors differ in length")
    G = np.array([[complex(pj @ fi) for fi in right] for pj in left])
    if G.shape == (1, 1):
        sigma = abs(G[0, 0])
    else:
        sigma = float(np.linalg.svd(G, compute_uv=False)[-1])
    return G, bool(sigma > tol)
