"""Amplitude damping and zero-temperature phase-covariant qubit dynamics.

Time is dimensionless throughout: ``t`` stands for ``lambda * t`` where
``lambda`` is the width of the Lorentzian reservoir, ``R = gamma_0 / lambda``
and ``beta = omega_c / lambda``.
"""

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from . import kernels
from .channels import ChoiState, KrausChannel
from .measures import RISE_TOL, ConsistencyError, monotonicity_witness, qi_rec
from .qmat import DEFAULT_TOL, DensityMatrix, ValidationError

IMAG_RESIDUE_TOL = 1e-9


class CPTPViolation(ValidationError):
    """A generated Choi matrix is not positive semidefinite."""

    def __init__(self, t, eigenvalue):
        self.t = t
        self.eigenvalue = eigenvalue
        super().__init__(f"Choi matrix not PSD at lambda*t={t!r} (eigenvalue {eigenvalue:.3e})")


# --------------------------------------------------------------------------
# amplitude damping
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AmplitudeDampingParams:
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"damping probability must lie in [0, 1], got {self.p}")


def ad_channel(params) -> KrausChannel:
    if not isinstance(params, AmplitudeDampingParams):
        params = AmplitudeDampingParams(float(params))
    p = params.p
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - p)]])
    k1 = np.array([[0.0, math.sqrt(p)], [0.0, 0.0]])
    return KrausChannel(np.stack([k0, k1]), name=f"amplitude-damping(p={p!r})")


def _xlog2x(x):
    x = np.asarray(x, dtype=np.float64)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log2(safe), 0.0)


def ad_coherence_closed_form(p):
    """Closed-form channel coherence of amplitude damping, in bits.

    ``(p-1)/2 log2((1-p)/2) + (2-p)/2 log2((2-p)/2) + 1/2``; the first term
    is taken as its limit 0 at ``p = 1``.  Accepts scalars or arrays.
    """
    p = np.asarray(p, dtype=np.float64)
    if np.any((p < 0) | (p > 1)):
        raise ValidationError("p must lie in [0, 1]")
    out = -_xlog2x((1.0 - p) / 2.0) + _xlog2x((2.0 - p) / 2.0) + 0.5
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# phase-covariant dynamics at T = 0
# --------------------------------------------------------------------------

def lorentzian_c(t, R):
    """``c(t)/c(0)`` for the Lorentzian reservoir, scalar or array ``t``.

    ``d = sqrt(1 - 2R)`` is taken on the principal complex branch, so for
    ``R > 1/2`` the hyperbolic functions turn into trigonometric ones.
    """
    arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    ratio, residue = kernels.lorentzian_ratio(arr, R)
    if residue > IMAG_RESIDUE_TOL:
        raise ConsistencyError(f"c(t) has imaginary residue {residue:.3e}")
    return float(ratio[0]) if np.ndim(t) == 0 else ratio


def _gamma_z_prefactor(s, alpha):
    if s == 1.0:
        raise ValidationError("s = 1 is outside the supported parameter set (singular prefactor)")
    return alpha * math.gamma(s) / (s - 1.0)


def gamma_z_closed_form(t, s, alpha=1.0, beta=1.0):
    """Accumulated dephasing ``Gamma_z`` for ``J(w) = alpha w^s w_c^(1-s) exp(-w/w_c)``.

    ``alpha Gamma(s)/(s-1) * (1 - (1+x^2)^(-s/2) [cos(s atan x) + x sin(s atan x)])``
    with ``x = beta * t``.
    """
    pref = _gamma_z_prefactor(s, alpha)
    arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = kernels.gamma_z(beta * arr, s, pref)
    return float(out[0]) if np.ndim(t) == 0 else out


def dephasing_rate_closed_form(t, s, alpha=1.0, beta=1.0):
    """Dephasing rate ``gamma_z`` (per unit ``lambda``), the time derivative of Gamma_z."""
    x = beta * np.asarray(t, dtype=np.float64)
    return alpha * beta * math.gamma(s) * (1.0 + x * x) ** (-0.5 * s) * np.sin(s * np.arctan(x))


def phase_covariant_coherence_closed_form(kappa, eta_par, eta_perp):
    """Channel coherence from the four-eigenvalue closed form.

    The two diagonal entries ``(1 +/- kappa + eta_par)/4`` of the coherent
    block are replaced by its eigenvalues
    ``(1 + eta_par +/- sqrt(kappa^2 + 4 eta_perp^2))/4``; the other two
    diagonal entries appear in both entropies and cancel.
    """
    scalar = np.ndim(kappa) == 0
    out = kernels.phase_cov_coherence(
        np.atleast_1d(kappa), np.atleast_1d(eta_par), np.atleast_1d(eta_perp)
    )
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class PhaseCovariantParams:
    R: float
    s: float
    alpha: float = 1.0
    beta: float = 1.0
    t_grid: Tuple[float, ...] = field(default=(0.0,))

    def __post_init__(self):
        for name in ("R", "s", "alpha", "beta"):
            val = getattr(self, name)
            if not (np.isfinite(val) and val > 0):
                raise ValidationError(f"{name} must be a positive number, got {val}")
        if self.s == 1.0:
            raise ValidationError("s = 1 is outside the supported parameter set")
        grid = tuple(float(x) for x in self.t_grid)
        if not grid:
            raise ValidationError("t_grid must not be empty")
        if grid[0] < 0 or np.any(np.diff(grid) <= 0):
            raise ValidationError("t_grid must be strictly increasing and start at >= 0")
        object.__setattr__(self, "t_grid", grid)

    @classmethod
    def on_uniform_grid(cls, R, s, alpha=1.0, beta=1.0, t_max=20.0, steps=400):
        grid = (0.0,) if t_max == 0 else tuple(np.linspace(0.0, t_max, steps))
        return cls(R, s, alpha, beta, grid)


@dataclass(frozen=True, eq=False)
class PhaseCovariantFrame:
    t: float
    Gamma: float
    Gamma_z: float
    kappa: float
    eta_par: float
    eta_perp: float
    choi: ChoiState
    coherence: float


def phase_covariant_choi_matrix(kappa, eta_par, eta_perp) -> np.ndarray:
    m = np.diag([
        (1 + kappa + eta_par) / 4,
        (1 - kappa - eta_par) / 4,
        (1 + kappa - eta_par) / 4,
        (1 - kappa + eta_par) / 4,
    ]).astype(np.complex128)
    m[0, 3] = m[3, 0] = eta_perp / 2
    return m


def _build_frames(t, params) -> List[PhaseCovariantFrame]:
    t = np.asarray(t, dtype=np.float64)
    ratio = lorentzian_c(t, params.R)
    gz = gamma_z_closed_form(t, params.s, params.alpha, params.beta)
    mod_u = ratio * ratio
    # eta_par = |u| directly, so zeros of c(t) need no log
    with np.errstate(divide="ignore"):
        big_gamma = 0.0 - np.log(mod_u)  # avoids -0.0 at t = 0
    kappa = mod_u - 1.0
    eta_par = mod_u
    eta_perp = np.abs(ratio) * np.exp(-gz)
    frames = []
    for k in range(t.size):
        mat = phase_covariant_choi_matrix(kappa[k], eta_par[k], eta_perp[k])
        lo = np.linalg.eigvalsh(mat)[0]
        if lo < -DEFAULT_TOL:
            raise CPTPViolation(float(t[k]), float(lo))
        choi = ChoiState(DensityMatrix(mat))
        frames.append(PhaseCovariantFrame(
            t=float(t[k]),
            Gamma=float(big_gamma[k]),
            Gamma_z=float(gz[k]),
            kappa=float(kappa[k]),
            eta_par=float(eta_par[k]),
            eta_perp=float(eta_perp[k]),
            choi=choi,
            coherence=qi_rec(choi),
        ))
    return frames


def phase_covariant_frame(t: float, params: PhaseCovariantParams) -> PhaseCovariantFrame:
    if t < 0:
        raise ValidationError("t must be >= 0")
    return _build_frames([t], params)[0]


@dataclass(frozen=True, eq=False)
class PhaseCovariantTrajectory:
    params: PhaseCovariantParams
    frames: List[PhaseCovariantFrame]
    rising: List[Tuple[int, int]]

    @property
    def times(self) -> np.ndarray:
        return np.array([f.t for f in self.frames])

    @property
    def coherence(self) -> np.ndarray:
        return np.array([f.coherence for f in self.frames])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(f, name) for f in self.frames])


def phase_covariant_trajectory(params: PhaseCovariantParams, rise_tol: float = RISE_TOL):
    frames = _build_frames(params.t_grid, params)
    rising = monotonicity_witness(frames_as_trajectory(frames), rise_tol)
    return PhaseCovariantTrajectory(params, frames, rising)


def frames_as_trajectory(frames: Sequence[PhaseCovariantFrame]):
    """``[(t, choi), ...]`` pairs, the input format of ``monotonicity_witness``."""
    return [(f.t, f.choi) for f in frames]
