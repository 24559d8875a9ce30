"""Hot numeric kernels.

Every kernel exists twice: an explicit-loop version compiled with numba
``@njit`` and a vectorized pure-numpy version.  The public names bound at
module level point at one or the other, chosen once at import time:

* numba is used when it imports cleanly, unless
* ``QICOHERENCE_DISABLE_NUMBA`` is set to a truthy value (``1``, ``true``,
  ``yes``), in which case the numpy path is used.

Both families stay importable as :data:`NUMBA` and :data:`NUMPY` so that tests
and ``benchmarks/bench_kernels.py`` can compare them directly.
"""

import cmath
import math
import os
from types import SimpleNamespace

import numpy as np

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    _HAVE_NUMBA = False


def _flag_set(name):
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


USE_NUMBA = _HAVE_NUMBA and not _flag_set("QICOHERENCE_DISABLE_NUMBA")


def _jit(func):
    if _HAVE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


# --------------------------------------------------------------------------
# entropy of a spectrum
# --------------------------------------------------------------------------

@_jit
def _spectrum_entropy_loops(values, tol):
    total = 0.0
    for v in values:
        if v < -tol:
            raise ValueError("eigenvalue below -tol")
        if v > 0.0:
            total -= v * math.log2(v)
    return total


def _spectrum_entropy_numpy(values, tol):
    values = np.asarray(values, dtype=np.float64)
    if values.size and values.min() < -tol:
        raise ValueError("eigenvalue below -tol")
    pos = values[values > 0.0]
    return float(-np.sum(pos * np.log2(pos)))


# --------------------------------------------------------------------------
# bipartite index kernels, ordering A (x) S with A the slow index
# --------------------------------------------------------------------------

@_jit
def _dephase_s_loops(mat, dim_a, dim_s):
    n = dim_a * dim_s
    out = np.zeros((n, n), dtype=np.complex128)
    for a in range(dim_a):
        for b in range(dim_a):
            for s in range(dim_s):
                out[a * dim_s + s, b * dim_s + s] = mat[a * dim_s + s, b * dim_s + s]
    return out


def _dephase_s_numpy(mat, dim_a, dim_s):
    t = np.asarray(mat, dtype=np.complex128).reshape(dim_a, dim_s, dim_a, dim_s)
    mask = np.eye(dim_s, dtype=bool)[None, :, None, :]
    return np.where(mask, t, 0.0).reshape(dim_a * dim_s, dim_a * dim_s)


@_jit
def _partial_trace_loops(mat, dim_a, dim_s, keep_a):
    if keep_a:
        out = np.zeros((dim_a, dim_a), dtype=np.complex128)
        for a in range(dim_a):
            for b in range(dim_a):
                acc = 0.0j
                for s in range(dim_s):
                    acc += mat[a * dim_s + s, b * dim_s + s]
                out[a, b] = acc
    else:
        out = np.zeros((dim_s, dim_s), dtype=np.complex128)
        for s in range(dim_s):
            for r in range(dim_s):
                acc = 0.0j
                for a in range(dim_a):
                    acc += mat[a * dim_s + s, a * dim_s + r]
                out[s, r] = acc
    return out


def _partial_trace_numpy(mat, dim_a, dim_s, keep_a):
    t = np.asarray(mat, dtype=np.complex128).reshape(dim_a, dim_s, dim_a, dim_s)
    if keep_a:
        return np.einsum("asbs->ab", t)
    return np.einsum("asar->sr", t)


# --------------------------------------------------------------------------
# phase-covariant closed forms, evaluated over a grid of lambda*t
# --------------------------------------------------------------------------

@_jit
def _lorentzian_ratio_loops(t, coupling):
    n = t.shape[0]
    out = np.empty(n, dtype=np.float64)
    worst = 0.0
    d = cmath.sqrt(1.0 - 2.0 * coupling + 0.0j)
    for k in range(n):
        x = t[k]
        if abs(d) == 0.0:
            # d -> 0 limit of sinh(d t / 2) / d
            val = math.exp(-0.5 * x) * (1.0 + 0.5 * x)
            out[k] = val
            continue
        half = 0.5 * d * x
        # exp(-x/2) folded into each exponential so large x cannot overflow
        c = 0.5 * ((1.0 + 1.0 / d) * cmath.exp(half - 0.5 * x)
                   + (1.0 - 1.0 / d) * cmath.exp(-half - 0.5 * x))
        out[k] = c.real
        if abs(c.imag) > worst:
            worst = abs(c.imag)
    return out, worst


def _lorentzian_ratio_numpy(t, coupling):
    t = np.asarray(t, dtype=np.float64)
    d = np.sqrt(complex(1.0 - 2.0 * coupling))
    if d == 0:
        return np.exp(-0.5 * t) * (1.0 + 0.5 * t), 0.0
    half = 0.5 * d * t
    c = 0.5 * ((1.0 + 1.0 / d) * np.exp(half - 0.5 * t) + (1.0 - 1.0 / d) * np.exp(-half - 0.5 * t))
    worst = float(np.max(np.abs(c.imag))) if c.size else 0.0
    return np.ascontiguousarray(c.real), worst


@_jit
def _gamma_z_loops(x, s, prefactor):
    n = x.shape[0]
    out = np.empty(n, dtype=np.float64)
    for k in range(n):
        xc = x[k]
        th = math.atan(xc)
        damp = (1.0 + xc * xc) ** (-0.5 * s)
        out[k] = prefactor * (1.0 - damp * (math.cos(s * th) + xc * math.sin(s * th)))
    return out


def _gamma_z_numpy(x, s, prefactor):
    x = np.asarray(x, dtype=np.float64)
    th = np.arctan(x)
    damp = (1.0 + x * x) ** (-0.5 * s)
    return prefactor * (1.0 - damp * (np.cos(s * th) + x * np.sin(s * th)))


@_jit
def _xlogx_pos(v):
    if v > 0.0:
        return v * math.log2(v)
    return 0.0


@_jit
def _phase_cov_coherence_loops(kappa, eta_par, eta_perp):
    n = kappa.shape[0]
    out = np.empty(n, dtype=np.float64)
    for k in range(n):
        ka = kappa[k]
        ep = eta_par[k]
        root = math.sqrt(ka * ka + 4.0 * eta_perp[k] * eta_perp[k])
        acc = 0.0
        acc -= _xlogx_pos((1.0 + ka + ep) / 4.0)
        acc -= _xlogx_pos((1.0 - ka + ep) / 4.0)
        acc += _xlogx_pos((1.0 + ep + root) / 4.0)
        acc += _xlogx_pos((1.0 + ep - root) / 4.0)
        out[k] = acc
    return out


def _xlogx_numpy(v):
    v = np.asarray(v, dtype=np.float64)
    safe = np.where(v > 0.0, v, 1.0)
    return np.where(v > 0.0, v * np.log2(safe), 0.0)


def _phase_cov_coherence_numpy(kappa, eta_par, eta_perp):
    kappa = np.asarray(kappa, dtype=np.float64)
    eta_par = np.asarray(eta_par, dtype=np.float64)
    eta_perp = np.asarray(eta_perp, dtype=np.float64)
    root = np.sqrt(kappa**2 + 4.0 * eta_perp**2)
    return (
        -_xlogx_numpy((1.0 + kappa + eta_par) / 4.0)
        - _xlogx_numpy((1.0 - kappa + eta_par) / 4.0)
        + _xlogx_numpy((1.0 + eta_par + root) / 4.0)
        + _xlogx_numpy((1.0 + eta_par - root) / 4.0)
    )


NUMBA = SimpleNamespace(
    spectrum_entropy=_spectrum_entropy_loops,
    dephase_s=_dephase_s_loops,
    partial_trace=_partial_trace_loops,
    lorentzian_ratio=_lorentzian_ratio_loops,
    gamma_z=_gamma_z_loops,
    phase_cov_coherence=_phase_cov_coherence_loops,
)

NUMPY = SimpleNamespace(
    spectrum_entropy=_spectrum_entropy_numpy,
    dephase_s=_dephase_s_numpy,
    partial_trace=_partial_trace_numpy,
    lorentzian_ratio=_lorentzian_ratio_numpy,
    gamma_z=_gamma_z_numpy,
    phase_cov_coherence=_phase_cov_coherence_numpy,
)

BACKEND = "numba" if USE_NUMBA else "numpy"
_active = NUMBA if USE_NUMBA else NUMPY


def spectrum_entropy(values, tol):
    """Shannon entropy in bits of a (nearly) nonnegative spectrum.

    Entries in ``[-tol, 0]`` count as zero; anything below ``-tol`` raises
    ``ValueError``.
    """
    return float(_active.spectrum_entropy(np.ascontiguousarray(values, dtype=np.float64), tol))


def dephase_s(mat, dim_a, dim_s):
    return _active.dephase_s(np.ascontiguousarray(mat, dtype=np.complex128), dim_a, dim_s)


def partial_trace(mat, dim_a, dim_s, keep_a):
    return _active.partial_trace(
        np.ascontiguousarray(mat, dtype=np.complex128), dim_a, dim_s, bool(keep_a)
    )


def lorentzian_ratio(t, coupling):
    """Return ``(c(t)/c(0), max |imag residue|)`` on a grid of lambda*t."""
    re, worst = _active.lorentzian_ratio(
        np.ascontiguousarray(t, dtype=np.float64), float(coupling)
    )
    return np.asarray(re), float(worst)


def gamma_z(x, s, prefactor):
    return np.asarray(
        _active.gamma_z(np.ascontiguousarray(x, dtype=np.float64), float(s), float(prefactor))
    )


def phase_cov_coherence(kappa, eta_par, eta_perp):
    return np.asarray(
        _active.phase_cov_coherence(
            np.ascontiguousarray(kappa, dtype=np.float64),
            np.ascontiguousarray(eta_par, dtype=np.float64),
            np.ascontiguousarray(eta_perp, dtype=np.float64),
        )
    )
