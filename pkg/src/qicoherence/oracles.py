"""Independent numerical oracles used to cross-check the closed forms.

Nothing in the main computational path calls into this module.  The
optimizers evaluate relative entropies through ``scipy.linalg.logm`` rather
than the eigenvalue route of :mod:`qicoherence.qmat`, and the quadratures
integrate the spectral density directly.
"""

import numpy as np
from scipy.linalg import logm
from scipy.optimize import minimize

LN2 = np.log(2.0)


def _tr_rho_log2(rho, sigma):
    return float(np.trace(rho @ logm(sigma)).real / LN2)


def relative_entropy_logm(rho, sigma) -> float:
    """``tr rho (log2 rho - log2 sigma)`` for full-rank ``rho`` and ``sigma``."""
    return _tr_rho_log2(rho, rho) - _tr_rho_log2(rho, sigma)


def _softmax(x):
    z = np.exp(x - x.max())
    return z / z.sum()


def rec_by_minimization(rho, starts=3, seed=0) -> float:
    """Minimize ``S(rho || delta)`` over diagonal states ``delta``.

    The simplex is parametrized by softmax logits; the best of ``starts``
    BFGS runs is returned.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    neg_entropy = _tr_rho_log2(rho, rho)
    pops = np.diag(rho).real

    def objective(x):
        p = _softmax(x)
        # tr rho log2(diag p) only involves the populations of rho
        return neg_entropy - float(np.dot(pops, np.log2(p)))

    rng = np.random.default_rng(seed)
    best = np.inf
    for _ in range(starts):
        res = minimize(objective, rng.normal(size=d), method="BFGS", options={"gtol": 1e-10})
        best = min(best, res.fun)
    return best


def _bloch_state(x):
    n = np.linalg.norm(x)
    r = x * (np.tanh(n) / n) if n > 0 else x
    return 0.5 * np.array(
        [[1 + r[2], r[0] - 1j * r[1]], [r[0] + 1j * r[1], 1 - r[2]]], dtype=np.complex128
    )


def _qi_state(params):
    lam = 1.0 / (1.0 + np.exp(-params[6]))
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])
    # A (x) S ordering: the incoherent projector sits on S
    return lam * np.kron(_bloch_state(params[:3]), p0) + (1 - lam) * np.kron(
        _bloch_state(params[3:6]), p1
    )


def qi_rec_by_minimization(omega, starts=20, seed=0) -> float:
    """Minimize ``S(omega || sum_i l_i rho_i (x) |i><i|)`` for a two-qubit ``omega``.

    ``rho_i`` range over the open Bloch ball and ``l`` over the open simplex.
    Local BFGS from ``starts`` random points; the smallest value wins.
    """
    omega = np.asarray(omega, dtype=np.complex128)
    neg_entropy = _tr_rho_log2(omega, omega) if np.linalg.eigvalsh(omega)[0] > 1e-12 else None
    if neg_entropy is None:
        w = np.linalg.eigvalsh(omega)
        w = w[w > 1e-15]
        neg_entropy = float(np.sum(w * np.log2(w)))

    def objective(x):
        return neg_entropy - _tr_rho_log2(omega, _qi_state(x))

    rng = np.random.default_rng(seed)
    best = np.inf
    for _ in range(starts):
        res = minimize(objective, rng.normal(scale=0.5, size=7), method="BFGS")
        best = min(best, res.fun)
    return best


# --------------------------------------------------------------------------
# quadrature
# --------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def composite_gauss_legendre(f, a, b, abs_tol=1e-9, panels=32, max_panels=2**16):
    """Integrate ``f`` on ``[a, b]`` with 16-point Gauss-Legendre panels.

    The panel count doubles until successive estimates differ by less than
    ``abs_tol``.  ``f`` must accept a numpy array.
    """

    def estimate(n):
        edges = np.linspace(a, b, n + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        x = mid[:, None] + half[:, None] * _GL_NODES[None, :]
        return float(np.sum(half[:, None] * _GL_WEIGHTS[None, :] * f(x)))

    prev = estimate(panels)
    while panels < max_panels:
        panels *= 2
        cur = estimate(panels)
        if abs(cur - prev) < abs_tol:
            return cur
        prev = cur
    raise RuntimeError(f"quadrature did not converge to {abs_tol} with {max_panels} panels")


def _spectral_quadrature(kernel, s, alpha, beta, cutoff_factor=50.0):
    # w = v^2 tames the w^s behaviour at the origin
    def integrand(v):
        w = v * v
        j = alpha * w**s * beta ** (1.0 - s) * np.exp(-w / beta)
        return j * kernel(w) * 2.0 * v

    return composite_gauss_legendre(integrand, 0.0, np.sqrt(cutoff_factor * beta))


def dephasing_rate_quadrature(t, s, alpha=1.0, beta=1.0) -> float:
    """``gamma_z(t) = int_0^inf J(w) sin(w t) / w dw`` at zero temperature."""
    return _spectral_quadrature(lambda w: np.sin(w * t) / w, s, alpha, beta)


def dephasing_integral_quadrature(t, s, alpha=1.0, beta=1.0) -> float:
    """``Gamma_z(t) = int_0^t gamma_z = int_0^inf J(w) (1 - cos w t) / w^2 dw``."""
    return _spectral_quadrature(lambda w: 2.0 * np.sin(0.5 * w * t) ** 2 / (w * w), s, alpha, beta)
