"""Coherence and discord functionals of states and channels (bits)."""

from dataclasses import asdict, dataclass

import numpy as np

from .channels import (
    ChoiState,
    KrausChannel,
    choi_from_kraus,
    is_coherence_breaking,
    is_incoherent_kraus,
    is_unital,
)
from .qmat import (
    as_density,
    dephase,
    dephase_s,
    mutual_information,
    partial_trace,
    von_neumann_entropy,
)

IDENTITY_TOL = 1e-8
CONSISTENCY_TOL = 1e-6
RISE_TOL = 1e-9


class ConsistencyError(RuntimeError):
    """An analytic identity failed by more than numerical noise allows."""


def _choi(x) -> ChoiState:
    if isinstance(x, ChoiState):
        return x
    if isinstance(x, KrausChannel):
        return choi_from_kraus(x)
    raise TypeError(f"expected a KrausChannel or ChoiState, got {type(x).__name__}")


def rec(rho) -> float:
    """Relative entropy of coherence ``S(rho_diag) - S(rho)``."""
    rho = as_density(rho)
    return von_neumann_entropy(dephase(rho)) - von_neumann_entropy(rho)


def qi_rec(channel) -> float:
    """Quantum-incoherent relative entropy of coherence of a channel.

    ``S(Delta^S(Omega)) - S(Omega)`` for the Choi state ``Omega``; accepts a
    KrausChannel or a ChoiState.
    """
    omega = _choi(channel)
    return von_neumann_entropy(dephase_s(omega)) - von_neumann_entropy(omega)


def asym_discord(omega) -> float:
    omega = _choi(omega)
    return mutual_information(omega) - mutual_information(dephase_s(omega))


def sym_discord(omega) -> float:
    omega = _choi(omega)
    return mutual_information(omega) - mutual_information(dephase(omega.state), omega.label)


def rec_choi(omega) -> float:
    return rec(_choi(omega).state)


@dataclass(frozen=True)
class CoherenceReport:
    dim: int
    rec_output_marginal: float
    rec_ancilla_marginal: float
    qi_rec: float
    asym_discord: float
    sym_discord: float
    rec_choi: float
    unital: bool
    incoherent_kraus: bool
    coherence_breaking: bool
    # |C_QI - C_r(rho_S) - D^{A|S}|
    residual_qi: float
    # |C_r(Omega) - C_r(rho_S) - C_r(rho_A) - D|
    residual_qubit: float

    def as_dict(self) -> dict:
        return asdict(self)


def decomposition_check(ch: KrausChannel) -> CoherenceReport:
    """Evaluate every measure of ``ch`` and verify the two decomposition identities.

    Raises ConsistencyError if either identity is off by more than
    ``CONSISTENCY_TOL``; residuals are reported either way.  The symmetric
    identity holds for any bipartite state, so it is checked for every ``d``.
    """
    omega = choi_from_kraus(ch)
    rho_s = partial_trace(omega, keep="S")
    rho_a = partial_trace(omega, keep="A")
    c_s = rec(rho_s)
    c_a = rec(rho_a)
    c_qi = qi_rec(omega)
    d_as = asym_discord(omega)
    d_sym = sym_discord(omega)
    c_choi = rec_choi(omega)
    report = CoherenceReport(
        dim=ch.dim,
        rec_output_marginal=c_s,
        rec_ancilla_marginal=c_a,
        qi_rec=c_qi,
        asym_discord=d_as,
        sym_discord=d_sym,
        rec_choi=c_choi,
        unital=is_unital(ch),
        incoherent_kraus=is_incoherent_kraus(ch),
        coherence_breaking=is_coherence_breaking(omega),
        residual_qi=abs(c_qi - c_s - d_as),
        residual_qubit=abs(c_choi - c_s - c_a - d_sym),
    )
    worst = max(report.residual_qi, report.residual_qubit)
    if worst > CONSISTENCY_TOL:
        raise ConsistencyError(f"decomposition identity violated by {worst:.3e}")
    return report


def rising_intervals(values, rise_tol: float = RISE_TOL):
    """Maximal index runs ``(i, j)`` over which ``values`` rises at every step.

    A step ``k -> k+1`` rises when ``values[k+1] > values[k] + rise_tol``.
    """
    v = np.asarray(values, dtype=np.float64)
    rises = np.diff(v) > rise_tol
    out = []
    start = None
    for k, up in enumerate(rises):
        if up and start is None:
            start = k
        elif not up and start is not None:
            out.append((start, k))
            start = None
    if start is not None:
        out.append((start, len(rises)))
    return out


def monotonicity_witness(trajectory, rise_tol: float = RISE_TOL):
    """Rising intervals of the channel coherence along ``[(t, ChoiState), ...]``.

    Divisible incoherent dynamics never raises the coherence, so a non-empty
    result witnesses non-Markovianity.  An empty result proves nothing.
    """
    times = np.array([t for t, _ in trajectory], dtype=np.float64)
    if np.any(np.diff(times) <= 0):
        raise ValueError("trajectory times must be strictly increasing")
    values = [qi_rec(omega) for _, omega in trajectory]
    return rising_intervals(values, rise_tol)
