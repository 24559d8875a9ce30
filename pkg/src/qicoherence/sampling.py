"""Random states and channels for property checks and the acceptance suite."""

import numpy as np

from .channels import KrausChannel, cbc_qubit_choi, kraus_from_choi, measure_and_prepare


def _rng(seed_or_rng):
    return np.random.default_rng(seed_or_rng)


def ginibre(rng, rows, cols):
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_density_matrix(d, rng=None, rank=None) -> np.ndarray:
    """Ginibre-ensemble density matrix (full rank unless ``rank`` is given)."""
    rng = _rng(rng)
    g = ginibre(rng, d, rank or d)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure_state(d, rng=None) -> np.ndarray:
    rng = _rng(rng)
    v = ginibre(rng, d, 1)[:, 0]
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def haar_unitary(d, rng=None) -> np.ndarray:
    rng = _rng(rng)
    q, r = np.linalg.qr(ginibre(rng, d, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def haar_isometry(rows, cols, rng=None) -> np.ndarray:
    rng = _rng(rng)
    q, r = np.linalg.qr(ginibre(rng, rows, cols))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_channel(d, rng=None, n_kraus=None) -> KrausChannel:
    """CPTP channel from a Haar-random isometry ``C^d -> C^(n d)`` cut into Kraus blocks."""
    rng = _rng(rng)
    if n_kraus is None:
        n_kraus = int(rng.integers(1, d * d + 1))
    v = haar_isometry(n_kraus * d, d, rng)
    return KrausChannel(v.reshape(n_kraus, d, d), tol=1e-9)


def random_incoherent_channel(d, rng=None, n_perm=None, n_single=None) -> KrausChannel:
    """Random channel whose Kraus operators each map basis kets to basis rays.

    Two kinds of operators: permutation times complex diagonal, and
    single-entry ``c |f(j)><j|`` with arbitrary ``f``.  Columns of the weight
    table are normalized so the set is trace preserving.
    """
    rng = _rng(rng)
    n_perm = int(rng.integers(1, 4)) if n_perm is None else n_perm
    n_single = int(rng.integers(0, 2 * d + 1)) if n_single is None else n_single
    n = n_perm + n_single
    weights = rng.random((n, d)) ** 2
    weights /= weights.sum(axis=0, keepdims=True)
    phases = np.exp(2j * np.pi * rng.random((n, d)))
    amps = np.sqrt(weights) * phases
    ops = np.zeros((n, d, d), dtype=np.complex128)
    for i in range(n_perm):
        perm = rng.permutation(d)
        ops[i, perm, np.arange(d)] = amps[i]
    for i in range(n_perm, n):
        j = int(rng.integers(d))
        ops[i, int(rng.integers(d)), j] = amps[i, j]
    # every K^H K is diagonal, so scaling columns restores completeness
    return KrausChannel(_renormalize_columns(ops), tol=1e-9)


def _renormalize_columns(ops):
    norms = np.sqrt(np.einsum("kaj,kaj->j", ops.conj(), ops).real)
    return ops / norms[None, None, :]


def random_measure_prepare(d, rng=None) -> KrausChannel:
    """Coherence-breaking channel ``rho -> sum_a tr(M_a rho) |a><a|`` with a random POVM."""
    rng = _rng(rng)
    rank = int(rng.integers(1, d + 1))
    v = haar_isometry(d * rank, d, rng)
    # rows of v grouped per outcome give the POVM vectors (conjugated)
    kets = [v[a * rank:(a + 1) * rank].conj() for a in range(d)]
    return measure_and_prepare(kets)


def random_classical_prepare(d, rng=None) -> KrausChannel:
    """``rho -> sum_i <i|rho|i> delta_i`` with random diagonal ``delta_i``."""
    rng = _rng(rng)
    probs = rng.dirichlet(np.ones(d), size=d)  # probs[i, a] = <a|delta_i|a>
    ops = []
    for i in range(d):
        for a in range(d):
            k = np.zeros((d, d))
            k[a, i] = np.sqrt(probs[i, a])
            ops.append(k)
    return KrausChannel(np.array(ops), tol=1e-9)


def random_cbc_qubit(rng=None) -> KrausChannel:
    """Kraus form of a random member of the diagonal coherence-breaking qubit family."""
    rng = _rng(rng)
    budget = rng.random()
    share = rng.uniform(-1, 1)
    tau3 = budget * share
    lambda3 = (budget - abs(tau3)) * rng.choice([-1.0, 1.0])
    return kraus_from_choi(cbc_qubit_choi(tau3, lambda3))
