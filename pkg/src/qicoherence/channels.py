"""Channel representations (Kraus, Choi, qubit affine) and classification."""

from dataclasses import dataclass

import numpy as np

from .qmat import (
    DEFAULT_TOL,
    BipartiteLabel,
    DensityMatrix,
    ValidationError,
    as_density,
    dephase_s,
    partial_trace,
)

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map ``rho -> sum_i K_i rho K_i^H`` on a ``dim``-level system.

    ``operators`` has shape ``(n, dim, dim)``.  Completeness
    ``sum_i K_i^H K_i = 1`` is enforced to ``tol * dim`` in Frobenius norm.
    """

    operators: np.ndarray
    tol: float = DEFAULT_TOL
    name: str = ""

    def __post_init__(self):
        ops = np.array(self.operators, dtype=np.complex128, copy=True)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[0] == 0 or ops.shape[1] != ops.shape[2] or ops.shape[1] < 1:
            raise ValidationError(f"Kraus operators must have shape (n, d, d), got {ops.shape}")
        ops.setflags(write=False)
        object.__setattr__(self, "operators", ops)
        err = completeness_error(ops)
        if err > self.tol * self.dim:
            raise ValidationError(f"Kraus set is not trace preserving (||sum K^H K - 1||_F = {err:.3e})")

    @property
    def dim(self) -> int:
        return self.operators.shape[1]

    def __len__(self):
        return self.operators.shape[0]

    def then(self, other: "KrausChannel") -> "KrausChannel":
        """The composition ``other o self`` (apply ``self`` first)."""
        if other.dim != self.dim:
            raise ValidationError("dimension mismatch in composition")
        ops = np.einsum("jab,ibc->jiac", other.operators, self.operators)
        return KrausChannel(ops.reshape(-1, self.dim, self.dim), max(self.tol, other.tol))


def completeness_error(ops) -> float:
    ops = np.asarray(ops)
    d = ops.shape[1]
    return float(np.linalg.norm(np.einsum("kba,kbc->ac", ops.conj(), ops) - np.eye(d)))


@dataclass(frozen=True, eq=False)
class ChoiState:
    """Normalized Choi state ``(1 (x) Lambda)(|Psi><Psi|)`` with ``|Psi> = sum_i |ii> / sqrt(d)``.

    Trace 1, ordering ``A (x) S``.  Validation requires ``Tr_S = 1/d``.
    """

    state: DensityMatrix

    def __post_init__(self):
        d = int(round(np.sqrt(self.state.dim)))
        if d * d != self.state.dim:
            raise ValidationError(f"Choi matrix dimension {self.state.dim} is not a square")
        rho_a = partial_trace(self.state, BipartiteLabel(d, d), "A").matrix
        err = np.linalg.norm(rho_a - np.eye(d) / d)
        if err > self.state.tol:
            raise ValidationError(f"Tr_S of the Choi state is not 1/d (error {err:.3e})")

    @classmethod
    def from_matrix(cls, mat, tol: float = DEFAULT_TOL) -> "ChoiState":
        return cls(DensityMatrix(mat, tol))

    @property
    def dim(self) -> int:
        return int(round(np.sqrt(self.state.dim)))

    @property
    def label(self) -> BipartiteLabel:
        return BipartiteLabel(self.dim, self.dim)

    @property
    def matrix(self) -> np.ndarray:
        return self.state.matrix

    def _rewrap(self, state: DensityMatrix) -> "ChoiState":
        return ChoiState(state)


@dataclass(frozen=True, eq=False)
class QubitAffine:
    """Bloch-space action ``r -> T r + tau`` of a qubit channel."""

    tau: np.ndarray
    T: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        tau = np.array(self.tau, dtype=np.float64).reshape(3)
        T = np.array(self.T, dtype=np.float64).reshape(3, 3)
        tau.setflags(write=False)
        T.setflags(write=False)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "T", T)
        # raises if the induced map is not CPTP
        choi_from_affine(self, self.tol)


def choi_from_kraus(ch: KrausChannel) -> ChoiState:
    d = ch.dim
    # row index (i, a) of the Choi matrix carries K[a, i]
    vecs = np.transpose(ch.operators, (0, 2, 1)).reshape(len(ch), d * d)
    omega = np.einsum("ki,kj->ij", vecs, vecs.conj()) / d
    return ChoiState(DensityMatrix(omega, ch.tol))


def kraus_from_choi(choi: ChoiState, tol: float = DEFAULT_TOL) -> KrausChannel:
    """Canonical Kraus set from the eigendecomposition of ``d * Omega``."""
    d = choi.dim
    w, v = np.linalg.eigh(d * choi.matrix)
    keep = w > tol
    ops = np.sqrt(w[keep])[:, None] * v[:, keep].T
    ops = np.transpose(ops.reshape(-1, d, d), (0, 2, 1))
    return KrausChannel(ops, max(choi.state.tol, 1e-9))


def _apply_ops(ops, mat):
    return np.einsum("kab,bc,kdc->ad", ops, mat, ops.conj())


def apply_channel(ch: KrausChannel, rho) -> DensityMatrix:
    rho = as_density(rho)
    if rho.dim != ch.dim:
        raise ValidationError(f"channel acts on dimension {ch.dim}, state has {rho.dim}")
    return DensityMatrix(_apply_ops(ch.operators, rho.matrix), max(rho.tol, ch.tol))


def output_marginal(ch: KrausChannel) -> DensityMatrix:
    """``Tr_A`` of the Choi state, i.e. ``(1/d) sum_i K_i K_i^H``."""
    ops = ch.operators
    return DensityMatrix(np.einsum("kab,kcb->ac", ops, ops.conj()) / ch.dim, ch.tol)


def is_unital(ch: KrausChannel, tol: float = 1e-9) -> bool:
    ops = ch.operators
    s = np.einsum("kab,kcb->ac", ops, ops.conj())
    return bool(np.linalg.norm(s - np.eye(ch.dim)) <= tol)


def is_incoherent_kraus(ch: KrausChannel, tol: float = 1e-9) -> bool:
    """True when each supplied Kraus operator has at most one nonzero entry per column.

    This tests the given decomposition only; a channel may be incoherent in
    some other Kraus representation.
    """
    nonzero = np.abs(ch.operators) > tol
    return bool(np.all(nonzero.sum(axis=1) <= 1))


def is_coherence_breaking(ch, tol: float = 1e-9) -> bool:
    """Choi fixed-point test: ``Delta^S(Omega) == Omega`` within ``tol`` (Frobenius)."""
    choi = ch if isinstance(ch, ChoiState) else choi_from_kraus(ch)
    diff = dephase_s(choi).matrix - choi.matrix
    return bool(np.linalg.norm(diff) <= tol)


def affine_from_kraus(ch: KrausChannel) -> QubitAffine:
    if ch.dim != 2:
        raise ValidationError(f"affine form is defined for qubits only, got d={ch.dim}")
    ops = ch.operators
    tau = np.array([np.trace(p @ _apply_ops(ops, np.eye(2) / 2)).real for p in PAULI])
    T = np.array(
        [[0.5 * np.trace(pk @ _apply_ops(ops, pl)).real for pl in PAULI] for pk in PAULI]
    )
    return QubitAffine(tau, T, ch.tol)


def affine_action(q: QubitAffine, rho) -> np.ndarray:
    """Output density matrix of the affine map applied to ``rho`` (as an array)."""
    r = bloch_vector(rho)
    out = q.T @ r + q.tau
    return 0.5 * (np.eye(2) + np.einsum("k,kab->ab", out, PAULI))


def bloch_vector(rho) -> np.ndarray:
    m = rho.matrix if hasattr(rho, "matrix") else np.asarray(rho)
    return np.array([np.trace(p @ m).real for p in PAULI])


def choi_from_affine(q: QubitAffine, tol: float = DEFAULT_TOL) -> ChoiState:
    """Choi state of the qubit map with Bloch action ``r -> T r + tau``."""
    omega = np.zeros((4, 4), dtype=np.complex128)
    basis = np.eye(2)
    for i in range(2):
        for j in range(2):
            e = np.outer(basis[i], basis[j])
            # e = (c0 * 1 + sum_k c_k sigma_k) / 2 with c = tr(sigma e)
            c0 = np.trace(e)
            c = np.array([np.trace(p @ e) for p in PAULI])
            image = 0.5 * (c0 * (np.eye(2) + np.einsum("k,kab->ab", q.tau, PAULI))
                           + np.einsum("k,kab->ab", q.T @ c, PAULI))
            omega[2 * i:2 * i + 2, 2 * j:2 * j + 2] = image / 2
    return ChoiState(DensityMatrix(omega, tol))


def singular_values_of_T(q: QubitAffine) -> np.ndarray:
    return np.linalg.svd(q.T, compute_uv=False)


def cbc_qubit_choi(tau3: float, lambda3: float, tol: float = DEFAULT_TOL) -> ChoiState:
    """Choi state of the coherence-breaking qubit channel ``r -> (0, 0, tau3 + lambda3 r_z)``.

    Diagonal, ``diag(1+tau3+lambda3, 1-tau3-lambda3, 1+tau3-lambda3, 1-tau3+lambda3) / 4``
    in ``A (x) S`` order.  The literature often prints the same four entries
    in ``S (x) A`` order with the opposite sign convention for ``lambda3``;
    the multiset of entries is identical.
    """
    if abs(tau3) + abs(lambda3) > 1.0 + tol:
        raise ValidationError(
            f"(tau3={tau3}, lambda3={lambda3}) violates |tau3| + |lambda3| <= 1"
        )
    diag = np.array([
        1 + tau3 + lambda3,
        1 - tau3 - lambda3,
        1 + tau3 - lambda3,
        1 - tau3 + lambda3,
    ]) / 4
    return ChoiState(DensityMatrix(np.diag(np.clip(diag, 0.0, None)), tol))


def identity_channel(d: int = 2) -> KrausChannel:
    return KrausChannel(np.eye(d)[None], name="identity")


def completely_dephasing(d: int = 2) -> KrausChannel:
    ops = np.zeros((d, d, d))
    for i in range(d):
        ops[i, i, i] = 1.0
    return KrausChannel(ops, name="dephasing")


def completely_depolarizing(d: int = 2) -> KrausChannel:
    # K_{ab} = |a><b| / sqrt(d)
    ops = np.zeros((d * d, d, d))
    for a in range(d):
        for b in range(d):
            ops[a * d + b, a, b] = 1.0 / np.sqrt(d)
    return KrausChannel(ops, name="depolarizing")


def unitary_channel(u) -> KrausChannel:
    return KrausChannel(np.asarray(u)[None])


def measure_and_prepare(povm_kets) -> KrausChannel:
    """``rho -> sum_a tr(M_a rho) |a><a|`` with ``M_a = sum_k |m_ak><m_ak|``.

    ``povm_kets[a]`` is a ``(r, d)`` array whose rows are the vectors ``m_ak``.
    The output is always diagonal, so the channel is coherence breaking.
    """
    d = len(povm_kets)
    ops = []
    for a, kets in enumerate(povm_kets):
        for m in np.atleast_2d(kets):
            k = np.zeros((d, d), dtype=np.complex128)
            k[a, :] = np.conj(m)
            ops.append(k)
    return KrausChannel(np.array(ops), tol=1e-9)
