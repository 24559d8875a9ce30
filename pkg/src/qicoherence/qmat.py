"""Dense density-matrix algebra and entropy functionals (all logarithms base 2).

Bipartite operators are always ordered ``A (x) S``: the ancilla ``A`` is the
left (slow) tensor factor and the system ``S`` the right one.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from . import kernels

DEFAULT_TOL = 1e-10


class ValidationError(ValueError):
    """Input is not a valid object of the requested kind."""


def _frozen(mat):
    arr = np.array(mat, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


def check_square(mat) -> np.ndarray:
    arr = np.asarray(mat)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValidationError(f"expected a non-empty square matrix, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class BipartiteLabel:
    dim_a: int
    dim_s: int

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_s < 1:
            raise ValidationError("subsystem dimensions must be positive")

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_s

    def check(self, dim: int) -> None:
        if dim != self.dim:
            raise ValidationError(
                f"label {self.dim_a}x{self.dim_s} does not match matrix dimension {dim}"
            )


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated Hermitian, PSD, unit-trace matrix in the computational basis.

    ``tol`` is an absolute tolerance on Hermiticity (max entry of ``M - M^H``),
    on negative eigenvalues and on the trace.  The stored matrix is read-only.
    """

    matrix: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        mat = check_square(self.matrix)
        object.__setattr__(self, "matrix", _frozen(mat))
        herm_err = np.max(np.abs(self.matrix - self.matrix.conj().T))
        if herm_err > self.tol:
            raise ValidationError(f"matrix is not Hermitian (max |M - M^H| = {herm_err:.3e})")
        tr = np.trace(self.matrix)
        if abs(tr - 1.0) > self.tol:
            raise ValidationError(f"trace is {tr.real:.12g}, expected 1")
        lo = np.linalg.eigvalsh(self.matrix)[0]
        if lo < -self.tol:
            raise ValidationError(f"matrix is not positive semidefinite (eigenvalue {lo:.3e})")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, vec, tol: float = DEFAULT_TOL) -> "DensityMatrix":
        v = np.asarray(vec, dtype=np.complex128).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()), tol)

    @classmethod
    def maximally_mixed(cls, dim: int, tol: float = DEFAULT_TOL) -> "DensityMatrix":
        return cls(np.eye(dim) / dim, tol)

    def allclose(self, other, atol: float = 1e-9) -> bool:
        return np.allclose(self.matrix, _matrix_of(other), atol=atol, rtol=0.0)


StateLike = Union[DensityMatrix, np.ndarray]


def _matrix_of(x) -> np.ndarray:
    # ChoiState and DensityMatrix both expose .matrix
    if hasattr(x, "matrix"):
        return x.matrix
    return check_square(x)


def as_density(x, tol: float = DEFAULT_TOL) -> DensityMatrix:
    """Coerce an array, a DensityMatrix or a ChoiState to a DensityMatrix."""
    if isinstance(x, DensityMatrix):
        return x
    state = getattr(x, "state", None)
    if isinstance(state, DensityMatrix):
        return state
    return DensityMatrix(x, tol)


def _label_for(x, label):
    if label is not None:
        return label
    lab = getattr(x, "label", None)
    if lab is None:
        raise ValidationError("a BipartiteLabel is required for a plain bipartite matrix")
    return lab


def hermitian_eigenvalues(mat, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    m = _matrix_of(mat)
    herm_err = np.max(np.abs(m - m.conj().T))
    if herm_err > tol:
        raise ValidationError(f"matrix is not Hermitian (max |M - M^H| = {herm_err:.3e})")
    return np.linalg.eigvalsh(m)


def von_neumann_entropy(rho) -> float:
    rho = as_density(rho)
    vals = np.linalg.eigvalsh(rho.matrix)
    return kernels.spectrum_entropy(vals, rho.tol)


def relative_entropy(rho, sigma) -> float:
    """``tr rho (log2 rho - log2 sigma)``; ``inf`` when supp(rho) is not inside supp(sigma).

    The kernel of ``sigma`` is spanned by eigenvectors with eigenvalue below
    ``sigma.tol``; weight of ``rho`` above that tolerance on it gives ``inf``.
    """
    rho = as_density(rho)
    sigma = as_density(sigma)
    if rho.dim != sigma.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    w, v = np.linalg.eigh(sigma.matrix)
    # populations of rho in sigma's eigenbasis
    pops = np.real(np.einsum("ik,ij,jk->k", v.conj(), rho.matrix, v))
    kernel = w < sigma.tol
    if np.sum(pops[kernel]) > sigma.tol:
        return float("inf")
    cross = float(np.sum(pops[~kernel] * np.log2(w[~kernel])))
    return -von_neumann_entropy(rho) - cross


def dephase(rho) -> DensityMatrix:
    """Diagonal part of ``rho`` in the computational basis."""
    rho = as_density(rho)
    return DensityMatrix(np.diag(np.diag(rho.matrix).real), rho.tol)


def dephase_s(omega, label: BipartiteLabel = None):
    """Dephase the ``S`` factor only: ``sum_i (1 (x) |i><i|) omega (1 (x) |i><i|)``.

    Returns the same type it was given (a ChoiState stays a ChoiState).
    """
    label = _label_for(omega, label)
    rho = as_density(omega)
    label.check(rho.dim)
    out = DensityMatrix(kernels.dephase_s(rho.matrix, label.dim_a, label.dim_s), rho.tol)
    rewrap = getattr(omega, "_rewrap", None)
    return rewrap(out) if rewrap is not None else out


def partial_trace(omega, label: BipartiteLabel = None, keep: str = "A") -> DensityMatrix:
    label = _label_for(omega, label)
    rho = as_density(omega)
    label.check(rho.dim)
    keep = keep.upper()
    if keep not in ("A", "S"):
        raise ValueError(f"keep must be 'A' or 'S', got {keep!r}")
    red = kernels.partial_trace(rho.matrix, label.dim_a, label.dim_s, keep == "A")
    return DensityMatrix(red, rho.tol)


def mutual_information(omega, label: BipartiteLabel = None) -> float:
    label = _label_for(omega, label)
    rho = as_density(omega)
    return (
        von_neumann_entropy(partial_trace(rho, label, "S"))
        + von_neumann_entropy(partial_trace(rho, label, "A"))
        - von_neumann_entropy(rho)
    )
