import math

import numpy as np
import pytest

from qicoherence import sampling
from qicoherence.channels import choi_from_kraus
from qicoherence.qmat import (
    BipartiteLabel,
    DensityMatrix,
    ValidationError,
    dephase,
    dephase_s,
    hermitian_eigenvalues,
    mutual_information,
    partial_trace,
    relative_entropy,
    von_neumann_entropy,
)

from .conftest import BELL, CLASSICAL_BELL

PLUS = DensityMatrix.pure([1, 1])
QUBIT = BipartiteLabel(2, 2)


def test_density_matrix_validation():
    with pytest.raises(ValidationError):
        DensityMatrix([[1, 0.5], [0, 0]])          # not Hermitian
    with pytest.raises(ValidationError):
        DensityMatrix(np.diag([0.6, 0.6]))         # trace
    with pytest.raises(ValidationError):
        DensityMatrix(np.diag([1.2, -0.2]))        # not PSD
    with pytest.raises(ValidationError):
        DensityMatrix(np.ones((2, 3)) / 3)
    rho = DensityMatrix(np.diag([0.25, 0.75]))
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1.0


def test_hermitian_eigenvalues():
    np.testing.assert_allclose(hermitian_eigenvalues(np.eye(2)), [1, 1])
    np.testing.assert_allclose(hermitian_eigenvalues(np.diag([0.25, 0.75])), [0.25, 0.75])
    # flip matrix: det = -1, trace 0 -> eigenvalues -1, 1
    np.testing.assert_allclose(hermitian_eigenvalues(np.array([[0, 1], [1, 0]])), [-1, 1])
    with pytest.raises(ValidationError):
        hermitian_eigenvalues(np.array([[0, 1], [0, 0]]))


def test_entropy_examples(rng):
    assert abs(von_neumann_entropy(sampling.random_pure_state(3, rng))) < 1e-12
    assert abs(von_neumann_entropy(np.eye(2) / 2) - 1.0) < 1e-12
    expected = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))
    assert abs(von_neumann_entropy(np.diag([0.75, 0.25])) - expected) < 1e-12
    assert abs(expected - 0.811278) < 1e-6


def test_entropy_unitary_invariance(rng):
    for d in (2, 3, 5):
        for _ in range(10):
            rho = sampling.random_density_matrix(d, rng)
            u = sampling.haar_unitary(d, rng)
            assert abs(von_neumann_entropy(u @ rho @ u.conj().T) - von_neumann_entropy(rho)) <= 1e-9


def test_entropy_bounds(rng):
    for d in (2, 3, 4):
        rho = sampling.random_density_matrix(d, rng)
        assert 0.0 <= von_neumann_entropy(rho) <= math.log2(d) + 1e-12


def test_relative_entropy_examples(rng):
    rho = sampling.random_density_matrix(3, rng)
    assert abs(relative_entropy(rho, rho)) < 1e-9
    assert abs(relative_entropy(PLUS, np.eye(2) / 2) - 1.0) < 1e-12
    assert relative_entropy(np.eye(2) / 2, np.diag([1.0, 0.0])) == float("inf")
    # support contained: finite
    assert np.isfinite(relative_entropy(np.diag([1.0, 0.0]), np.eye(2) / 2))
    with pytest.raises(ValidationError):
        relative_entropy(np.eye(2) / 2, np.eye(3) / 3)


def test_relative_entropy_nonnegative(rng):
    for d in (2, 3, 4):
        for _ in range(20):
            rho = sampling.random_density_matrix(d, rng, rank=int(rng.integers(1, d + 1)))
            sigma = sampling.random_density_matrix(d, rng)
            assert relative_entropy(rho, sigma) >= -1e-9


def test_relative_entropy_against_matrix_log(rng):
    from scipy.linalg import logm

    rho = sampling.random_density_matrix(3, rng)
    sigma = sampling.random_density_matrix(3, rng)
    direct = np.trace(rho @ (logm(rho) - logm(sigma))).real / math.log(2)
    assert abs(relative_entropy(rho, sigma) - direct) < 1e-10


def test_dephase():
    diag = np.diag([0.2, 0.3, 0.5])
    assert dephase(diag).allclose(diag, atol=0)
    assert dephase(PLUS).allclose(np.eye(2) / 2, atol=1e-15)


def test_dephase_idempotent_trace_preserving(rng):
    for _ in range(10):
        rho = sampling.random_density_matrix(4, rng)
        once = dephase(rho)
        assert abs(np.trace(once.matrix) - 1) <= 1e-12
        assert dephase(once).allclose(once, atol=0)
        once_s = dephase_s(rho, QUBIT)
        assert abs(np.trace(once_s.matrix) - 1) <= 1e-12
        assert dephase_s(once_s, QUBIT).allclose(once_s, atol=0)


def test_dephase_s_examples():
    assert dephase_s(BELL, QUBIT).allclose(CLASSICAL_BELL, atol=0)
    assert dephase_s(CLASSICAL_BELL, QUBIT).allclose(CLASSICAL_BELL, atol=0)
    with pytest.raises(ValidationError):
        dephase_s(BELL, BipartiteLabel(3, 2))


def test_dephase_s_only_touches_s_coherences(rng):
    rho = sampling.random_density_matrix(6, rng)
    out = dephase_s(rho, BipartiteLabel(3, 2)).matrix
    for i in range(6):
        for j in range(6):
            if i % 2 == j % 2:
                assert out[i, j] == rho[i, j]
            else:
                assert out[i, j] == 0


def test_partial_trace_examples(rng):
    ra = sampling.random_density_matrix(2, rng)
    rs = sampling.random_density_matrix(3, rng)
    lab = BipartiteLabel(2, 3)
    prod = np.kron(ra, rs)
    assert partial_trace(prod, lab, "A").allclose(ra, atol=1e-12)
    assert partial_trace(prod, lab, "S").allclose(rs, atol=1e-12)
    assert partial_trace(BELL, QUBIT, "S").allclose(np.eye(2) / 2, atol=1e-15)
    with pytest.raises(ValidationError):
        partial_trace(prod, QUBIT, "A")


def test_choi_ancilla_marginal_is_maximally_mixed(rng):
    for d in (2, 3):
        for _ in range(10):
            omega = choi_from_kraus(sampling.random_channel(d, rng))
            rho_a = partial_trace(omega, keep="A").matrix
            assert np.linalg.norm(rho_a - np.eye(d) / d) <= 1e-9
            assert abs(hermitian_eigenvalues(omega.matrix).sum() - 1.0) <= 1e-9


def test_mutual_information_examples(rng):
    prod = np.kron(sampling.random_density_matrix(2, rng), sampling.random_density_matrix(2, rng))
    assert abs(mutual_information(prod, QUBIT)) < 1e-9
    assert abs(mutual_information(BELL, QUBIT) - 2.0) < 1e-12
    assert abs(mutual_information(CLASSICAL_BELL, QUBIT) - 1.0) < 1e-12


def test_mutual_information_nonnegative(rng):
    for _ in range(20):
        rho = sampling.random_density_matrix(6, rng)
        assert mutual_information(rho, BipartiteLabel(2, 3)) >= -1e-12
