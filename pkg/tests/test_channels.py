import math

import numpy as np
import pytest

from qicoherence import sampling
from qicoherence.channels import (
    ChoiState,
    KrausChannel,
    QubitAffine,
    affine_action,
    affine_from_kraus,
    apply_channel,
    bloch_vector,
    cbc_qubit_choi,
    choi_from_affine,
    choi_from_kraus,
    completely_dephasing,
    completely_depolarizing,
    identity_channel,
    is_coherence_breaking,
    is_incoherent_kraus,
    is_unital,
    kraus_from_choi,
    output_marginal,
    singular_values_of_T,
    unitary_channel,
)
from qicoherence.physics import ad_channel
from qicoherence.qmat import DensityMatrix, ValidationError, partial_trace

from .conftest import BELL

HADAMARD = unitary_channel(np.array([[1, 1], [1, -1]]) / math.sqrt(2))


def is_diagonal(m, atol):
    return np.max(np.abs(m - np.diag(np.diag(m)))) <= atol


def ad_choi_reference(p):
    # closed-form amplitude-damping Choi matrix, A (x) S order
    r = math.sqrt(1 - p) / 2
    return np.array([
        [0.5, 0, 0, r],
        [0, 0, 0, 0],
        [0, 0, p / 2, 0],
        [r, 0, 0, (1 - p) / 2],
    ])


def test_kraus_completeness_enforced():
    with pytest.raises(ValidationError):
        KrausChannel(np.array([np.eye(2) * 0.9]))
    with pytest.raises(ValidationError):
        KrausChannel(np.zeros((0, 2, 2)))


def test_choi_examples():
    assert choi_from_kraus(identity_channel()).state.allclose(BELL, atol=1e-15)
    for p in (0.0, 0.3, 0.5, 1.0):
        assert choi_from_kraus(ad_channel(p)).state.allclose(ad_choi_reference(p), atol=1e-15)
    assert choi_from_kraus(completely_depolarizing()).state.allclose(np.eye(4) / 4, atol=1e-15)


def test_choi_rejects_bad_marginal():
    with pytest.raises(ValidationError):
        ChoiState.from_matrix(np.diag([0.5, 0.5, 0.0, 0.0]))


def test_apply_channel_examples(rng):
    rho = sampling.random_density_matrix(2, rng)
    assert apply_channel(identity_channel(), rho).allclose(rho, atol=1e-15)
    out = apply_channel(ad_channel(1.0), np.diag([0.0, 1.0]))
    assert out.allclose(np.diag([1.0, 0.0]), atol=1e-15)
    # |+><+| = [[1,1],[1,1]]/2; K0 rho K0^H + K1 rho K1^H by hand at p = 1/2
    h = math.sqrt(2) / 4
    out = apply_channel(ad_channel(0.5), DensityMatrix.pure([1, 1]))
    assert out.allclose([[0.75, h], [h, 0.25]], atol=1e-15)
    with pytest.raises(ValidationError):
        apply_channel(identity_channel(), np.eye(3) / 3)


def test_output_marginal_examples():
    assert output_marginal(identity_channel(3)).allclose(np.eye(3) / 3, atol=1e-15)
    assert output_marginal(completely_depolarizing()).allclose(np.eye(2) / 2, atol=1e-15)
    for p in (0.0, 0.25, 1.0):
        assert output_marginal(ad_channel(p)).allclose(np.diag([(1 + p) / 2, (1 - p) / 2]))


def test_marginals_of_random_choi(rng):
    for d in (2, 3):
        for _ in range(20):
            ch = sampling.random_channel(d, rng)
            omega = choi_from_kraus(ch)
            assert np.linalg.norm(partial_trace(omega, keep="A").matrix - np.eye(d) / d) <= 1e-9
            diff = partial_trace(omega, keep="S").matrix - output_marginal(ch).matrix
            assert np.linalg.norm(diff) <= 1e-10


def test_is_unital():
    assert is_unital(identity_channel())
    assert not is_unital(ad_channel(0.5))
    assert is_unital(completely_dephasing())
    assert is_unital(HADAMARD)


def test_is_incoherent_kraus():
    assert is_incoherent_kraus(ad_channel(0.37))
    assert not is_incoherent_kraus(HADAMARD)
    assert is_incoherent_kraus(completely_dephasing(3))


def test_is_coherence_breaking():
    assert is_coherence_breaking(completely_dephasing())
    assert not is_coherence_breaking(identity_channel())
    assert not is_coherence_breaking(HADAMARD)


def test_measure_and_prepare_is_cbc(rng):
    for d in (2, 3):
        for make in (sampling.random_classical_prepare, sampling.random_measure_prepare):
            ch = make(d, rng)
            assert is_coherence_breaking(ch)
            for _ in range(20):
                out = apply_channel(ch, sampling.random_density_matrix(d, rng)).matrix
                assert is_diagonal(out, 1e-8)


def test_cbc_implies_incoherent_outputs(rng):
    chans = [sampling.random_cbc_qubit(rng) for _ in range(10)]
    chans += [sampling.random_measure_prepare(3, rng) for _ in range(5)]
    for ch in chans:
        assert is_coherence_breaking(ch, 1e-8)
        for _ in range(100):
            out = apply_channel(ch, sampling.random_density_matrix(ch.dim, rng)).matrix
            assert is_diagonal(out, 1e-8)


def test_incoherent_kraus_keeps_diagonal_states_diagonal(rng):
    for d in (2, 3, 4):
        ch = sampling.random_incoherent_channel(d, rng)
        assert is_incoherent_kraus(ch)
        for _ in range(100):
            delta = np.diag(rng.dirichlet(np.ones(d)))
            assert is_diagonal(apply_channel(ch, delta).matrix, 1e-8)


def test_kraus_choi_round_trip(rng):
    for d in (2, 3):
        for _ in range(20):
            omega = choi_from_kraus(sampling.random_channel(d, rng))
            again = choi_from_kraus(kraus_from_choi(omega))
            assert np.linalg.norm(again.matrix - omega.matrix) <= 1e-9


def test_affine_examples():
    q = affine_from_kraus(identity_channel())
    np.testing.assert_allclose(q.tau, 0, atol=1e-15)
    np.testing.assert_allclose(q.T, np.eye(3), atol=1e-15)
    p = 0.3
    q = affine_from_kraus(ad_channel(p))
    np.testing.assert_allclose(q.tau, [0, 0, p], atol=1e-15)
    s = math.sqrt(1 - p)
    np.testing.assert_allclose(q.T, np.diag([s, s, 1 - p]), atol=1e-15)
    q = affine_from_kraus(completely_depolarizing())
    np.testing.assert_allclose(q.tau, 0, atol=1e-15)
    np.testing.assert_allclose(q.T, 0, atol=1e-15)
    with pytest.raises(ValidationError):
        affine_from_kraus(identity_channel(3))


def test_affine_round_trip(rng):
    for _ in range(20):
        ch = sampling.random_channel(2, rng)
        q = affine_from_kraus(ch)
        for _ in range(10):
            rho = sampling.random_density_matrix(2, rng)
            direct = apply_channel(ch, rho)
            np.testing.assert_allclose(affine_action(q, rho), direct.matrix, atol=1e-9)
            np.testing.assert_allclose(q.T @ bloch_vector(rho) + q.tau, bloch_vector(direct), atol=1e-9)
        # and the Choi rebuilt from (tau, T) is the original one
        np.testing.assert_allclose(choi_from_affine(q).matrix, choi_from_kraus(ch).matrix, atol=1e-12)


def test_affine_rejects_non_cptp():
    with pytest.raises(ValidationError):
        QubitAffine([0, 0, 0.5], np.eye(3))


def test_singular_values():
    np.testing.assert_allclose(singular_values_of_T(affine_from_kraus(identity_channel())), [1, 1, 1])
    np.testing.assert_allclose(
        singular_values_of_T(affine_from_kraus(ad_channel(0.75))), [0.5, 0.5, 0.25], atol=1e-15
    )
    np.testing.assert_allclose(
        singular_values_of_T(affine_from_kraus(completely_depolarizing())), 0, atol=1e-15
    )


def test_cbc_qubit_choi_examples():
    assert cbc_qubit_choi(0.0, 0.0).state.allclose(np.eye(4) / 4, atol=0)
    # S (x) A reference entries, divided by the trace 4
    tau3, lam3 = 1.0, 0.0
    reference = np.array([1 + tau3 - lam3, 1 + tau3 + lam3, 1 - tau3 + lam3, 1 - tau3 - lam3]) / 4
    np.testing.assert_allclose(reference, [0.5, 0.5, 0, 0])
    ours = np.diag(cbc_qubit_choi(tau3, lam3).matrix).real
    np.testing.assert_allclose(np.sort(ours), np.sort(reference))
    with pytest.raises(ValidationError):
        cbc_qubit_choi(0.7, 0.5)


@pytest.mark.parametrize("tau3, lam3", [(0.3, 0.2), (-0.5, 0.5), (0.0, -1.0), (0.9, -0.05)])
def test_cbc_qubit_choi_matches_reference_entries(tau3, lam3):
    reference = np.array([1 + tau3 - lam3, 1 + tau3 + lam3, 1 - tau3 + lam3, 1 - tau3 - lam3]) / 4
    ours = cbc_qubit_choi(tau3, lam3)
    np.testing.assert_allclose(np.sort(np.diag(ours.matrix).real), np.sort(reference))
    # the reference is our matrix with A and S swapped and lambda3 negated
    swapped = cbc_qubit_choi(tau3, -lam3).matrix.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
    np.testing.assert_allclose(np.diag(swapped).real, reference)


def test_cbc_qubit_choi_family(rng):
    for _ in range(20):
        b = rng.random()
        tau3 = b * rng.uniform(-1, 1)
        lam3 = (b - abs(tau3)) * rng.choice([-1, 1])
        ch = kraus_from_choi(cbc_qubit_choi(tau3, lam3))
        assert is_coherence_breaking(ch)
        q = affine_from_kraus(ch)
        np.testing.assert_allclose(q.tau, [0, 0, tau3], atol=1e-12)
        np.testing.assert_allclose(q.T, np.diag([0, 0, lam3]), atol=1e-12)


def test_composition_order():
    # flip then full decay returns to |0>; full decay then flip ends in |1>
    flip = unitary_channel(np.array([[0, 1], [1, 0]]))
    ground = np.diag([1.0, 0.0])
    assert apply_channel(flip.then(ad_channel(1.0)), ground).allclose(ground, atol=1e-15)
    assert apply_channel(ad_channel(1.0).then(flip), ground).allclose(np.diag([0, 1.0]), atol=1e-15)
