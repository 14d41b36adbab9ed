import math

import numpy as np
import pytest

from hqcsim.hilbert import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Z,
    CompositeSpace,
    DensityMatrix,
    DimensionError,
    Operator,
    ValidationError,
    commutator,
    dagger,
    destroy,
    embed,
    herm_expm,
    number_op,
    trace,
)

S3 = CompositeSpace((2, 2, 2))


def test_total_dim_is_product():
    assert S3.total_dim == 8
    assert CompositeSpace((3, 2, 3)).total_dim == 18


def test_basis_state_indexing_follows_ordering():
    # |100> means one photon in the first resonator, ordering fixed
    ket = S3.basis_state((1, 0, 0))
    assert ket[S3.index((1, 0, 0))] == 1.0
    assert np.count_nonzero(ket) == 1
    assert S3.index((0, 0, 1)) == 1
    assert S3.index((1, 0, 0)) == 4


def test_embed_identity():
    op = embed(np.eye(2), S3, 1)
    assert np.array_equal(op.matrix, np.eye(8))


def test_embed_sigma_z_excited_transmon():
    # convention: the excited transmon state has sigma_z eigenvalue +1
    op = embed(SIGMA_Z, S3, 1)
    ket = S3.basis_state((0, 1, 0))
    assert np.allclose(op.matrix @ ket, +ket)
    ground = S3.basis_state((0, 0, 0))
    assert np.allclose(op.matrix @ ground, -ground)


def test_embed_annihilation():
    op = embed(destroy(2), S3, 0)
    assert np.allclose(op.matrix @ S3.basis_state((1, 0, 0)), S3.basis_state((0, 0, 0)))


def test_embed_dimension_mismatch():
    with pytest.raises(DimensionError):
        embed(np.eye(3), S3, 1)


def test_embed_preserves_spectrum():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    a = a + a.conj().T
    big = embed(a, S3, 2)
    small_eigs = np.sort(np.linalg.eigvalsh(a))
    big_eigs = np.sort(np.linalg.eigvalsh(big.matrix))
    assert np.allclose(big_eigs, np.repeat(small_eigs, 4), atol=1e-12)


def test_embed_distinct_positions_commute():
    a = embed(SIGMA_X, S3, 0)
    b = embed(SIGMA_Z, S3, 2)
    assert np.max(np.abs(commutator(a, b).matrix)) < 1e-14


def test_destroy_matrix_elements():
    a = destroy(3)
    assert a[0, 1] == pytest.approx(1.0)
    assert a[1, 2] == pytest.approx(math.sqrt(2.0))


def test_herm_expm_identity_at_zero():
    h = Operator(S3, np.zeros((8, 8), dtype=complex))
    u = herm_expm(h, 1e-6)
    assert np.allclose(u.matrix, np.eye(8), atol=1e-14)


def test_herm_expm_pauli_quarter_period():
    space = CompositeSpace((2,))
    omega = 2 * math.pi * 1e6
    h = Operator(space, omega * SIGMA_X.astype(complex))
    u = herm_expm(h, math.pi / (2 * omega))
    assert np.max(np.abs(u.matrix - (-1j) * SIGMA_X)) < 1e-10


def test_herm_expm_inverse_property():
    rng = np.random.default_rng(11)
    m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = Operator(S3, m + m.conj().T)
    u = herm_expm(h, 0.37)
    v = herm_expm(h, -0.37)
    assert np.max(np.abs(u.matrix @ v.matrix - np.eye(8))) < 1e-10


def test_herm_expm_unitary_at_large_phase():
    rng = np.random.default_rng(5)
    for _ in range(5):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = m + m.conj().T
        scale = 1e3 / max(1.0, float(np.max(np.abs(np.linalg.eigvalsh(h)))))
        u = herm_expm(Operator(CompositeSpace((4,)), h), scale).matrix
        assert np.max(np.abs(u.conj().T @ u - np.eye(4))) <= 1e-10


def test_herm_expm_rejects_non_hermitian():
    m = np.zeros((8, 8), dtype=complex)
    m[0, 1] = 1.0
    with pytest.raises(ValidationError):
        herm_expm(Operator(S3, m), 1.0)


def test_pauli_commutator():
    space = CompositeSpace((2,))
    sp = Operator(space, SIGMA_PLUS.astype(complex))
    sm = Operator(space, SIGMA_MINUS.astype(complex))
    sz = Operator(space, SIGMA_Z.astype(complex))
    assert np.max(np.abs(commutator(sz, sz).matrix)) == 0.0
    assert np.allclose(commutator(sp, sm).matrix, sz.matrix)


def test_trace_of_projector():
    ket = S3.basis_state((1, 0, 0))
    rho = DensityMatrix.from_ket(S3, ket)
    assert trace(rho) == pytest.approx(1.0)


def test_dagger_involution():
    rng = np.random.default_rng(2)
    m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    op = Operator(S3, m)
    assert np.array_equal(dagger(dagger(op)).matrix, m)


def test_operator_space_mismatch_rejected():
    other = CompositeSpace((2, 2))
    with pytest.raises(DimensionError):
        Operator(S3, np.eye(8)) @ Operator(other, np.eye(4))


def test_density_matrix_from_ket_normalizes():
    rho = DensityMatrix.from_ket(S3, 2.0 * S3.basis_state((0, 1, 0)))
    assert np.trace(rho.matrix).real == pytest.approx(1.0)
    rho.validate()


def test_density_matrix_rejects_negative_eigenvalue():
    m = np.diag([1.5, -0.5] + [0.0] * 6).astype(complex)
    with pytest.raises(ValidationError):
        DensityMatrix(S3, m).validate()


def test_density_matrix_rejects_trace_loss():
    m = np.diag([0.9] + [0.0] * 7).astype(complex)
    with pytest.raises(ValidationError):
        DensityMatrix(S3, m).validate()


def test_is_hermitian_relative_tolerance():
    m = np.eye(8, dtype=complex) * 1e9
    m[0, 1] = 1e-5  # far below the 1e-12 relative band times the 1e9 scale
    assert Operator(S3, m).is_hermitian()
    m[0, 1] = 1.0
    assert not Operator(S3, m).is_hermitian()


def test_number_op():
    n = number_op(4)
    assert np.allclose(np.diag(n), [0, 1, 2, 3])


@pytest.mark.parametrize("cutoff", [1, 2, 3])
def test_fock_cutoffs_supported(cutoff):
    space = CompositeSpace((cutoff + 1, 2, cutoff + 1))
    a = embed(destroy(cutoff + 1), space, 0)
    top = [cutoff, 0, 0]
    below = [cutoff - 1, 0, 0]
    assert np.allclose(
        a.matrix @ space.basis_state(top),
        math.sqrt(cutoff) * space.basis_state(below),
    )
