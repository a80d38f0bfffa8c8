import numpy as np
import pytest

from prpca import linalg
from prpca.errors import InvalidMatrix, InvalidParameter


def test_as_matrix_rejects_nonfinite_and_empty():
    with pytest.raises(InvalidMatrix):
        linalg.as_matrix(np.array([[1.0, np.nan]]))
    with pytest.raises(InvalidMatrix):
        linalg.as_matrix(np.array([[np.inf, 0.0]]))
    with pytest.raises(InvalidMatrix):
        linalg.as_matrix(np.zeros((0, 3)))
    with pytest.raises(InvalidMatrix):
        linalg.as_matrix(np.zeros(4))


def test_svd_thin_diagonal():
    U, s, V = linalg.svd_thin(np.diag([3.0, 1.0]))
    assert np.allclose(s, [3.0, 1.0])
    assert np.allclose(np.abs(U), np.eye(2))
    assert np.allclose(np.abs(V), np.eye(2))


def test_svd_thin_zero_matrix():
    _, s, _ = linalg.svd_thin(np.zeros((2, 3)))
    assert s.shape == (2,)
    assert np.all(s == 0.0)


def test_svd_failure_is_wrapped(monkeypatch):
    from prpca.errors import NumericalFailure

    def broken(*args, **kwargs):
        raise np.linalg.LinAlgError("did not converge")

    monkeypatch.setattr(np.linalg, "svd", broken)
    with pytest.raises(NumericalFailure):
        linalg.svd_thin(np.eye(3))
    with pytest.raises(NumericalFailure):
        linalg.singular_values(np.eye(3))


def test_svd_thin_reconstruction_and_orthonormality():
    rng = np.random.default_rng(0)
    M = rng.standard_normal((5, 3))
    U, s, V = linalg.svd_thin(M)
    assert np.abs(U.T @ U - np.eye(3)).max() < 1e-10
    assert np.abs(V.T @ V - np.eye(3)).max() < 1e-10
    assert np.all(np.diff(s) <= 0)
    assert np.linalg.norm((U * s) @ V.T - M) < 1e-8 * (1 + s[0])


def test_singular_values_match_eigen_oracle():
    # independent oracle: sqrt of eigenvalues of M^T M
    rng = np.random.default_rng(1)
    for _ in range(5):
        M = rng.standard_normal((4, 4))
        s = linalg.singular_values(M)
        eigs = np.sqrt(np.maximum(np.linalg.eigvalsh(M.T @ M), 0.0))[::-1]
        assert np.abs(s - eigs).max() < 1e-8


def test_entrywise_norms():
    M = np.array([[1.0, -2.0], [0.0, 3.0]])
    assert linalg.norm(M, "vec1") == 6.0
    assert linalg.norm(M, "vec0") == 3.0
    assert linalg.norm(M, "vecinf") == 3.0
    rng = np.random.default_rng(2)
    A = rng.standard_normal((4, 6))
    assert abs(linalg.norm(A, "vec2") ** 2 - (A**2).sum()) < 1e-12


def test_spectral_norms_diagonal():
    M = np.diag([3.0, 1.0])
    assert abs(linalg.norm(M, "nuclear") - 4.0) < 1e-12
    assert abs(linalg.norm(M, "spectral") - 3.0) < 1e-12


def test_operator_norms_hand_oracle():
    M = np.array([[1.0, 1.0], [0.0, 0.0]])
    # column sums |1|,|1| -> 1; row sums 2, 0 -> 2
    assert linalg.norm(M, "one_to_one") == 1.0
    assert linalg.norm(M, "inf_to_inf") == 2.0
    assert linalg.norm(M, "star", rho=1.0) == 2.0


def test_operator_norms_random_oracle():
    rng = np.random.default_rng(3)
    M = rng.standard_normal((5, 7))
    col = max(sum(abs(M[i, j]) for i in range(5)) for j in range(7))
    row = max(sum(abs(M[i, j]) for j in range(7)) for i in range(5))
    assert abs(linalg.norm(M, "one_to_one") - col) < 1e-12
    assert abs(linalg.norm(M, "inf_to_inf") - row) < 1e-12


def test_norm_inequalities():
    rng = np.random.default_rng(4)
    for _ in range(10):
        M = rng.standard_normal((4, 5))
        spectral = linalg.norm(M, "spectral")
        assert linalg.norm(M, "nuclear") >= spectral - 1e-12
        for rho in (0.1, 0.5, 1.0, 3.0, 10.0):
            assert spectral <= linalg.norm(M, "star", rho=rho) + 1e-12


def test_norm_errors():
    with pytest.raises(InvalidParameter):
        linalg.norm(np.eye(2), "star", rho=0.0)
    with pytest.raises(InvalidParameter):
        linalg.norm(np.eye(2), "star")
    with pytest.raises(InvalidParameter):
        linalg.norm(np.eye(2), "fro")


def test_pseudoinverse_examples():
    assert np.allclose(linalg.pseudoinverse(np.eye(3)), np.eye(3))
    assert np.allclose(linalg.pseudoinverse(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))


def test_pseudoinverse_left_inverse_and_penrose():
    rng = np.random.default_rng(5)
    M = rng.standard_normal((6, 3))
    P = linalg.pseudoinverse(M)
    assert np.abs(P @ M - np.eye(3)).max() < 1e-8
    assert np.abs(M @ P @ M - M).max() < 1e-8
    assert np.abs(P @ M @ P - P).max() < 1e-8
    assert np.abs((M @ P) - (M @ P).T).max() < 1e-8
    assert np.abs((P @ M) - (P @ M).T).max() < 1e-8


def test_pseudoinverse_involution_on_full_rank():
    rng = np.random.default_rng(6)
    M = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    back = linalg.pseudoinverse(linalg.pseudoinverse(M))
    assert np.abs(back - M).max() < 1e-8


def test_column_space_projector():
    rng = np.random.default_rng(7)
    Q, _ = np.linalg.qr(rng.standard_normal((6, 2)))
    assert np.abs(linalg.column_space_projector(Q) - Q @ Q.T).max() < 1e-10
    assert np.allclose(linalg.column_space_projector(np.eye(4)), np.eye(4))
    M = rng.standard_normal((8, 3))
    proj = linalg.column_space_projector(M)
    assert np.abs(proj @ proj - proj).max() < 1e-8
    assert np.abs(proj - proj.T).max() < 1e-10
    assert np.abs(proj @ M - M).max() < 1e-8
    with pytest.raises(InvalidMatrix):
        linalg.column_space_projector(np.zeros((3, 3)))
