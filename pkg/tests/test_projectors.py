import numpy as np
import pytest

from prpca import linalg
from prpca.errors import InvalidMatrix, InvalidProjectorPair
from prpca.interpolation import projector_pair
from prpca.projectors import lowrank_projector, smooth_lowrank_projector, support_projector


def test_support_projector_mask_cases():
    rng = np.random.default_rng(0)
    M = rng.standard_normal((3, 4))
    assert np.all(support_projector(np.zeros((3, 4))).apply(M) == 0.0)
    full = support_projector(np.ones((3, 4)))
    assert np.array_equal(full.apply(M), M)
    proj = support_projector(np.array([[1.0, 0.0], [0.0, 0.0]]))
    out = proj.apply(np.array([[5.0, 6.0], [7.0, 8.0]]))
    assert np.array_equal(out, np.array([[5.0, 0.0], [0.0, 0.0]]))


def test_support_projector_idempotent_and_complement():
    rng = np.random.default_rng(1)
    Y0 = rng.standard_normal((4, 5)) * (rng.random((4, 5)) < 0.3)
    proj = support_projector(Y0)
    M = rng.standard_normal((4, 5))
    once = proj.apply(M)
    assert np.array_equal(proj.apply(once), once)
    assert np.array_equal(proj.complement(M), M - once)
    assert proj.support_size == np.count_nonzero(Y0)


def test_smooth_lowrank_identity_pair_hand_oracle():
    # X0 = e1 e1^T with identity P, Q: projection keeps row 0 and column 0
    X0 = np.zeros((2, 2))
    X0[0, 0] = 1.0
    proj = smooth_lowrank_projector(X0, np.eye(2), np.eye(2))
    M = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.abs(proj.apply(M) - np.array([[1.0, 2.0], [3.0, 0.0]])).max() < 1e-12


def test_smooth_lowrank_contains_interpolated_component():
    rng = np.random.default_rng(2)
    pair = projector_pair("single", 12, 8)
    X0 = rng.standard_normal((6, 2)) @ rng.standard_normal((2, 4))
    proj = smooth_lowrank_projector(X0, pair.P, pair.Q)
    target = pair.apply(X0)
    assert np.abs(proj.apply(target) - target).max() < 1e-8


def test_smooth_lowrank_idempotent():
    rng = np.random.default_rng(3)
    pair = projector_pair("single", 10, 10)
    X0 = rng.standard_normal((5, 2)) @ rng.standard_normal((2, 5))
    proj = smooth_lowrank_projector(X0, pair.P, pair.Q)
    M = rng.standard_normal((10, 10))
    once = proj.apply(M)
    assert np.abs(proj.apply(once) - once).max() < 1e-8
    assert np.abs(proj.complement(M) - (M - once)).max() < 1e-12


def test_smooth_lowrank_rejects_bad_inputs():
    X0 = np.eye(3)
    rank_deficient = np.zeros((4, 3))
    rank_deficient[:, 0] = 1.0
    with pytest.raises(InvalidProjectorPair):
        smooth_lowrank_projector(X0, rank_deficient, np.eye(3))
    with pytest.raises(InvalidMatrix):
        smooth_lowrank_projector(np.zeros((3, 3)), np.eye(3), np.eye(3))


def test_lowrank_projector_fixed_points():
    rng = np.random.default_rng(4)
    X0 = rng.standard_normal((5, 3)) @ rng.standard_normal((3, 4))
    proj = lowrank_projector(X0)
    assert np.abs(proj.apply(X0) - X0).max() < 1e-10
    square = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    full = lowrank_projector(square)
    M = rng.standard_normal((4, 4))
    assert np.abs(full.apply(M) - M).max() < 1e-10


def test_lowrank_projector_orthogonal_split():
    rng = np.random.default_rng(5)
    X0 = np.outer(rng.standard_normal(3), rng.standard_normal(3))
    proj = lowrank_projector(X0)
    M = rng.standard_normal((3, 3))
    inner = np.sum(proj.apply(M) * proj.complement(M))
    assert abs(inner) < 1e-8


def test_tangent_norm_bounds():
    # ||P_T(M)||_* <= 2 r ||M||_2 and ||P_T(M)||_F <= 2 sqrt(r) ||M||_2
    rng = np.random.default_rng(6)
    for r in (1, 2, 3):
        pair = projector_pair("single", 12, 12)
        X0 = rng.standard_normal((6, r)) @ rng.standard_normal((r, 6))
        proj = smooth_lowrank_projector(X0, pair.P, pair.Q)
        for _ in range(5):
            M = rng.standard_normal((12, 12))
            spectral = linalg.norm(M, "spectral")
            out = proj.apply(M)
            assert linalg.norm(out, "nuclear") <= 2 * r * spectral + 1e-9
            assert linalg.norm(out, "vec2") <= 2 * np.sqrt(r) * spectral + 1e-9


def test_support_operator_norm_bounds():
    rng = np.random.default_rng(7)
    Y0 = rng.standard_normal((6, 6)) * (rng.random((6, 6)) < 0.4)
    proj = support_projector(Y0)
    sign = np.sign(Y0)
    for _ in range(5):
        M = rng.standard_normal((6, 6))
        vecinf = linalg.norm(M, "vecinf")
        out = proj.apply(M)
        for kind in ("one_to_one", "inf_to_inf"):
            assert linalg.norm(out, kind) <= linalg.norm(sign, kind) * vecinf + 1e-12


def test_tangent_bases_match_direct_svd_route():
    # the projector built from P U0 and Q V0 agrees with the one built
    # from the singular vectors of P X0 Q^T itself
    rng = np.random.default_rng(8)
    for N, M in ((8, 8), (12, 16)):
        pair = projector_pair("single", N, M)
        X0 = rng.standard_normal((N // 2, 2)) @ rng.standard_normal((2, M // 2))
        proj = smooth_lowrank_projector(X0, pair.P, pair.Q)
        U_bar, s, V_bar = linalg.svd_thin(pair.apply(X0))
        r = np.count_nonzero(s > 1e-10 * s[0])
        U_bar, V_bar = U_bar[:, :r], V_bar[:, :r]
        assert np.abs(proj.U @ proj.U.T - U_bar @ U_bar.T).max() < 1e-8
        assert np.abs(proj.V @ proj.V.T - V_bar @ V_bar.T).max() < 1e-8


def test_tangent_membership_transfers_through_pair():
    # X in the core tangent space implies P X Q^T in the interpolated one
    rng = np.random.default_rng(9)
    pair = projector_pair("single", 12, 12)
    X0 = rng.standard_normal((6, 2)) @ rng.standard_normal((2, 6))
    core = lowrank_projector(X0)
    tangent = smooth_lowrank_projector(X0, pair.P, pair.Q)
    U0, V0 = core.U, core.V
    A = rng.standard_normal((6, 2))
    B = rng.standard_normal((6, 2))
    X = U0 @ A.T + B @ V0.T
    assert np.abs(core.complement(X)).max() < 1e-10
    assert np.abs(tangent.complement(pair.apply(X))).max() < 1e-8
