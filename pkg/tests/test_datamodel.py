import numpy as np
import pytest

from ideofactor.datamodel import (MODE_FOLLOW, MODE_RAW, MODE_RETWEET, AffinityMatrix,
                                  EngagementMatrix, InteractionMatrix, affinity_cols,
                                  affinity_rows, build_engagement_matrix,
                                  build_interaction_matrix, col_normalize, laplacian,
                                  row_normalize)
from ideofactor.errors import InputError


class TestBuildInteraction:
    def test_retweet_directed_entry(self):
        A = build_interaction_matrix([("a", "b", 3.0)], MODE_RETWEET)
        i, j = A.user_ids.index("a"), A.user_ids.index("b")
        assert A.entries[i, j] == 3.0
        assert A.entries[j, i] == 0.0

    def test_follow_common_neighbors_small(self):
        # a follows {x, y}; b follows {x, y, z} -> two common followees
        edges = [("a", "x", 1.0), ("a", "y", 1.0),
                 ("b", "x", 1.0), ("b", "y", 1.0), ("b", "z", 1.0)]
        A = build_interaction_matrix(edges, MODE_FOLLOW)
        i, j = A.user_ids.index("a"), A.user_ids.index("b")
        assert A.entries[i, j] == 2.0
        assert A.entries[j, i] == 2.0

    def test_follow_matches_set_intersection_oracle(self):
        rng = np.random.default_rng(0)
        users = [f"u{i}" for i in range(8)]
        targets = [f"t{j}" for j in range(12)]
        follows = {u: {t for t in targets if rng.random() < 0.4} for u in users}
        edges = [(u, t, 1.0) for u in users for t in sorted(follows[u])]
        A = build_interaction_matrix(edges, MODE_FOLLOW, users=users)
        for i, u in enumerate(users):
            for j, v in enumerate(users):
                expected = 0 if i == j else len(follows[u] & follows[v])
                assert A.entries[i, j] == expected

    def test_empty_edge_list_gives_zero_matrix(self):
        A = build_interaction_matrix([], MODE_RETWEET, users=["a", "b", "c"])
        assert np.array_equal(A.entries, np.zeros((3, 3)))

    def test_duplicate_edges_summed(self):
        A = build_interaction_matrix([("a", "b", 1.0), ("a", "b", 2.0)], MODE_RETWEET)
        assert A.entries[A.user_ids.index("a"), A.user_ids.index("b")] == 3.0

    def test_self_loops_dropped(self):
        A = build_interaction_matrix([("a", "a", 5.0), ("a", "b", 1.0)], MODE_RETWEET)
        assert np.all(np.diagonal(A.entries) == 0.0)

    def test_negative_weight_rejected(self):
        with pytest.raises(InputError):
            build_interaction_matrix([("a", "b", -1.0)], MODE_RETWEET)

    def test_unknown_id_with_universe_rejected(self):
        with pytest.raises(InputError):
            build_interaction_matrix([("a", "z", 1.0)], MODE_RETWEET, users=["a", "b"])

    def test_raw_mode_keeps_weights(self):
        A = build_interaction_matrix([("a", "b", 0.5), ("b", "a", 2.0)], MODE_RAW)
        i, j = A.user_ids.index("a"), A.user_ids.index("b")
        assert A.entries[i, j] == 0.5 and A.entries[j, i] == 2.0


class TestEngagement:
    def test_counts_summed_and_aligned(self):
        C = build_engagement_matrix([("u", "s", 1.0), ("u", "s", 2.0), ("v", "t", 4.0)])
        assert C.entries[C.user_ids.index("u"), C.source_ids.index("s")] == 3.0
        assert C.n == 2 and C.m == 2

    def test_negative_count_rejected(self):
        with pytest.raises(InputError):
            build_engagement_matrix([("u", "s", -2.0)])

    def test_sparse_round_trip(self):
        C = build_engagement_matrix([("u", "s", 1.0), ("v", "t", 4.0)])
        back = EngagementMatrix.from_sparse(C.to_sparse(), C.user_ids, C.source_ids)
        assert np.array_equal(back.entries, C.entries)

    def test_direct_construction_validates(self):
        with pytest.raises(InputError):
            EngagementMatrix(entries=np.array([[1.0, -1.0]]), user_ids=("u",),
                             source_ids=("s", "t"))


class TestNormalize:
    def test_row_unit_norm(self):
        out = row_normalize(np.array([[3.0, 4.0]]))
        assert np.allclose(out, [[0.6, 0.8]])

    def test_zero_row_unchanged(self):
        out = row_normalize(np.array([[0.0, 0.0], [1.0, 0.0]]))
        assert np.array_equal(out[0], [0.0, 0.0])

    def test_identity_already_normalized(self):
        assert np.array_equal(row_normalize(np.eye(3)), np.eye(3))

    def test_col_normalize_basic(self):
        out = col_normalize(np.array([[1.0], [1.0]]))
        assert np.allclose(out, [[1 / np.sqrt(2)], [1 / np.sqrt(2)]])

    def test_col_zero_column(self):
        X = np.array([[0.0, 1.0], [0.0, 2.0]])
        out = col_normalize(X)
        assert np.array_equal(out[:, 0], [0.0, 0.0])

    def test_col_normalize_idempotent(self):
        X = col_normalize(np.random.default_rng(1).random((4, 3)))
        assert np.allclose(col_normalize(X), X)


class TestAffinity:
    def test_identical_rows_affinity_one(self):
        aff = affinity_rows(np.array([[1.0, 2.0], [2.0, 4.0]]))
        assert aff.entries[0, 1] == pytest.approx(1.0)

    def test_orthogonal_rows_affinity_zero(self):
        aff = affinity_rows(np.array([[1.0, 0.0], [0.0, 1.0]]))
        assert aff.entries[0, 1] == 0.0

    def test_affinity_matches_dot_product_oracle(self):
        X = np.array([[1.0, 1.0], [1.0, 0.0]])
        aff = affinity_rows(X)
        expected = (X[0] / np.linalg.norm(X[0])) @ (X[1] / np.linalg.norm(X[1]))
        assert aff.entries[0, 1] == pytest.approx(expected, abs=1e-12)
        assert aff.entries[0, 1] == pytest.approx(1 / np.sqrt(2), abs=1e-12)

    def test_cols_transposed_examples(self):
        X = np.array([[1.0, 1.0], [1.0, 0.0]]).T
        aff = affinity_cols(X)
        assert aff.entries[0, 1] == pytest.approx(1 / np.sqrt(2), abs=1e-12)
        assert aff.axis == "columns"

    def test_zero_row_zero_affinity_everywhere(self):
        aff = affinity_rows(np.array([[0.0, 0.0], [1.0, 2.0]]))
        assert aff.entries[0, 0] == 0.0
        assert aff.entries[0, 1] == 0.0

    def test_nonnegative_input_range(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            X = rng.random((6, 4))
            aff = affinity_rows(X)
            assert np.all(aff.entries >= 0.0) and np.all(aff.entries <= 1.0)

    def test_transpose_duality_bitwise(self):
        rng = np.random.default_rng(3)
        X = rng.random((5, 7))
        assert np.array_equal(affinity_rows(X).entries, affinity_cols(X.T).entries)


class TestLaplacian:
    def test_complete_two_node_graph(self):
        L = laplacian(np.array([[1.0, 1.0], [1.0, 1.0]]))
        assert np.array_equal(L.entries, [[1.0, -1.0], [-1.0, 1.0]])

    def test_identity_affinity_gives_zero(self):
        L = laplacian(np.eye(3))
        assert np.array_equal(L.entries, np.zeros((3, 3)))

    def test_path_graph_degrees(self):
        W = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]])
        L = laplacian(W)
        assert np.array_equal(L.degree, [1.0, 2.0, 1.0])

    def test_asymmetric_rejected(self):
        with pytest.raises(InputError):
            laplacian(np.array([[0.0, 1.0], [0.5, 0.0]]))

    def test_row_sums_zero(self):
        rng = np.random.default_rng(4)
        W = rng.random((8, 8))
        W = (W + W.T) / 2
        L = laplacian(W)
        assert np.max(np.abs(L.entries.sum(axis=1))) <= 1e-9

    def test_positive_semidefinite(self):
        rng = np.random.default_rng(5)
        W = rng.random((10, 10))
        W = (W + W.T) / 2
        L = laplacian(W).entries
        for _ in range(100):
            z = rng.standard_normal(10)
            assert z @ L @ z >= -1e-9

    def test_trace_identity_on_random_instances(self):
        # 1/2 sum_ij ||u_i - u_j||^2 W_ij == tr(U^T L U)
        rng = np.random.default_rng(6)
        for _ in range(10):
            W = rng.random((10, 10))
            W = (W + W.T) / 2
            U = rng.random((10, 3))
            L = laplacian(W).entries
            direct = 0.0
            for i in range(10):
                for j in range(10):
                    diff = U[i] - U[j]
                    direct += 0.5 * (diff @ diff) * W[i, j]
            traced = np.trace(U.T @ L @ U)
            assert traced == pytest.approx(direct, rel=1e-6)


class TestContainers:
    def test_interaction_immutable(self):
        A = build_interaction_matrix([("a", "b", 1.0)], MODE_RETWEET)
        with pytest.raises(ValueError):
            A.entries[0, 0] = 5.0

    def test_affinity_axis_validated(self):
        with pytest.raises(InputError):
            AffinityMatrix(entries=np.eye(2), axis="diagonal")

    def test_interaction_mode_validated(self):
        with pytest.raises(InputError):
            InteractionMatrix(entries=np.zeros((2, 2)), mode="bogus", user_ids=("a", "b"))
