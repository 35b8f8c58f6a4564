import numpy as np
import pytest

from ideofactor.datamodel import build_engagement_matrix, build_interaction_matrix
from ideofactor.errors import InputError
from ideofactor.fileio import read_edge_file, read_engagement_file, read_score_csv
from ideofactor.synthetic import SyntheticSpec, generate, write_instance


class TestSpecValidation:
    @pytest.mark.parametrize("kwargs", [
        dict(block_fraction=0.0), dict(block_fraction=1.0),
        dict(p_in=0.05, p_out=0.1), dict(lambda_in=1.0, lambda_out=2.0),
        dict(ideology_spread=0.5), dict(n_users=0),
    ])
    def test_invalid_specs_rejected(self, kwargs):
        with pytest.raises(InputError):
            SyntheticSpec(**kwargs)


class TestGenerate:
    def test_no_cross_noise_gives_exact_block_structure(self):
        spec = SyntheticSpec(n_users=40, m_sources=16, p_out=0.0, lambda_out=0.0, seed=1)
        inst = generate(spec)
        cross_u = inst.user_blocks[:, None] != inst.user_blocks[None, :]
        assert np.all(inst.A.entries[cross_u] == 0.0)
        cross_c = inst.user_blocks[:, None] != inst.source_blocks[None, :]
        assert np.all(inst.C.entries[cross_c] == 0.0)

    def test_deterministic_per_seed(self):
        spec = SyntheticSpec(n_users=30, m_sources=10, seed=9)
        a, b = generate(spec), generate(spec)
        assert np.array_equal(a.A.entries, b.A.entries)
        assert np.array_equal(a.C.entries, b.C.entries)
        assert np.array_equal(a.user_ideology_true.values, b.user_ideology_true.values)

    def test_within_block_density_matches_p_in(self):
        densities = []
        for seed in range(10):
            inst = generate(SyntheticSpec(seed=seed))
            same = inst.user_blocks[:, None] == inst.user_blocks[None, :]
            np.fill_diagonal(same, False)
            densities.append(inst.A.entries[same].mean())
        assert abs(np.mean(densities) - 0.10) <= 0.02

    def test_cross_density_below_within_density(self):
        for seed in range(5):
            inst = generate(SyntheticSpec(seed=seed))
            same = inst.user_blocks[:, None] == inst.user_blocks[None, :]
            np.fill_diagonal(same, False)
            cross = inst.user_blocks[:, None] != inst.user_blocks[None, :]
            assert inst.A.entries[cross].mean() < inst.A.entries[same].mean()

    def test_planted_scores_separable_at_half(self):
        inst = generate(SyntheticSpec(seed=3, ideology_spread=0.2))
        scores = inst.user_ideology_true.values
        assert np.all(scores[inst.user_blocks == 0] < 0.5)
        assert np.all(scores[inst.user_blocks == 1] > 0.5)

    def test_scores_in_unit_interval(self):
        inst = generate(SyntheticSpec(seed=4, ideology_spread=0.49))
        for series in (inst.user_ideology_true, inst.source_ideology_true):
            assert np.all(series.values >= 0.0) and np.all(series.values <= 1.0)

    def test_symmetric_interaction_matrix(self):
        inst = generate(SyntheticSpec(seed=5))
        assert np.array_equal(inst.A.entries, inst.A.entries.T)


class TestWriteInstance:
    def test_files_round_trip(self, tmp_path):
        inst = generate(SyntheticSpec(n_users=25, m_sources=8, seed=6))
        paths = write_instance(inst, tmp_path)

        edges = read_edge_file(paths["edges"])
        A = build_interaction_matrix(edges, "raw", users=inst.A.user_ids)
        assert np.array_equal(A.entries, inst.A.entries)

        records = read_engagement_file(paths["engagement"])
        C = build_engagement_matrix(records, users=inst.C.user_ids,
                                    sources=inst.C.source_ids)
        assert np.array_equal(C.entries, inst.C.entries)

        truth = read_score_csv(paths["user_truth"])
        assert truth.ids == inst.user_ideology_true.ids
        assert np.array_equal(truth.values, inst.user_ideology_true.values)
