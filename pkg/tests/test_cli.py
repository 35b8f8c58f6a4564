import json

import numpy as np
import pytest

from ideofactor.cli import main
from ideofactor.fileio import load_factors, load_json
from ideofactor.synthetic import SyntheticSpec, generate, write_instance


@pytest.fixture(scope="module")
def instance_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("instance")
    inst = generate(SyntheticSpec(n_users=40, m_sources=12, seed=17))
    paths = write_instance(inst, root)
    return inst, paths


def _fit(paths, outdir, *extra):
    argv = ["fit", "--edges", paths["edges"], "--edge-mode", "raw",
            "--engagement", paths["engagement"], "--out", str(outdir),
            "--seed", "7", "--max-iters", "120", *extra]
    return main(argv)


@pytest.fixture(scope="module")
def run_dir(instance_files, tmp_path_factory):
    _, paths = instance_files
    out = tmp_path_factory.mktemp("fitrun")
    assert _fit(paths, out, "--method", "ifd", "--alpha", "1", "--beta", "1") == 0
    return out


class TestFit:
    def test_end_to_end_exit_zero(self, instance_files, tmp_path):
        _, paths = instance_files
        assert _fit(paths, tmp_path / "run", "--method", "ifd",
                    "--alpha", "1", "--beta", "1") == 0
        bundle = load_factors(tmp_path / "run" / "factors.json")
        assert bundle.method == "ifd"
        assert np.all(np.isfinite(bundle.objective_trace))
        manifest = load_json(tmp_path / "run" / "manifest.json")
        assert set(manifest["inputs"]) == {paths["edges"], paths["engagement"]}

    def test_byte_identical_reruns(self, instance_files, tmp_path):
        _, paths = instance_files
        for d in ("a", "b"):
            assert _fit(paths, tmp_path / d, "--method", "ifd",
                        "--alpha", "1", "--beta", "1") == 0
        fa = (tmp_path / "a" / "factors.json").read_bytes()
        fb = (tmp_path / "b" / "factors.json").read_bytes()
        assert fa == fb

    def test_dmcc_zero_reg_equals_onmtf(self, instance_files, tmp_path):
        _, paths = instance_files
        assert _fit(paths, tmp_path / "dmcc", "--method", "dmcc",
                    "--alpha", "0", "--beta", "0") == 0
        assert _fit(paths, tmp_path / "onmtf", "--method", "onmtf") == 0
        t1 = load_factors(tmp_path / "dmcc" / "factors.json").objective_trace
        t2 = load_factors(tmp_path / "onmtf" / "factors.json").objective_trace
        assert np.array_equal(t1, t2)

    def test_nmf_symm_sources_side(self, instance_files, tmp_path):
        _, paths = instance_files
        args = ["fit", "--method", "nmf-symm", "--symm-side", "sources",
                "--engagement", paths["engagement"], "--out", str(tmp_path / "symm"),
                "--seed", "3", "--max-iters", "80"]
        assert main(args) == 0
        bundle = load_factors(tmp_path / "symm" / "factors.json")
        assert bundle.U is None and bundle.V is not None
        assert bundle.source_ids is not None

    def test_missing_required_input_exits_2(self, instance_files, tmp_path):
        _, paths = instance_files
        args = ["fit", "--method", "ifd", "--engagement", paths["engagement"],
                "--out", str(tmp_path / "x")]
        assert main(args) == 2

    def test_malformed_file_exits_2_with_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.tsv"
        bad.write_text("a\tb\t1\na\tb\tnope\n")
        args = ["fit", "--method", "ifd", "--edges", str(bad),
                "--engagement", str(bad), "--out", str(tmp_path / "x")]
        assert main(args) == 2
        err = capsys.readouterr().err
        assert ":2:" in err


class TestScoreEval:
    def test_score_writes_table(self, instance_files, run_dir, tmp_path):
        _, paths = instance_files
        out = tmp_path / "scores"
        args = ["score", "--factors", str(run_dir / "factors.json"),
                "--truth", paths["user_truth"], "--out", str(out)]
        assert main(args) == 0
        lines = (out / "scores.csv").read_text().splitlines()
        assert lines[0] == "id,kind,ideology,popularity,cluster,degenerate"
        assert len(lines) == 1 + 40 + 12
        orientation = load_json(out / "orientation.json")
        assert orientation["axis_orientation"] == "anchored"

    def test_eval_high_purity_on_planted(self, instance_files, run_dir, tmp_path):
        _, paths = instance_files
        report_path = tmp_path / "report.json"
        args = ["eval", "--factors", str(run_dir / "factors.json"),
                "--truth", paths["user_truth"], "--target", "users",
                "--out", str(report_path)]
        assert main(args) == 0
        report = load_json(report_path)
        assert report["purity"] >= 0.95
        assert report["corr_i"] > 0.8

    def test_eval_perfect_agreement_when_truth_is_prediction(self, run_dir, tmp_path):
        # evaluate against a truth file derived from the fit's own clusters
        bundle = load_factors(run_dir / "factors.json")
        labels = np.argmax(bundle.U, axis=1).astype(float)
        truth_path = tmp_path / "self_truth.csv"
        truth_path.write_text("id,score\n" + "".join(
            f"{uid},{lab}\n" for uid, lab in zip(bundle.user_ids, labels)))
        report_path = tmp_path / "self_report.json"
        args = ["eval", "--factors", str(run_dir / "factors.json"),
                "--truth", str(truth_path), "--out", str(report_path)]
        assert main(args) == 0
        assert load_json(report_path)["purity"] == 1.0

    def test_eval_insufficient_overlap_exits_4(self, run_dir, tmp_path):
        truth_path = tmp_path / "tiny_truth.csv"
        truth_path.write_text("id,score\nu0000,0.2\n")
        args = ["eval", "--factors", str(run_dir / "factors.json"),
                "--truth", str(truth_path)]
        assert main(args) == 4


class TestRecommendCli:
    def test_empty_box_empty_items(self, instance_files, run_dir, tmp_path, capsys):
        inst, paths = instance_files
        args = ["recommend", "--factors", str(run_dir / "factors.json"),
                "--engagement", paths["engagement"], "--user", inst.C.user_ids[0],
                "--theta", "0", "--delta", "0", "--count", "3", "--seed", "1"]
        assert main(args) == 0
        doc = json.loads(capsys.readouterr().out.strip())
        assert doc["items"] == []

    def test_deterministic_output_bytes(self, instance_files, run_dir, tmp_path):
        inst, paths = instance_files
        outs = []
        for name in ("r1.json", "r2.json"):
            path = tmp_path / name
            args = ["recommend", "--factors", str(run_dir / "factors.json"),
                    "--engagement", paths["engagement"], "--user", inst.C.user_ids[0],
                    "--theta", "1", "--delta", "100", "--count", "4", "--seed", "9",
                    "--out", str(path)]
            assert main(args) == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]

    def test_export_space_document(self, instance_files, run_dir, tmp_path):
        inst, paths = instance_files
        out = tmp_path / "space.json"
        args = ["export-space", "--factors", str(run_dir / "factors.json"),
                "--engagement", paths["engagement"], "--out", str(out)]
        assert main(args) == 0
        doc = load_json(out)
        assert set(doc) == {"users", "sources", "edges"}
        assert len(doc["users"]) == 40


class TestGridsearch:
    def test_single_cell_returned(self, instance_files, tmp_path):
        _, paths = instance_files
        out = tmp_path / "grid"
        args = ["gridsearch", "--edges", paths["edges"], "--edge-mode", "raw",
                "--engagement", paths["engagement"], "--truth", paths["user_truth"],
                "--alpha-grid", "0.5", "--beta-grid", "2", "--seed", "1",
                "--max-iters", "60", "--out", str(out)]
        assert main(args) == 0
        report = load_json(out / "gridsearch.json")
        assert report["best"] == {"alpha": 0.5, "beta": 2.0}
        assert len(report["grid"]) == 1

    def test_report_covers_full_grid(self, instance_files, tmp_path):
        _, paths = instance_files
        out = tmp_path / "grid4"
        args = ["gridsearch", "--edges", paths["edges"], "--edge-mode", "raw",
                "--engagement", paths["engagement"], "--truth", paths["user_truth"],
                "--alpha-grid", "0,1", "--beta-grid", "0,1", "--seed", "1",
                "--max-iters", "60", "--out", str(out)]
        assert main(args) == 0
        report = load_json(out / "gridsearch.json")
        assert len(report["grid"]) == 4
        cells = [(row["alpha"], row["beta"]) for row in report["grid"]]
        assert cells == sorted(cells)

    def test_missing_truth_exits_2(self, instance_files, tmp_path):
        _, paths = instance_files
        args = ["gridsearch", "--edges", paths["edges"], "--edge-mode", "raw",
                "--engagement", paths["engagement"], "--out", str(tmp_path / "g")]
        assert main(args) == 2

    def test_regularization_selected_on_noisy_instances(self, tmp_path):
        # planted parameters where the manifold terms genuinely help
        wins = 0
        for seed in range(10):
            inst = generate(SyntheticSpec(n_users=60, m_sources=30, p_in=0.05,
                                          p_out=0.03, lambda_in=3.0, lambda_out=2.2,
                                          seed=seed))
            root = tmp_path / f"noisy{seed}"
            paths = write_instance(inst, root)
            out = root / "grid"
            args = ["gridsearch", "--edges", paths["edges"], "--edge-mode", "raw",
                    "--engagement", paths["engagement"], "--truth", paths["user_truth"],
                    "--alpha-grid", "0,1", "--beta-grid", "0,1",
                    "--seed", str(1000 + seed), "--max-iters", "300",
                    "--out", str(out)]
            assert main(args) == 0
            best = load_json(out / "gridsearch.json")["best"]
            if (best["alpha"], best["beta"]) != (0.0, 0.0):
                wins += 1
        assert wins >= 7
