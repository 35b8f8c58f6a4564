"""Regenerate the UI test fixtures from the backend CLI.

Run from the repository root:
    python frontend/scripts/make_fixtures.py

Every fixture is a byte-for-byte CLI artifact, so the parity tests compare
the explorer against exactly what `ideofactor recommend` / `export-space`
produce for the pinned instance, seeds and tolerances.
"""

import json
import pathlib
import sys
import tempfile

from ideofactor.cli import main
from ideofactor.synthetic import SyntheticSpec, generate, write_instance

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"

INSTANCE = SyntheticSpec(n_users=20, m_sources=10, seed=33)
FIT_SEED = "5"
USER = "u0000"
CASES = {
    "rec_wide.json": {"theta": "1.0", "delta": "0.5", "count": "3", "seed": "11"},
    "rec_narrow.json": {"theta": "0.97", "delta": "0.5", "count": "3", "seed": "11"},
    "rec_zero.json": {"theta": "0", "delta": "0", "count": "3", "seed": "11"},
    "rec_reseeded.json": {"theta": "1.0", "delta": "0.5", "count": "3", "seed": "12"},
    "rec_all_s11.json": {"theta": "1.0", "delta": "0.5", "count": "10", "seed": "11"},
    "rec_all_s12.json": {"theta": "1.0", "delta": "0.5", "count": "10", "seed": "12"},
}


def run(argv):
    code = main(argv)
    if code != 0:
        raise SystemExit(f"command failed ({code}): {argv}")


def build() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        paths = write_instance(generate(INSTANCE), tmp / "data")
        fit_dir = tmp / "fit"
        run(["fit", "--method", "ifd", "--edges", paths["edges"], "--edge-mode", "raw",
             "--engagement", paths["engagement"], "--alpha", "1", "--beta", "1",
             "--seed", FIT_SEED, "--out", str(fit_dir)])
        run(["export-space", "--factors", str(fit_dir / "factors.json"),
             "--engagement", paths["engagement"], "--truth", paths["user_truth"],
             "--out", str(FIXTURES / "space.json")])
        for name, case in CASES.items():
            run(["recommend", "--factors", str(fit_dir / "factors.json"),
                 "--engagement", paths["engagement"], "--truth", paths["user_truth"],
                 "--user", USER, "--theta", case["theta"], "--delta", case["delta"],
                 "--count", case["count"], "--seed", case["seed"],
                 "--out", str(FIXTURES / name)])
    manifest = {"user": USER, "cases": CASES}
    (FIXTURES / "cases.json").write_text(json.dumps(manifest, indent=1) + "\n")
    for name in ("space.json", *CASES):
        doc = json.loads((FIXTURES / name).read_text())
        items = len(doc.get("items", doc.get("sources", [])))
        print(f"{name}: {items} items/sources")


if __name__ == "__main__":
    sys.exit(build())
