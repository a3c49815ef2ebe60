#!/usr/bin/env python3
"""Regenerate the committed golden cost-model values.

Runs the reference sweep (configs/cost_model.json: 200 synthetic queries,
n=100, k=10, deterministic score oracle) and freezes every aggregate into
tests/golden/cost_model.json. The acceptance suite asserts exact equality
against this file, so regenerating it is only legitimate when the cost
accounting itself intentionally changes.
"""

import json
import sys
from dataclasses import asdict
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from prp_sort import load_config, run_experiment  # noqa: E402

CONFIG = ROOT / "configs" / "cost_model.json"
GOLDEN = ROOT / "tests" / "golden" / "cost_model.json"


def main() -> int:
    config = load_config(str(CONFIG))
    report = run_experiment(config)
    aggregates = {}
    for agg in report.aggregates:
        record = asdict(agg)
        record.pop("algorithm")
        aggregates[agg.algorithm] = record
    GOLDEN.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "source_config": str(CONFIG.relative_to(ROOT)),
        "aggregates": aggregates,
    }
    GOLDEN.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {GOLDEN.relative_to(ROOT)}")
    for label, record in aggregates.items():
        print(
            f"  {label:42s} comp={record['mean_comparisons']:8.2f} "
            f"inf={record['mean_inference_calls']:8.2f} "
            f"gain={record['gain_pct'] if record['gain_pct'] is not None else '-'}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
