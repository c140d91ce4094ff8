#!/usr/bin/env python3
"""Checks the documented schemas and CSV columns against real CLI output."""
import json
import re
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

cli, root = Path(sys.argv[1]), Path(sys.argv[2])
docs = root / "docs"
scenario_schema = json.loads((docs / "schemas/scenario.schema.json").read_text())
experiment_schema = json.loads((docs / "schemas/experiment.schema.json").read_text())

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    for preset in ["spec-A", "spec-C", "prm-150-6-8"]:
        out = tmp / f"{preset}.json"
        subprocess.run([cli, "scenario", "--preset", preset, "--out", out], check=True)
        jsonschema.validate(json.loads(out.read_text()), scenario_schema)

    for config in sorted((root / "configs").glob("*.json")):
        jsonschema.validate(json.loads(config.read_text()), experiment_schema)

    config = tmp / "tiny.json"
    config.write_text(json.dumps({
        "master_seed": 3, "trials": 2, "budget": 4, "sample_count": 200,
        "scenarios": ["spec-A"],
        "users": [{"model": "merr_constant", "accuracy": 0.9}],
        "selectors": ["merr", "random"], "assumed_accuracy": ["p"]}))
    jsonschema.validate(json.loads(config.read_text()), experiment_schema)
    csv = tmp / "tiny.csv"
    subprocess.run([cli, "run", "--config", config, "--out", csv], check=True)
    lines = csv.read_text().splitlines()
    assert lines[0].startswith("# pathpref batch schema_version=1 created="), lines[0]
    documented = re.findall(r"^\| ([a-z_.0-9]+) \|", (docs / "batch_csv.md").read_text(), re.M)
    documented = [c for c in documented if c != "column"]
    assert lines[1].split(",") == documented, (lines[1], documented)
    assert len(lines) == 2 + 2 * 2 * 5

    plot = tmp / "plot.png"
    subprocess.run([sys.executable, docs / "plot_batch.py", csv, "--out", plot], check=True)
    assert plot.stat().st_size > 0

print("docs consistent")
