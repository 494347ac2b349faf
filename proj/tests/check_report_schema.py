#!/usr/bin/env python3
# Copyright 2026 The FusionBench Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Runs `fusionbench pipeline` on small configs and validates report.json."""

import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema

SCORE_MODEL = [
    {"matcher": "hamming", "modality": "iris", "gen_mean": 0.75,
     "gen_std": 0.1, "imp_mean": 0.5, "imp_std": 0.05},
    {"matcher": "jaccard", "modality": "iris", "gen_mean": 0.6,
     "gen_std": 0.12, "imp_mean": 0.35, "imp_std": 0.08},
    {"matcher": "dice", "modality": "fingerprint", "gen_mean": 0.55,
     "gen_std": 0.12, "imp_mean": 0.3, "imp_std": 0.1},
    {"matcher": "cosine", "modality": "fingerprint", "gen_mean": 0.7,
     "gen_std": 0.1, "imp_mean": 0.45, "imp_std": 0.1},
]

CASES = {
    "templates": ({"n_subjects": 10, "samples_per_subject": 3,
                   "iris_bits": 256, "seed": 3}, []),
    "scores": ({"n_subjects": 20, "samples_per_subject": 4, "seed": 5,
                "score_model": SCORE_MODEL}, ["--ds-masses", "4", "--ci", "99"]),
}


def main(argv):
    exe, schema_path, work = argv[1], pathlib.Path(argv[2]), pathlib.Path(argv[3])
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    shutil.rmtree(work, ignore_errors=True)
    work.mkdir(parents=True)
    failures = 0
    for name, (synth, flags) in CASES.items():
        case = work / name
        case.mkdir()
        (case / "synth.json").write_text(json.dumps(synth))
        (case / "pipeline.json").write_text(
            json.dumps({"synth": "synth.json", "out": "out"}))
        proc = subprocess.run(
            [exe, "pipeline", "--config", str(case / "pipeline.json"), *flags],
            capture_output=True, text=True, check=False)
        if proc.returncode != 0:
            print(f"FAIL {name}: exit {proc.returncode}\n{proc.stderr}")
            failures += 1
            continue
        report = json.loads((case / "out" / "report.json").read_text())
        errors = sorted(validator.iter_errors(report), key=lambda e: e.path)
        for e in errors:
            print(f"FAIL {name}: {list(e.path)}: {e.message}")
        failures += bool(errors)
        if not errors:
            print(f"ok   {name}: {len(report['reports'])} reports validate")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
