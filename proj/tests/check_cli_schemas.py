#!/usr/bin/env python3
# Copyright 2026 The SNTH Authors
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

"""Runs the snth CLI and validates every JSON output against docs/schema."""

import csv
import io
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

SNTH = sys.argv[1]
SCHEMA_DIR = pathlib.Path(sys.argv[2])


def load_registry():
    resources = []
    for path in SCHEMA_DIR.glob("*.schema.json"):
        schema = json.loads(path.read_text())
        resources.append((schema["$id"], Resource.from_contents(schema)))
    return Registry().with_resources(resources)


REGISTRY = load_registry()


def validate(doc, name):
    schema = json.loads((SCHEMA_DIR / name).read_text())
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(doc)


def run(*args, expect=0):
    proc = subprocess.run([SNTH, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        raise AssertionError(f"{args}: exit {proc.returncode}, stderr: {proc.stderr}")
    return proc.stdout


def main():
    params = {
        "xi": [0.5, -1.0],
        "omega": [1.0, 2.0],
        "psi_bar": [[1.0, 0.4], [0.4, 1.0]],
        "eta": [-1.0, 2.0],
        "h": [0.05, 0.1],
    }
    validate(params, "params.schema.json")
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        data = tmp / "data.csv"
        text = run("simulate", "--params", json.dumps(params), "--n", "400", "--seed", "5")
        data.write_text(text)
        assert text == run("simulate", "--params", json.dumps(params), "--n", "400",
                           "--seed", "5"), "simulate is not reproducible"

        # CSV output re-ingests losslessly.
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["y1", "y2"] and len(rows) == 401
        for row in rows[1:]:
            for field in row:
                assert f"{float(field):.17g}" == field

        fit = json.loads(run("fit", "--input", str(data)))
        validate(fit, "fit_result.schema.json")
        assert fit["stage"] == "joint_mle" and fit["k"] == 9
        validate(fit["params"], "params.schema.json")

        fit1 = json.loads(run("fit", "--input", str(data), "--no-joint"))
        validate(fit1, "fit_result.schema.json")
        assert fit1["stage"] == "marginal_em"

        out = tmp / "fit.json"
        run("fit", "--input", str(data), "--json-out", str(out))
        validate(json.loads(out.read_text()), "fit_result.schema.json")

        for mode in ("eta", "h", "joint"):
            res = json.loads(run("test", "--input", str(data), "--mode", mode, "--no-joint"))
            validate(res, "test_result.schema.json")

        levels = tmp / "levels.json"
        grid = run("grid", "--params", json.dumps(params), "--range", "-6:6:61",
                   "--levels", "0.5,0.9", "--json-out", str(levels))
        assert grid.splitlines()[0] == "x,y,pdf"
        validate(json.loads(levels.read_text()), "grid_levels.schema.json")

        # Fitted parameters feed back into simulate.
        (tmp / "fitted.json").write_text(json.dumps(fit))
        run("simulate", "--params", str(tmp / "fitted.json"), "--n", "10")

        run("test", "--input", str(data), "--mode", "bogus", expect=1)
        run("simulate", "--params", "{not json", "--n", "5", expect=1)
    print("all CLI outputs validate")


if __name__ == "__main__":
    main()
