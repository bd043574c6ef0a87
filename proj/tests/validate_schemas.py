import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

pmkit, schemas, golden = (pathlib.Path(a) for a in sys.argv[1:4])


def schema(name):
    s = json.loads((schemas / name).read_text())
    jsonschema.Draft202012Validator.check_schema(s)
    return jsonschema.Draft202012Validator(s)


checks = {
    "budget.schema.json": ["budget_time.json", "budget_energy.json", "budget_idle.json"],
    "layout_report.schema.json": ["layout_report.json"],
    "scenario.schema.json": ["scenario_burst.json", "scenario_single.json"],
    "simulate.schema.json": ["simulate_burst.json", "simulate_single.json"],
}

failures = 0
for name, files in checks.items():
    v = schema(name)
    for f in files:
        errors = list(v.iter_errors(json.loads((golden / f).read_text())))
        for e in errors:
            print(f"{f}: {e.message}")
        failures += len(errors)

# An infeasible budget and an unoptimized layout go through the CLI directly.
with tempfile.TemporaryDirectory() as tmp:
    model = golden / "camera.pmk"
    out = subprocess.run([pmkit, "budget", model, "--mode", "IDLE", "--net", "HS"],
                         capture_output=True, text=True)
    if out.returncode != 1:
        print("infeasible budget: expected exit 1, got", out.returncode)
        failures += 1
    for e in schema("budget.schema.json").iter_errors(json.loads(out.stdout)):
        print("infeasible budget:", e.message)
        failures += 1
    out = subprocess.run([pmkit, "layout", model, "--net", "HS", "--out", pathlib.Path(tmp) / "hs.dot"],
                         capture_output=True, text=True, check=True)
    for e in schema("layout_report.schema.json").iter_errors(json.loads(out.stdout)):
        print("plain layout:", e.message)
        failures += 1

print("schema failures:", failures)
sys.exit(1 if failures else 0)
