"""Checks schema/scenario.schema.json against the trees the CLI actually uses."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

cli, schema_path, bad_path = sys.argv[1:4]
schema = json.loads(Path(schema_path).read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)


def defaults(node):
    if node.get("type") == "object" and "properties" in node:
        return {k: defaults(v) for k, v in node["properties"].items() if k != "dir"}
    return node.get("default")


failures = []
with tempfile.TemporaryDirectory() as tmp:
    for preset in ("case1", "case2"):
        out = Path(tmp) / preset
        subprocess.run([cli, "run", "--preset", preset, "--ticks", "1", "--out", str(out)],
                       check=True, capture_output=True)
        tree = json.loads((out / "summary.json").read_text())["config"]
        tree["ticks"] = 400
        for err in validator.iter_errors(tree):
            failures.append(f"{preset}: {err.json_path}: {err.message}")
        if preset == "case1" and tree != defaults(schema):
            failures.append("case1 tree differs from schema defaults")

if validator.is_valid(json.loads(Path(bad_path).read_text())):
    failures.append(f"{bad_path} should be rejected")

for f in failures:
    print(f)
print("schema ok" if not failures else f"{len(failures)} schema failures")
sys.exit(1 if failures else 0)
