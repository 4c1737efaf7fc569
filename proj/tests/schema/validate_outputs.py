"""Validates every recipe against the config schema, runs a subset through the
CLI and validates report.json and each experiment summary."""
import argparse
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

QUICK = ["fig1b", "fig2", "fig3b", "fig4b", "fig5d", "fig6a", "fig6b", "fig9d", "circuit_l6"]


def load(path):
    with open(path) as f:
        return json.load(f)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--skinlat", required=True)
    ap.add_argument("--recipes", required=True, type=pathlib.Path)
    ap.add_argument("--schemas", required=True, type=pathlib.Path)
    args = ap.parse_args()

    cls = jsonschema.Draft202012Validator
    config = cls(load(args.schemas / "config.schema.json"))
    report = cls(load(args.schemas / "report.schema.json"))
    output = cls(load(args.schemas / "output.schema.json"))
    failures = 0

    recipes = sorted(args.recipes.glob("*.json"))
    for r in recipes:
        for err in config.iter_errors(load(r)):
            print(f"FAIL config {r.name}: {err.message}")
            failures += 1
    print(f"{len(recipes)} recipes checked against config.schema.json")

    with tempfile.TemporaryDirectory() as tmp:
        for name in QUICK:
            out = pathlib.Path(tmp) / name
            proc = subprocess.run([args.skinlat, "run", str(args.recipes / f"{name}.json"), "--out", str(out)],
                                  capture_output=True, text=True)
            if proc.returncode != 0:
                print(f"FAIL run {name}: exit {proc.returncode}: {proc.stderr.strip()}")
                failures += 1
                continue
            rep = load(out / "report.json")
            for err in report.iter_errors(rep):
                print(f"FAIL report {name}: {err.message}")
                failures += 1
            summary = load(out / f"{rep['experiment']}.json")
            for err in output.iter_errors(summary):
                print(f"FAIL output {name}: {err.message}")
                failures += 1
            for art in rep["artifacts"]:
                if art["file"].endswith(".csv"):
                    header = (out / art["file"]).read_text().split("\n", 1)[0]
                    if not header or header[0].isdigit() or header[0] == "-":
                        print(f"FAIL csv {name}/{art['file']}: missing header row")
                        failures += 1
            print(f"ok {name}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
