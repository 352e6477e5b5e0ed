"""Validate example configs against the shipped JSON schema."""
import json
import pathlib
import sys

import jsonschema


def main() -> int:
    schema = json.loads(pathlib.Path(sys.argv[1]).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    failures = 0
    for path in sorted(pathlib.Path(sys.argv[2]).glob("*.json")):
        try:
            jsonschema.validate(json.loads(path.read_text()), schema)
            print(f"ok   {path.name}")
        except jsonschema.ValidationError as e:
            failures += 1
            print(f"FAIL {path.name}: {e.message}")
    bad = {"mesh": {"sphere": {"radius": 1.0, "level": 2}}, "thickness": 0.01,
           "material": {"preset": "BaTiO3"}, "analysis": {"modal": {}}, "meshh": 1}
    if jsonschema.Draft202012Validator(schema).is_valid(bad):
        failures += 1
        print("FAIL unknown field accepted")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
