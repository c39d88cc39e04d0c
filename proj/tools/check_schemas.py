"""Validate problem files against schemas/problem.schema.json.

Usage: check_schemas.py SCHEMA FILE... [--invalid FILE...]
Files after --invalid must be rejected.
"""
import json
import sys

import jsonschema


def main(argv):
    schema = json.load(open(argv[0]))
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    expect_valid = True
    bad = 0
    for path in argv[1:]:
        if path == "--invalid":
            expect_valid = False
            continue
        errors = list(validator.iter_errors(json.load(open(path))))
        if expect_valid and errors:
            bad += 1
            print(f"{path}: {errors[0].json_path}: {errors[0].message}")
        elif not expect_valid and not errors:
            bad += 1
            print(f"{path}: accepted but should be rejected")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
