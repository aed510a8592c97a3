#!/usr/bin/env python3
"""Validate problems.json against schema - CI/CD integration"""
import json
import sys
from pathlib import Path

try:
    import jsonschema
except ImportError:
    print("ERROR: jsonschema package not installed")
    print("Run: pip install jsonschema")
    sys.exit(1)

BASE_DIR = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(BASE_DIR / "lib"))


def validate_problems_config(config_path=None, schema_path=None):
    """Validate problems.json against schema, then build every problem"""
    config_path = Path(config_path or BASE_DIR / "etc" / "problems.json")
    schema_path = Path(schema_path or BASE_DIR / "etc" / "problems.schema.json")

    # Check files exist
    for path in (config_path, schema_path):
        if not path.exists():
            print(f"ERROR: File not found: {path}")
            return False

    try:
        with open(config_path) as f:
            config = json.load(f)
        with open(schema_path) as f:
            schema = json.load(f)
    except json.JSONDecodeError as e:
        print(f"ERROR: Invalid JSON: {e}")
        return False

    try:
        jsonschema.validate(instance=config, schema=schema)
        print(f"✓ {config_path.name} is valid")
    except jsonschema.ValidationError as e:
        print("ERROR: Schema validation failed:")
        print(f"  Path: {' -> '.join(str(p) for p in e.path)}")
        print(f"  Message: {e.message}")
        return False
    except jsonschema.SchemaError as e:
        print(f"ERROR: Invalid schema: {e}")
        return False

    # Semantic validation: states, geometry and exact references
    from globals import SolverError
    from problems import ProblemRegistry, ReferenceKind, riemann_solution

    errors = []
    try:
        registry = ProblemRegistry(config_path, schema_path)
    except SolverError as e:
        print(f"ERROR: {e}")
        return False

    for name in registry.names():
        spec = registry.get(name)
        if spec.reference == ReferenceKind.EXACT_RIEMANN:
            try:
                riemann_solution(spec)
            except SolverError as e:
                errors.append(f"{name}: exact reference fails: {e}")

    if errors:
        print("ERROR: Semantic validation failed:")
        for error in errors:
            print(f"  - {error}")
        return False

    print(f"✓ Semantic validation passed ({len(registry.names())} problems)")
    return True


if __name__ == "__main__":
    success = validate_problems_config()
    sys.exit(0 if success else 1)
