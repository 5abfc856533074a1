"""JSON Schemas for spec files, certificates and the CLI's ``--json`` output."""
import json
from functools import lru_cache
from pathlib import Path

SCHEMA_DIR = Path(__file__).parent


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    return json.loads((SCHEMA_DIR / f"{name}.schema.json").read_text())
