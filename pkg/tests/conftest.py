import json
from pathlib import Path
import sys

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

GOLDEN = Path(__file__).resolve().parent / "golden" / "worked_examples.json"


@pytest.fixture(scope="session")
def golden():
    with open(GOLDEN, encoding="utf-8") as f:
        return json.load(f)
