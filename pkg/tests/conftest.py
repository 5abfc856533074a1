import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from holopos.recurrence import load_spec, normalize  # noqa: E402
from holopos.witness import build_witness  # noqa: E402
from holopos.prover import prove  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "src" / "holopos" / "data"

# name -> (p, q, r, u, verdict start)
REFERENCE = {
    "franel": ("30", "33", 27099, 27099, 0),
    "grz4": ("64", "226", 1148, 1148, 2),
    "a105641": ("3", "7/2", 2645, 2645, 3),
}
SMOKE = {
    "doubling": ("1", "3", 1, 1, 0),
    "fibonacci": ("3/2", "7/4", 1, 5, 1),
}
ALL = {**REFERENCE, **SMOKE}


def spec_of(name):
    return load_spec(DATA / f"{name}.json")


_proofs = {}


def proof_of(name):
    """``(spec, nr, witness, ProofResult)`` with the reference witness, computed once per session."""
    if name not in _proofs:
        spec = spec_of(name)
        nr = normalize(spec)
        p, q = ALL[name][:2]
        w = build_witness(nr, p, q)
        _proofs[name] = (spec, nr, w, prove(nr, w))
    return _proofs[name]


@pytest.fixture(params=sorted(ALL))
def fixture_name(request):
    return request.param


@pytest.fixture(params=sorted(REFERENCE))
def reference_name(request):
    return request.param
