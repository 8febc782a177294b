"""State JSON input and report JSON/CSV output."""

import dataclasses
import json
import math

import numpy as np

from .errors import ContractViolation
from .states import make_state


def load_state_json(text):
    """Parse ``{"d1": int, "d2": int, "amps": [[re, im], ...]}``."""
    obj = json.loads(text)
    try:
        d1, d2 = obj["d1"], obj["d2"]
        pairs = obj["amps"]
    except (KeyError, TypeError) as exc:
        raise ContractViolation(f"state JSON missing field: {exc}") from exc
    if not (isinstance(d1, int) and isinstance(d2, int)):
        raise ContractViolation("d1 and d2 must be integers")
    try:
        amps = [complex(float(re), float(im)) for re, im in pairs]
    except (TypeError, ValueError) as exc:
        raise ContractViolation("amps must be a list of [re, im] pairs") from exc
    return make_state(d1, d2, amps)


def dump_state_json(psi):
    amps = [[float(a.real), float(a.imag)] for a in psi.amps]
    return json.dumps({"d1": psi.d1, "d2": psi.d2, "amps": amps})


def to_jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps(obj):
    return json.dumps(to_jsonable(obj), indent=2)


def fmt_float(x):
    """Shortest round-trip decimal (at most 17 significant digits); '' for missing."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} in CSV output")
    return repr(x)
