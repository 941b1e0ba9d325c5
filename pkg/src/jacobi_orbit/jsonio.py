"""JSON encoding of complex scalars, matrices and tensors as [re, im] pairs."""

from __future__ import annotations

import json
import math

import numpy as np


def encode(value):
    """Recursively convert complex numbers and arrays to nested [re, im] lists."""
    if isinstance(value, np.ndarray):
        return [encode(x) for x in value]
    if isinstance(value, (list, tuple)):
        return [encode(x) for x in value]
    if isinstance(value, (complex, np.complexfloating)):
        return [_real(value.real), _real(value.imag)]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _real(value)
    if isinstance(value, dict):
        return {k: encode(v) for k, v in value.items()}
    return value


def _real(x) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("non-finite value cannot be encoded")
    # adding 0.0 folds -0.0 into 0.0; json then writes the shortest exact repr
    return x + 0.0


def decode_complex(x) -> complex:
    """Accept [re, im], a number, or a string such as "0.3+0.1j"."""
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError(f"complex value must be [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, str):
        return complex(x.replace(" ", ""))
    if isinstance(x, (int, float)):
        return complex(x)
    raise ValueError(f"cannot interpret {x!r} as a complex number")


def dumps(value, **kw) -> str:
    return json.dumps(encode(value), **kw)
