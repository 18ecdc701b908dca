"""JSON state files.

A density matrix is ``{"dim": d, "re": [[...]], "im": [[...]]}`` and a pure
state is ``{"dim": d, "re": [...], "im": [...]}``; an optional ``"id"`` key
names the state. A file holds one such object, a list of them, or
``{"states": [...]}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ImkitError
from .states import DensityMatrix, PureState, new_density


class StateFormatError(ImkitError):
    """The input is not in the state file format (as opposed to an invalid state)."""


def state_to_obj(state, state_id: str | None = None) -> dict:
    a = state.amp if isinstance(state, PureState) else np.asarray(state.mat if isinstance(state, DensityMatrix) else state)
    obj = {"dim": int(a.shape[0]), "re": a.real.tolist(), "im": a.imag.tolist()}
    if state_id is not None:
        obj["id"] = state_id
    return obj


def state_from_obj(obj) -> DensityMatrix | PureState:
    if not isinstance(obj, dict) or not {"dim", "re", "im"} <= obj.keys():
        raise StateFormatError("state object needs keys 'dim', 're' and 'im'")
    try:
        d = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"state entries are not numeric: {exc}") from exc
    if re.shape != im.shape or re.shape not in ((d,), (d, d)):
        raise StateFormatError(f"'re'/'im' shapes {re.shape}/{im.shape} do not match dim={d}")
    a = re + 1j * im
    return PureState(a) if a.ndim == 1 else new_density(a)


def loads_states(text: str) -> list[tuple[str, DensityMatrix | PureState]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"malformed JSON: {exc}") from exc
    if isinstance(data, dict) and "states" in data:
        data = data["states"]
    items = data if isinstance(data, list) else [data]
    out = []
    for i, obj in enumerate(items):
        sid = str(obj.get("id", i)) if isinstance(obj, dict) else str(i)
        out.append((sid, state_from_obj(obj)))
    return out


def load_states(path) -> list[tuple[str, DensityMatrix | PureState]]:
    return loads_states(Path(path).read_text())


def dumps_states(states) -> str:
    """Serialize ``(id, state)`` pairs."""
    return json.dumps({"states": [state_to_obj(s, sid) for sid, s in states]})
