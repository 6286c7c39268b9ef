"""One-automaton-per-file JSON documents.

Numbers are stored as decimal strings (``repr`` of the float, the shortest
string that round-trips), complex numbers as two-element ``[re, im]``
arrays of such strings, matrices as row-major arrays of arrays. Key order
is fixed, so serializing a parsed document reproduces it byte for byte.
The schema is strict: unknown keys anywhere are rejected, which catches
misspelled fields in hand-written automata early.
"""

from __future__ import annotations

import json
import math
from typing import Any, Callable, Mapping

import numpy as np

from .errors import DocumentError, ModelError
from .linalg import ProjectorFamily, projector_family
from .models import (
    DFA,
    GPFA,
    KWQFA,
    NQFA,
    PFA,
    QFC,
    Alphabet,
    build_gpfa,
    build_kwqfa,
    build_nqfa,
    build_pfa,
    build_qfc,
)

FORMAT_VERSION = "1"

METADATA_KEYS = ("name", "description", "seed")


# ---------------------------------------------------------------------------
# Writing


def _fmt(x: float) -> str:
    return repr(float(x))


def _fmt_complex(z: complex) -> list[str]:
    return [_fmt(z.real), _fmt(z.imag)]


def _fmt_cmatrix(m: np.ndarray) -> list[list[list[str]]]:
    return [[_fmt_complex(complex(z)) for z in row] for row in m]


def _fmt_rvector(v: np.ndarray) -> list[str]:
    return [_fmt(float(x)) for x in v]


def _fmt_rmatrix(m: np.ndarray) -> list[list[str]]:
    return [[_fmt(float(x)) for x in row] for row in m]


def _alphabet_node(a: Alphabet) -> dict[str, Any]:
    return {
        "symbols": list(a.symbols),
        "left_marker": a.left_marker,
        "right_marker": a.right_marker,
    }


def _family_node(f: ProjectorFamily) -> dict[str, Any]:
    node: dict[str, Any] = {"projectors": [_fmt_cmatrix(p) for p in f.projectors]}
    if f.labels is not None:
        node["labels"] = list(f.labels)
    return node


def _in_state_order(states: tuple[str, ...], subset: frozenset[str]) -> list[str]:
    return [q for q in states if q in subset]


def _nqfa_payload(m: NQFA, with_measurements: bool) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "alphabet": _alphabet_node(m.alphabet),
        "states": list(m.states),
        "initial": m.initial,
        "accepting": _in_state_order(m.states, m.accepting),
        "rejecting": _in_state_order(m.states, m.rejecting),
        "unitaries": {
            sym: _fmt_cmatrix(m.unitaries[sym]) for sym in m.alphabet.tape_symbols
        },
    }
    if with_measurements:
        payload["measurements"] = {
            sym: _family_node(m.measurements[sym]) for sym in m.alphabet.tape_symbols
        }
    return payload


def _qfc_payload(m: QFC) -> dict[str, Any]:
    d = m.control
    return {
        "alphabet": _alphabet_node(m.alphabet),
        "states": list(m.states),
        "initial": m.initial,
        "unitaries": {
            sym: _fmt_cmatrix(m.unitaries[sym]) for sym in m.alphabet.tape_symbols
        },
        "observable": _family_node(m.observable),
        "control": {
            "states": list(d.states),
            "alphabet": list(d.alphabet),
            "start": d.start,
            "accepting": _in_state_order(d.states, d.accepting),
            "transitions": {
                src: {sym: d.transitions[(src, sym)] for sym in d.alphabet}
                for src in d.states
            },
        },
    }


def _gpfa_payload(m: GPFA) -> dict[str, Any]:
    return {
        "alphabet": list(m.alphabet),
        "initial": _fmt_rvector(m.initial),
        "transitions": {sym: _fmt_rmatrix(m.transitions[sym]) for sym in m.alphabet},
        "final": _fmt_rvector(m.final),
    }


def serialize(model: object, metadata: Mapping[str, str] | None = None) -> str:
    """Serialize a model to its UTF-8 JSON document (trailing newline included)."""
    if isinstance(model, KWQFA):
        kind, payload = "kwqfa", _nqfa_payload(model, with_measurements=False)
    elif isinstance(model, NQFA):
        kind, payload = "nqfa", _nqfa_payload(model, with_measurements=True)
    elif isinstance(model, QFC):
        kind, payload = "qfc", _qfc_payload(model)
    elif isinstance(model, PFA):
        kind, payload = "pfa", _gpfa_payload(model)
    elif isinstance(model, GPFA):
        kind, payload = "gpfa", _gpfa_payload(model)
    else:
        raise TypeError(f"not a serializable model: {type(model).__name__}")
    doc: dict[str, Any] = {"format_version": FORMAT_VERSION, "kind": kind}
    if metadata:
        unknown = sorted(set(metadata) - set(METADATA_KEYS))
        if unknown:
            raise ValueError(f"unknown metadata keys: {unknown}")
        doc["metadata"] = {k: str(metadata[k]) for k in METADATA_KEYS if k in metadata}
    doc.update(payload)
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Reading


def _fail(path: str, message: str) -> DocumentError:
    return DocumentError(f"{path}: {message}")


def _string(node: Any, path: str) -> str:
    if not isinstance(node, str):
        raise _fail(path, f"expected a string, got {type(node).__name__}")
    return node


def _string_list(node: Any, path: str) -> list[str]:
    if not isinstance(node, list):
        raise _fail(path, f"expected an array, got {type(node).__name__}")
    return [_string(x, f"{path}[{i}]") for i, x in enumerate(node)]


def _object(node: Any, path: str, allowed: tuple[str, ...], required: tuple[str, ...]) -> dict:
    if not isinstance(node, dict):
        raise _fail(path, f"expected an object, got {type(node).__name__}")
    unknown = sorted(set(node) - set(allowed))
    if unknown:
        raise _fail(path, f"unknown keys: {unknown}")
    missing = sorted(set(required) - set(node))
    if missing:
        raise _fail(path, f"missing keys: {missing}")
    return node


def _real(node: Any, path: str) -> float:
    if not isinstance(node, str):
        raise _fail(path, f"expected a decimal string, got {type(node).__name__}")
    try:
        x = float(node)
    except ValueError:
        raise _fail(path, f"not a decimal number: {node!r}") from None
    if not math.isfinite(x):
        raise _fail(path, f"non-finite value: {node!r}")
    return x


def _complex_entry(node: Any, path: str) -> complex:
    if not isinstance(node, list) or len(node) != 2:
        raise _fail(path, "expected a [re, im] pair of decimal strings")
    return complex(_real(node[0], f"{path}[0]"), _real(node[1], f"{path}[1]"))


def _complex_matrix(node: Any, path: str) -> np.ndarray:
    if not isinstance(node, list) or not node:
        raise _fail(path, "expected a non-empty array of rows")
    rows = []
    width = None
    for i, row in enumerate(node):
        if not isinstance(row, list):
            raise _fail(f"{path}[{i}]", "expected an array")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise _fail(f"{path}[{i}]", f"row length {len(row)} != {width}")
        rows.append(
            [_complex_entry(z, f"{path}[{i}][{j}]") for j, z in enumerate(row)]
        )
    return np.array(rows, dtype=np.complex128)


def _real_vector(node: Any, path: str) -> list[float]:
    if not isinstance(node, list):
        raise _fail(path, f"expected an array, got {type(node).__name__}")
    return [_real(x, f"{path}[{i}]") for i, x in enumerate(node)]


def _real_matrix(node: Any, path: str) -> list[list[float]]:
    if not isinstance(node, list) or not node:
        raise _fail(path, "expected a non-empty array of rows")
    rows = []
    width = None
    for i, row in enumerate(node):
        if not isinstance(row, list):
            raise _fail(f"{path}[{i}]", "expected an array")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise _fail(f"{path}[{i}]", f"row length {len(row)} != {width}")
        rows.append(_real_vector(row, f"{path}[{i}]"))
    return rows


def _parse_alphabet(node: Any) -> Alphabet:
    obj = _object(
        node, "alphabet", ("symbols", "left_marker", "right_marker"), ("symbols",)
    )
    symbols = tuple(_string_list(obj["symbols"], "alphabet.symbols"))
    left = _string(obj.get("left_marker", Alphabet.left_marker), "alphabet.left_marker")
    right = _string(obj.get("right_marker", Alphabet.right_marker), "alphabet.right_marker")
    try:
        return Alphabet(symbols, left, right)
    except ValueError as exc:
        raise _fail("alphabet", str(exc)) from None


def _parse_unitaries(node: Any) -> dict[str, np.ndarray]:
    if not isinstance(node, dict):
        raise _fail("unitaries", "expected an object keyed by tape symbol")
    return {sym: _complex_matrix(m, f"unitaries.{sym}") for sym, m in node.items()}


def _parse_family(node: Any, path: str) -> ProjectorFamily:
    obj = _object(node, path, ("projectors", "labels"), ("projectors",))
    if not isinstance(obj["projectors"], list) or not obj["projectors"]:
        raise _fail(f"{path}.projectors", "expected a non-empty array of matrices")
    mats = [
        _complex_matrix(p, f"{path}.projectors[{i}]")
        for i, p in enumerate(obj["projectors"])
    ]
    labels = None
    if "labels" in obj:
        labels = tuple(_string_list(obj["labels"], f"{path}.labels"))
        if len(labels) != len(mats):
            raise _fail(f"{path}.labels", f"{len(labels)} labels for {len(mats)} projectors")
    try:
        return projector_family(mats, labels=labels)
    except ValueError as exc:
        raise _fail(path, str(exc)) from None


def _run_builder(build: Callable[[], Any]) -> Any:
    try:
        return build()
    except ModelError as exc:
        lines = "\n".join(f"  {v}" for v in exc.violations)
        raise DocumentError(f"validation failed:\n{lines}") from None


def _parse_nqfa(doc: dict) -> NQFA:
    alphabet = _parse_alphabet(doc["alphabet"])
    states = _string_list(doc["states"], "states")
    initial = _string(doc["initial"], "initial")
    accepting = _string_list(doc["accepting"], "accepting")
    rejecting = _string_list(doc["rejecting"], "rejecting")
    unitaries = _parse_unitaries(doc["unitaries"])
    if not isinstance(doc["measurements"], dict):
        raise _fail("measurements", "expected an object keyed by tape symbol")
    measurements = {
        sym: _parse_family(node, f"measurements.{sym}")
        for sym, node in doc["measurements"].items()
    }
    return _run_builder(
        lambda: build_nqfa(
            states, initial, accepting, rejecting, alphabet, unitaries, measurements
        )
    )


def _parse_kwqfa(doc: dict) -> KWQFA:
    alphabet = _parse_alphabet(doc["alphabet"])
    states = _string_list(doc["states"], "states")
    initial = _string(doc["initial"], "initial")
    accepting = _string_list(doc["accepting"], "accepting")
    rejecting = _string_list(doc["rejecting"], "rejecting")
    unitaries = _parse_unitaries(doc["unitaries"])
    return _run_builder(
        lambda: build_kwqfa(states, initial, accepting, rejecting, alphabet, unitaries)
    )


def _parse_control(node: Any) -> DFA:
    obj = _object(
        node,
        "control",
        ("states", "alphabet", "start", "accepting", "transitions"),
        ("states", "alphabet", "start", "accepting", "transitions"),
    )
    states = tuple(_string_list(obj["states"], "control.states"))
    alphabet = tuple(_string_list(obj["alphabet"], "control.alphabet"))
    start = _string(obj["start"], "control.start")
    accepting = frozenset(_string_list(obj["accepting"], "control.accepting"))
    if not isinstance(obj["transitions"], dict):
        raise _fail("control.transitions", "expected an object keyed by state")
    transitions: dict[tuple[str, str], str] = {}
    for src, row in obj["transitions"].items():
        if not isinstance(row, dict):
            raise _fail(f"control.transitions.{src}", "expected an object keyed by symbol")
        for sym, dst in row.items():
            transitions[(src, sym)] = _string(dst, f"control.transitions.{src}.{sym}")
    return DFA(states, alphabet, start, accepting, transitions)


def _parse_qfc(doc: dict) -> QFC:
    alphabet = _parse_alphabet(doc["alphabet"])
    states = _string_list(doc["states"], "states")
    initial = _string(doc["initial"], "initial")
    unitaries = _parse_unitaries(doc["unitaries"])
    observable = _parse_family(doc["observable"], "observable")
    control = _parse_control(doc["control"])
    return _run_builder(
        lambda: build_qfc(states, initial, alphabet, unitaries, observable, control)
    )


def _parse_gpfa(doc: dict, stochastic: bool) -> GPFA:
    symbols = _string_list(doc["alphabet"], "alphabet")
    initial = _real_vector(doc["initial"], "initial")
    final = _real_vector(doc["final"], "final")
    if not isinstance(doc["transitions"], dict):
        raise _fail("transitions", "expected an object keyed by symbol")
    transitions = {
        sym: _real_matrix(m, f"transitions.{sym}")
        for sym, m in doc["transitions"].items()
    }
    if stochastic:
        return _run_builder(lambda: build_pfa(symbols, initial, transitions, final))
    return _run_builder(lambda: build_gpfa(symbols, initial, transitions, final))


_PAYLOAD_KEYS = {
    "nqfa": (
        "alphabet",
        "states",
        "initial",
        "accepting",
        "rejecting",
        "unitaries",
        "measurements",
    ),
    "kwqfa": ("alphabet", "states", "initial", "accepting", "rejecting", "unitaries"),
    "qfc": ("alphabet", "states", "initial", "unitaries", "observable", "control"),
    "gpfa": ("alphabet", "initial", "transitions", "final"),
    "pfa": ("alphabet", "initial", "transitions", "final"),
}


def parse(text: str) -> NQFA | KWQFA | QFC | GPFA | PFA:
    """Parse and validate a document; returns the model it describes.

    Raises DocumentError with the document path of the offending field on
    any structural or validation problem, and with the byte offset on a
    syntax error.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise DocumentError(f"syntax error at byte offset {offset}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object")
    version = _string(doc.get("format_version"), "format_version")
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {version!r}, expected '1'")
    kind = _string(doc.get("kind"), "kind")
    if kind not in _PAYLOAD_KEYS:
        raise DocumentError(
            f"unknown kind {kind!r}, expected one of {sorted(_PAYLOAD_KEYS)}"
        )
    payload_keys = _PAYLOAD_KEYS[kind]
    allowed = ("format_version", "kind", "metadata") + payload_keys
    unknown = sorted(set(doc) - set(allowed))
    if unknown:
        raise DocumentError(f"unknown top-level keys: {unknown}")
    missing = sorted(set(payload_keys) - set(doc))
    if missing:
        raise DocumentError(f"missing top-level keys: {missing}")
    if "metadata" in doc:
        _object(doc["metadata"], "metadata", METADATA_KEYS, ())
        for key, value in doc["metadata"].items():
            _string(value, f"metadata.{key}")
    if kind == "nqfa":
        return _parse_nqfa(doc)
    if kind == "kwqfa":
        return _parse_kwqfa(doc)
    if kind == "qfc":
        return _parse_qfc(doc)
    return _parse_gpfa(doc, stochastic=kind == "pfa")
