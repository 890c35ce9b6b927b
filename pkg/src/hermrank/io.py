"""JSON instance and report files.

Exact entries are strings such as ``"3/4"``, ``"-1/2+3/4i"`` or ``"2i"``;
float entries are JSON numbers, or ``[re, im]`` pairs when complex.  A
file must not mix the two.
"""

from __future__ import annotations

import json

from .errors import BackendMismatch, InputError
from .extremal import (
    SUMMARY_FIELDS,
    Decision,
    ExtremalSummary,
    FreeInstance,
    LinearInstance,
    PairInstance,
    PartitionedInstance,
)
from .numeric import EXACT, FLOAT, Matrix, Scalar

SLOTS = {
    "pair": ("A1", "B1", "A2", "B2", "A3", "B3"),
    "linear": ("A1", "B1", "A4", "B4"),
    "linear_psd": ("A1", "B1", "A4", "B4"),
    "partitioned": ("A1", "A2", "B1", "B2"),
    "free": ("A", "B"),
}


def _entry_to_json(s, backend):
    if backend == EXACT:
        return str(s)
    if s.im:
        return [float(s.re), float(s.im)]
    return float(s.re)


def matrix_to_json(M):
    return {
        "rows": M.rows,
        "cols": M.cols,
        "entries": [[_entry_to_json(M[i, j], M.backend) for j in range(M.cols)]
                    for i in range(M.rows)],
    }


def _entry_backend(x, where):
    if isinstance(x, bool):
        raise InputError(f"{where}: booleans are not matrix entries")
    if isinstance(x, str):
        return EXACT
    if isinstance(x, (int, float)):
        return FLOAT
    if isinstance(x, list) and len(x) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        return FLOAT
    raise InputError(f"{where}: entry must be a string, a number or a [re, im] pair")


def _entry_scalar(x, backend, where):
    try:
        if backend == EXACT:
            return Scalar.parse(x)
        if isinstance(x, list):
            return Scalar(float(x[0]), float(x[1]), FLOAT)
        return Scalar(float(x), 0.0, FLOAT)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from exc


def matrix_from_json(doc, where="matrix"):
    """Matrix from ``{"rows", "cols", "entries"}``; returns ``(matrix, backend or None)``."""
    if not isinstance(doc, dict):
        raise InputError(f"{where}: expected an object with rows, cols, entries")
    for key in ("rows", "cols", "entries"):
        if key not in doc:
            raise InputError(f"{where}: missing field {key!r}")
    m, n, entries = doc["rows"], doc["cols"], doc["entries"]
    if not (isinstance(m, int) and isinstance(n, int)) or m < 0 or n < 0:
        raise InputError(f"{where}: rows and cols must be non-negative integers")
    if not isinstance(entries, list) or len(entries) != m:
        raise InputError(f"{where}.entries: expected {m} rows")
    backends = set()
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != n:
            raise InputError(f"{where}.entries[{i}]: expected {n} entries")
        for j, x in enumerate(row):
            backends.add(_entry_backend(x, f"{where}.entries[{i}][{j}]"))
    if len(backends) > 1:
        raise InputError(f"{where}: entries mix exact strings and float numbers")
    backend = backends.pop() if backends else None
    rows = [[_entry_scalar(x, backend, f"{where}.entries[{i}][{j}]")
             for j, x in enumerate(row)] for i, row in enumerate(entries)]
    try:
        M = Matrix.from_rows(rows, backend or EXACT, cols=n)
    except BackendMismatch as exc:
        raise InputError(f"{where}: {exc}") from exc
    return M, backend


def instance_to_json(inst, witness=None):
    kind = inst.kind
    doc = {"kind": kind,
           "matrices": {name: matrix_to_json(getattr(inst, name)) for name in SLOTS[kind]}}
    if witness is not None:
        doc["witness"] = matrix_to_json(witness)
    return doc


def instance_from_json(doc, backend=None):
    """Instance from a parsed document; ``backend`` converts after the checks."""
    if not isinstance(doc, dict):
        raise InputError("top level: expected an object")
    kind = doc.get("kind")
    if kind not in SLOTS:
        raise InputError(f"kind: expected one of {sorted(SLOTS)}, got {kind!r}")
    mats = doc.get("matrices")
    if not isinstance(mats, dict):
        raise InputError("matrices: expected an object")
    missing = [s for s in SLOTS[kind] if s not in mats]
    extra = [s for s in mats if s not in SLOTS[kind]]
    if missing:
        raise InputError(f"matrices: missing {missing} for kind {kind!r}")
    if extra:
        raise InputError(f"matrices: unexpected {extra} for kind {kind!r}")
    parsed, seen = {}, set()
    for name in SLOTS[kind]:
        M, b = matrix_from_json(mats[name], f"matrices.{name}")
        parsed[name] = M
        if b is not None:
            seen.add(b)
    if len(seen) > 1:
        raise InputError("matrices: file mixes exact and float matrices")
    file_backend = seen.pop() if seen else EXACT
    target = backend or file_backend
    parsed = {k: v.to_backend(target) if v.backend != target else v
              for k, v in parsed.items()}
    try:
        if kind == "pair":
            return PairInstance(**parsed)
        if kind in ("linear", "linear_psd"):
            return LinearInstance(**parsed, kind=kind)
        if kind == "partitioned":
            return PartitionedInstance(**parsed)
        return FreeInstance(**parsed)
    except TypeError as exc:
        raise InputError(str(exc)) from exc


def loads_instance(text, backend=None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return instance_from_json(doc, backend)


def load_instance(path, backend=None):
    with open(path, encoding="utf-8") as fh:
        return loads_instance(fh.read(), backend)


def save_instance(path, inst, witness=None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_json(inst, witness), fh, indent=1)
        fh.write("\n")


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

def decision_to_json(d):
    out = {"id": d.id, "verdict": d.verdict, "condition": d.condition}
    if d.explicit is not None:
        out["explicit"] = d.explicit
    return out


def decision_from_json(doc):
    return Decision(doc["id"], bool(doc["verdict"]), doc["condition"], doc.get("explicit"))


def report_to_json(kind, objectives, premises, backend, pol):
    """Report document; the first objective is mirrored at top level."""
    objs = [{"name": name, "summary": s.as_dict(),
             "decisions": [decision_to_json(d) for _, d in rep.items()] if rep else []}
            for name, s, rep in objectives]
    doc = {"kind": kind, "objectives": objs, "premises": list(premises),
           "backend": backend,
           "tolerances": {"rank_tol": pol.rank_tol, "inertia_tol": pol.inertia_tol}}
    if objs:
        doc["summary"] = objs[0]["summary"]
        doc["decisions"] = objs[0]["decisions"]
    return doc


def report_from_json(doc):
    """``[(name, summary, [Decision])]`` from a report document."""
    try:
        objs = doc.get("objectives")
        if objs is None:
            objs = [{"name": "objective", "summary": doc["summary"],
                     "decisions": doc.get("decisions", [])}]
        return [(o["name"], ExtremalSummary.from_dict(o["summary"]),
                 [decision_from_json(d) for d in o.get("decisions", [])]) for o in objs]
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"report: {exc}") from exc


def summary_text(s):
    return " ".join(f"{f}={getattr(s, f)}" for f in SUMMARY_FIELDS)
