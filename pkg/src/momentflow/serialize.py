"""File interchange: algebra/representation JSON, trace and scan CSV.

All writers are atomic (temp file in the destination directory, then
rename) and deterministic: keys are sorted, floats use repr, so identical
inputs produce byte-identical outputs.

Bracket entries are 1-based on disk ([i, j, k, c] meaning [e_i, e_j] has
coefficient c on e_k, i < j) and 0-based in memory.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile

import numpy as np

from .errors import SchemaError
from .liealg import InnerProduct, LieAlgebra, Subspace
from .moment import Representation


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected a JSON object at top level")
    return data


def _as_matrix(obj, path: str, key: str, n: int | None = None) -> np.ndarray:
    try:
        M = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{path}: {key} is not a numeric array") from None
    if M.ndim == 1 and n is not None and M.size == n * n:
        M = M.reshape(n, n)  # accept a flat row-major listing too
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise SchemaError(f"{path}: {key} must be a square matrix")
    if n is not None and M.shape[0] != n:
        raise SchemaError(f"{path}: {key} must be {n} x {n}")
    return M


def load_algebra(path: str) -> tuple:
    """Read an algebra file; returns (LieAlgebra, InnerProduct).

    The inner product defaults to the identity when the file has none.
    """
    data = _load_json(path)
    if "dim" not in data:
        raise SchemaError(f"{path}: missing 'dim'")
    dim = data["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise SchemaError(f"{path}: 'dim' must be a positive integer")
    raw = data.get("brackets", [])
    if not isinstance(raw, list):
        raise SchemaError(f"{path}: 'brackets' must be a list")
    entries = []
    for row in raw:
        if not isinstance(row, (list, tuple)) or len(row) != 4:
            raise SchemaError(f"{path}: bracket entry {row!r} is not [i, j, k, c]")
        i, j, k, c = row
        if not all(isinstance(t, int) for t in (i, j, k)):
            raise SchemaError(f"{path}: bracket indices in {row!r} must be integers")
        if not (1 <= i <= dim and 1 <= j <= dim and 1 <= k <= dim):
            raise SchemaError(f"{path}: bracket entry {row!r} has an index out of range")
        if i >= j:
            raise SchemaError(f"{path}: bracket entry {row!r} must have i < j (1-based)")
        entries.append((i - 1, j - 1, k - 1, float(c)))
    labels = data.get("labels")
    alg = LieAlgebra.from_brackets(dim, entries, labels=labels)
    if "inner_product" in data:
        G = InnerProduct(_as_matrix(data["inner_product"], path, "inner_product", dim))
    else:
        G = InnerProduct.identity(dim)
    return alg, G


def load_subspace(path: str, parent: LieAlgebra) -> Subspace:
    data = _load_json(path)
    if "vectors" not in data:
        raise SchemaError(f"{path}: missing 'vectors'")
    try:
        V = np.asarray(data["vectors"], dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{path}: 'vectors' is not a numeric array") from None
    if V.ndim != 2:
        raise SchemaError(f"{path}: 'vectors' must be a list of coordinate rows")
    return Subspace(parent=parent, vectors=V)


def load_representation(path: str) -> Representation:
    data = _load_json(path)
    for key in ("domain_dim", "target_dim", "matrices"):
        if key not in data:
            raise SchemaError(f"{path}: missing '{key}'")
    k, n = data["domain_dim"], data["target_dim"]
    if not (isinstance(k, int) and isinstance(n, int) and k >= 1 and n >= 1):
        raise SchemaError(f"{path}: dimensions must be positive integers")
    try:
        M = np.asarray(data["matrices"], dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{path}: 'matrices' is not a numeric array") from None
    if M.shape != (k, n, n):
        raise SchemaError(
            f"{path}: 'matrices' must have shape ({k}, {n}, {n}), got {M.shape}"
        )
    Gd = (InnerProduct(_as_matrix(data["G_domain"], path, "G_domain", k))
          if "G_domain" in data else InnerProduct.identity(k))
    Gt = (InnerProduct(_as_matrix(data["G_target"], path, "G_target", n))
          if "G_target" in data else InnerProduct.identity(n))
    return Representation(matrices=M, G_domain=Gd, G_target=Gt)


def load_matrix(path: str) -> tuple:
    """Read a single matrix file; returns (matrix, InnerProduct)."""
    data = _load_json(path)
    if "matrix" not in data:
        raise SchemaError(f"{path}: missing 'matrix'")
    M = _as_matrix(data["matrix"], path, "matrix")
    n = M.shape[0]
    G = (InnerProduct(_as_matrix(data["inner_product"], path, "inner_product", n))
         if "inner_product" in data else InnerProduct.identity(n))
    return M, G


def load_central_indices(path: str, domain_dim: int) -> list:
    """Read 1-based central indices; returns them 0-based."""
    data = _load_json(path)
    if "central_indices" not in data:
        raise SchemaError(f"{path}: missing 'central_indices'")
    raw = data["central_indices"]
    if not isinstance(raw, list) or not all(isinstance(i, int) for i in raw):
        raise SchemaError(f"{path}: 'central_indices' must be a list of integers")
    if any(i < 1 or i > domain_dim for i in raw):
        raise SchemaError(f"{path}: central index out of range (1-based)")
    return [i - 1 for i in raw]


def _plain(obj):
    """Recursively convert numpy containers to JSON-friendly types."""
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):  # before int: bool subclasses int
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    return obj


def _atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-momentflow-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(data) -> str:
    return json.dumps(_plain(data), indent=2, sort_keys=True) + "\n"


def write_json(data, path: str) -> None:
    _atomic_write_text(path, dump_json(data))


def write_csv(header, rows, path: str) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    _atomic_write_text(path, buf.getvalue())


TRACE_HEADER = ("step", "t", "m_norm2")
SCAN_HEADER = ("lambda1", "lambda2", "lambda3", "ric1", "ric2", "ric3", "argmin")


def trace_rows(trace) -> list:
    return [(int(r[0]), repr(float(r[1])), repr(float(r[2]))) for r in trace.history]


def write_trace_csv(trace, path: str) -> None:
    write_csv(TRACE_HEADER, trace_rows(trace), path)


def write_scan_csv(report, path: str) -> None:
    rows = [
        (repr(float(r[0])), repr(float(r[1])), repr(float(r[2])), repr(float(r[3])),
         repr(float(r[4])), repr(float(r[5])), int(r[6]))
        for r in report.rows
    ]
    write_csv(SCAN_HEADER, rows, path)


def representation_to_dict(rep: Representation) -> dict:
    return {
        "domain_dim": rep.domain_dim,
        "target_dim": rep.target_dim,
        "matrices": _plain(rep.matrices),
        "G_domain": _plain(rep.G_domain.matrix),
        "G_target": _plain(rep.G_target.matrix),
    }
