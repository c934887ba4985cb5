"""Instance files and JSON reports.

Instance formats (UTF-8, ``c`` lines are comments, blank lines ignored):

* ``p edge <n> <m>`` followed by ``m`` lines ``e <u> <v> <cost>``
* ``p matrix <n>`` followed by ``n`` rows of ``n`` decimals
* ``p euc2d <n>`` followed by ``n`` lines ``<x> <y>``

Matrix and coordinate instances become complete graphs with edges in
lexicographic ``(i, j)`` order.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable

from .errors import IngestionError
from .graph import Graph

FORMATS = ("edge", "matrix", "euc2d")


def _records(lines: Iterable[str]):
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("c"):
            continue
        yield lineno, text.split()


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise IngestionError(f"{what} must be an integer, got {tok!r}", lineno) from None


def _float(tok: str, lineno: int, what: str) -> float:
    try:
        val = float(tok)
    except ValueError:
        raise IngestionError(f"{what} must be a decimal, got {tok!r}", lineno) from None
    if not math.isfinite(val):
        raise IngestionError(f"{what} must be finite, got {tok!r}", lineno)
    return val


def parse_instance(text: str, fmt: str | None = None) -> Graph:
    """Parse an instance; ``fmt`` must agree with the problem line when given."""
    recs = _records(text.splitlines())
    try:
        lineno, head = next(recs)
    except StopIteration:
        raise IngestionError("empty instance: missing problem line") from None
    if head[0] != "p" or len(head) < 3:
        raise IngestionError(f"expected problem line 'p <format> ...', got {' '.join(head)!r}", lineno)
    kind = head[1]
    if kind not in FORMATS:
        raise IngestionError(f"unknown format {kind!r}", lineno)
    if fmt is not None and fmt != kind:
        raise IngestionError(f"file declares format {kind!r} but {fmt!r} was requested", lineno)
    n = _int(head[2], lineno, "vertex count")
    if n < 1:
        raise IngestionError("vertex count must be positive", lineno)
    if kind == "edge":
        if len(head) != 4:
            raise IngestionError("edge problem line is 'p edge <n> <m>'", lineno)
        return _parse_edges(recs, n, _int(head[3], lineno, "edge count"), lineno)
    if len(head) != 3:
        raise IngestionError(f"{kind} problem line is 'p {kind} <n>'", lineno)
    if kind == "matrix":
        return _parse_matrix(recs, n, lineno)
    return _parse_euc2d(recs, n, lineno)


def _parse_edges(recs, n: int, m: int, head_line: int) -> Graph:
    edges = []
    for lineno, tok in recs:
        if tok[0] != "e" or len(tok) != 4:
            raise IngestionError(f"expected 'e <u> <v> <cost>', got {' '.join(tok)!r}", lineno)
        u = _int(tok[1], lineno, "vertex id")
        v = _int(tok[2], lineno, "vertex id")
        c = _float(tok[3], lineno, "cost")
        if not (0 <= u < n and 0 <= v < n):
            raise IngestionError(f"vertex id out of range [0, {n})", lineno)
        if u == v:
            raise IngestionError(f"self-loop at vertex {u}", lineno)
        if c < 0:
            raise IngestionError(f"negative cost {tok[3]}", lineno)
        edges.append((u, v, c))
    if len(edges) != m:
        raise IngestionError(f"problem line announces {m} edges, found {len(edges)}", head_line)
    return Graph(n, edges)


def _parse_matrix(recs, n: int, head_line: int) -> Graph:
    rows = []
    lines = []
    for lineno, tok in recs:
        if len(tok) != n:
            raise IngestionError(f"matrix row needs {n} entries, got {len(tok)}", lineno)
        rows.append([_float(t, lineno, "distance") for t in tok])
        lines.append(lineno)
    if len(rows) != n:
        raise IngestionError(f"matrix needs {n} rows, found {len(rows)}", head_line)
    edges = []
    for i in range(n):
        if rows[i][i] != 0:
            raise IngestionError(f"nonzero diagonal entry at row {i}", lines[i])
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise IngestionError(f"matrix not symmetric at ({i}, {j})", lines[j])
            if rows[i][j] < 0:
                raise IngestionError(f"negative distance at ({i}, {j})", lines[i])
            edges.append((i, j, rows[i][j]))
    return Graph(n, edges)


def _parse_euc2d(recs, n: int, head_line: int) -> Graph:
    pts = []
    for lineno, tok in recs:
        if len(tok) != 2:
            raise IngestionError("coordinate line is '<x> <y>'", lineno)
        pts.append((_float(tok[0], lineno, "x"), _float(tok[1], lineno, "y")))
    if len(pts) != n:
        raise IngestionError(f"expected {n} points, found {len(pts)}", head_line)
    edges = [(i, j, round(math.dist(pts[i], pts[j]), 9))
             for i in range(n) for j in range(i + 1, n)]
    return Graph(n, edges)


def read_instance(path, fmt: str | None = None) -> Graph:
    return parse_instance(Path(path).read_text(encoding="utf-8"), fmt)


def format_edge_instance(g: Graph, comment: str | None = None) -> str:
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {u} {v} {c!r}" for u, v, c in g.edges)
    return "\n".join(lines) + "\n"


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{_encode(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if hasattr(obj, "item"):  # numpy scalars
        return _encode(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_report(report: dict) -> str:
    """JSON with every float written to 17 significant digits."""
    return _encode(report) + "\n"


def write_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
