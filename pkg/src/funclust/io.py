"""Matrix and sieve documents (CSV / JSON) and DOT rendering."""

from __future__ import annotations

import csv
import io as _io
import json
from decimal import Decimal

from ._numeric import exact_value, float_value, fmt, jsonable
from .covers import Cover
from .sieves import Sieve, all_partitions
from .weights import WeightSpace, validate


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f"line {line}" + (f", column {column}" if column is not None else "") if line else ""
        super().__init__(f"{where}: {message}" if where else message)
        self.line = line
        self.column = column


def _label(s):
    if isinstance(s, str):
        s = s.strip()
        if s.lstrip("-").isdigit():
            return int(s)
    return s


def _is_number(s) -> bool:
    if exact_value(s) is not None:
        return True
    try:
        float_value(s)
        return True
    except (TypeError, ValueError):
        return False


def _cell(s, line, col):
    if isinstance(s, str):
        s = s.strip()
        if s == "":
            raise ParseError("empty entry", line, col)
    if isinstance(s, bool) or not _is_number(s):
        raise ParseError(f"not a number: {s!r}", line, col)
    return s


def detect_format(text: str) -> str:
    return "json" if text.lstrip().startswith("{") else "csv"


def parse_matrix(text: str, format: str | None = None, exact: bool | None = None) -> WeightSpace:
    """Parse a CSV or JSON matrix document into a validated weight space.

    CSV: an optional header row of labels, then one row per point; a row may
    start with its label.  JSON: ``{"labels": [...], "matrix": [[...]]}``.
    Decimal strings are read as exact rationals unless ``exact=False``.
    """
    format = format or detect_format(text)
    if format == "csv":
        return _parse_csv(text, exact)
    if format == "json":
        return _parse_json(text, exact)
    raise ValueError(f"unknown matrix format {format!r}")


def _parse_csv(text, exact):
    rows = [(k + 1, r) for k, r in enumerate(csv.reader(_io.StringIO(text)))
            if r and any(c.strip() for c in r) and not r[0].lstrip().startswith("#")]
    if not rows:
        raise ParseError("no data")
    first_line, first = rows[0]
    header = None
    numeric = all(_is_number(c.strip()) for c in first)
    if not numeric or len(rows) == len(first) + 1:
        header = [c.strip() for c in first]
        if header and header[0] == "":
            header = header[1:]  # corner cell of a labelled table
        rows = rows[1:]
    n = len(rows)
    labels = [_label(h) for h in header] if header is not None else None
    if labels is not None and len(labels) != n:
        raise ParseError(f"header has {len(labels)} labels but there are {n} data rows", first_line)
    body = []
    for i, (line, r) in enumerate(rows):
        offset = 0
        if header is not None and len(r) == n + 1:
            lab = _label(r[0])
            if labels is not None and lab != labels[i]:
                raise ParseError(f"row label {lab!r} does not match header label {labels[i]!r}", line, 1)
            offset = 1
        elif len(r) != n:
            raise ParseError(f"ragged row: expected {n} entries, found {len(r)}", line)
        body.append([_cell(c, line, k + 1 + offset) for k, c in enumerate(r[offset:])])
    return validate(body, labels, exact=exact)


def _parse_json(text, exact):
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise ParseError('expected an object with a "matrix" key', 1, 1)
    m = doc["matrix"]
    if not isinstance(m, list) or not all(isinstance(r, list) for r in m):
        raise ParseError('"matrix" must be a list of rows', 1)
    n = len(m)
    for i, r in enumerate(m):
        if len(r) != n:
            raise ParseError(f"ragged row {i + 1}: expected {n} entries, found {len(r)}")
        for j, v in enumerate(r):
            if not isinstance(v, (int, Decimal, str)) or isinstance(v, bool):
                raise ParseError(f"entry ({i + 1},{j + 1}) is not a number: {v!r}")
            if isinstance(v, str):
                _cell(v, None, None)
    labels = doc.get("labels")
    if labels is not None:
        labels = [_label(x) for x in labels]
    return validate(m, labels, exact=exact)


def emit_matrix(u: WeightSpace, format: str = "csv") -> str:
    if format == "csv":
        out = _io.StringIO()
        wr = csv.writer(out, lineterminator="\n")
        wr.writerow([str(p) for p in u.points])
        for row in u.w:
            wr.writerow([fmt(x) for x in row])
        return out.getvalue()
    if format == "json":
        doc = {"labels": [jsonable(p) if not isinstance(p, str) else p for p in u.points],
               "matrix": [[jsonable(x) for x in row] for row in u.w]}
        return json.dumps(doc, sort_keys=True) + "\n"
    raise ValueError(f"unknown matrix format {format!r}")


def _jlabel(p):
    return p if isinstance(p, str) else jsonable(p)


def sieve_document(s: Sieve) -> dict:
    return {
        "points": [_jlabel(p) for p in s.ground],
        "breakpoints": [
            {"t": jsonable(t), "cover": [[_jlabel(p) for p in b] for b in c.sorted_blocks()]}
            for t, c in s.levels()
        ],
    }


def emit_sieve(s: Sieve) -> str:
    return json.dumps(sieve_document(s), sort_keys=True) + "\n"


def _number(v):
    if isinstance(v, float):
        v = Decimal(repr(v))
    x = exact_value(v)
    if x is None:
        raise ParseError(f"not a number: {v!r}")
    return x


def parse_sieve(text_or_doc) -> Sieve:
    if isinstance(text_or_doc, str):
        try:
            doc = json.loads(text_or_doc, parse_float=Decimal)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, e.lineno, e.colno) from None
    else:
        doc = text_or_doc
    try:
        ground = tuple(_label(p) for p in doc["points"])
        levels = [(_number(b["t"]), Cover.of(ground, [[_label(p) for p in blk] for blk in b["cover"]]))
                  for b in doc["breakpoints"]]
    except (KeyError, TypeError) as e:
        raise ParseError(f"malformed sieve document: {e}") from None
    return Sieve.from_levels(ground, levels)


# -- DOT ----------------------------------------------------------------------


def _q(s) -> str:
    return '"' + str(s).replace('"', '\\"') + '"'


def _block_label(c: Cover, b) -> str:
    return "{" + ",".join(str(p) for p in c.ground if p in b) + "}"


def emit_dot(obj) -> str:
    from .tight_span import TightSpanReport

    if isinstance(obj, Sieve):
        return _dendrogram_dot(obj) if all_partitions(obj) else _layered_dot(obj)
    if isinstance(obj, TightSpanReport):
        return _tight_span_dot(obj)
    raise TypeError(f"cannot render {type(obj).__name__} as DOT")


def _dendrogram_dot(s: Sieve) -> str:
    lines = ["digraph dendrogram {", "  rankdir=BT;"]
    ids: dict = {}

    def node(block, t):
        if block not in ids:
            ids[block] = f"n{len(ids)}"
            label = _block_label(s.covers[0], block) if len(block) > 1 else str(next(iter(block)))
            lines.append(f"  {ids[block]} [label={_q(label)}, height_t={_q(fmt(t))}];")
        return ids[block]

    for p in s.ground:
        node(frozenset([p]), 0)
    for b in s.covers[0].blocks:
        if len(b) > 1:
            parent = node(b, s.breakpoints[0])
            for p in s.ground:
                if p in b:
                    lines.append(f"  {ids[frozenset([p])]} -> {parent};")
    for k in range(1, len(s.covers)):
        t, prev = s.breakpoints[k], s.covers[k - 1]
        for b in s.covers[k].blocks:
            if b in prev.blocks:
                continue
            parent = node(b, t)
            for child in prev.blocks:
                if child <= b:
                    lines.append(f"  {ids[child]} -> {parent};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _layered_dot(s: Sieve) -> str:
    lines = ["digraph sieve {", "  rankdir=BT;"]
    pid = {p: f"p{k}" for k, p in enumerate(s.ground)}
    lines.append("  { rank=same; " + " ".join(f"{pid[p]} [label={_q(p)}, shape=plaintext];" for p in s.ground) + " }")
    prev_ids = None
    for k, (t, c) in enumerate(s.levels()):
        ids = {b: f"l{k}b{j}" for j, b in enumerate(c.blocks)}
        decl = " ".join(f"{ids[b]} [label={_q(_block_label(c, b))}, shape=box];" for b in c.blocks)
        lines.append(f"  subgraph level{k} {{ rank=same; label={_q('t=' + fmt(t))}; {decl} }}")
        for b in c.blocks:
            if prev_ids is None:
                for p in c.ground:
                    if p in b:
                        lines.append(f"  {pid[p]} -> {ids[b]};")
            else:
                for pb, nid in prev_ids.items():
                    if pb <= b:
                        lines.append(f"  {nid} -> {ids[b]};")
        prev_ids = ids
    lines.append("}")
    return "\n".join(lines) + "\n"


def _tight_span_dot(r) -> str:
    lines = ["graph tightspan {"]
    kur = {tuple(r.space.w[i]): p for i, p in enumerate(r.space.points)}
    for k, f in enumerate(r.vertices):
        vals = "(" + ", ".join(fmt(v) for v in f.values) + ")"
        name = kur.get(tuple(f.values))
        if r.root is not None and f.values == r.root.values:
            name = "root"
        label = f"{name} {vals}" if name is not None else vals
        shape = "doublecircle" if name is not None else "circle"
        lines.append(f"  v{k} [label={_q(label)}, shape={shape}];")
    for i, j in r.edges:
        lines.append(f"  v{i} -- v{j} [label={_q(fmt(r.distances[i, j]))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"

