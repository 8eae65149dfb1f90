"""Text emitters: DOT diagrams and CSV tables."""

from __future__ import annotations

import csv
import io

from .dimension import BoxCountResult
from .index_algebra import chart_composition, chart_index, enumerate_lambda, format_composition, MapToken
from .stretching import ExpansionTree


def _q(text: str) -> str:
    return '"' + str(text).replace('"', '\\"') + '"'


def tree_dot(tree: ExpansionTree) -> str:
    """Parent-to-children digraph of the tree, rooted at the base box."""
    lines = ["digraph expansion {", "  rankdir=TB;", f"  root [label={_q(str(tree.base))}];"]
    for j in tree:
        label = str(j) + "\\n" + str(tree.nodes[j])
        lines.append(f"  {_q(j)} [label={_q(label)}];")
    for j in tree:
        src = "root" if j.step == 0 else _q(j.signs[:-1])
        lines.append(f"  {src} -> {_q(j)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def chart_dot(step: int) -> str:
    """Chart diagram up to ``step``: arrows labelled ``φ_k`` / ``T_k∘φ_k`` plus ``T_k`` between siblings."""
    lines = ["digraph charts {", "  rankdir=TB;", '  M [label="M"];']
    for n in range(step + 1):
        for j in enumerate_lambda(n):
            lines.append(f"  {_q('N' + str(j))} [label={_q('N^' + str(j))}];")
    for n in range(step + 1):
        level = enumerate_lambda(n)
        for j in level:
            k, primed = chart_index(j)
            label = format_composition([MapToken("T", k), MapToken("phi", k)] if primed else [MapToken("phi", k)])
            src = "M" if n == 0 else _q("N" + j.signs[:-1])
            lines.append(f"  {src} -> {_q('N' + str(j))} [label={_q(label)}];")
        for plus, minus in zip(level[0::2], level[1::2]):
            k = chart_index(plus).k
            lines.append(f"  {_q('N' + str(plus))} -> {_q('N' + str(minus))} "
                         f"[label={_q(f'T_{k}')}, style=dashed, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def tree_csv(tree: ExpansionTree) -> str:
    d = tree.base.dim
    header = ["sign_string", "step"] + [f"{e}_{k}" for k in range(d) for e in ("lo", "hi")]
    rows = []
    for j in tree:
        b = tree.nodes[j]
        rows.append([str(j), j.step] + [repr(v) for s in b.sides for v in (s.lo, s.hi)])
    return _csv(header, rows)


def chart_table_csv(n: int) -> str:
    rows = []
    for j in enumerate_lambda(n):
        k, primed = chart_index(j)
        rows.append([str(j), k, str(primed).lower(), format_composition(chart_composition(j))])
    return _csv(["sign_string", "k", "primed", "composition"], rows)


def box_count_csv(result: BoxCountResult) -> str:
    text = _csv(["scale", "count"], [[repr(s), c] for s, c in result.rows()])
    return text + _csv(["slope", "r2"], [[repr(result.slope), repr(result.r2)]])
