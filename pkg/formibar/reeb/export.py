from typing import Dict, Iterable, List

from formibar.reeb.reeb_graph import ReebGraph, ReebVertex
from formibar.utils.utils import format_time


def _set_text(label: Iterable[str]) -> str:
    return "{" + ",".join(label) + "}"


def vertex_ids(reeb: ReebGraph) -> Dict[ReebVertex, str]:
    return {v: f"v{i}" for i, v in enumerate(reeb.vertices)}


def export_dot(reeb: ReebGraph) -> str:
    """Deterministic Graphviz text: vertices by (time, label), edges by (source, target, label)."""
    ids = vertex_ids(reeb)
    lines: List[str] = ["digraph reeb {"]
    for v in reeb.vertices:
        lines.append(f'  {ids[v]} [label="t={format_time(v.time)}\\n{_set_text(v.label)}"];')
    for e in reeb.edges:
        left, right = e.span
        lines.append(
            f'  {ids[e.source]} -> {ids[e.target]} '
            f'[label="({format_time(left)},{format_time(right)}) {_set_text(e.label)}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
