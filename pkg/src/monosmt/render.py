"""ASCII rendering of maze models.

A width x height maze renders as a (2*height+1) x (2*width+1) character
grid: '#' walls, ' ' corridors, 'S'/'F' on the start and finish cells. A
wall between two adjacent cells opens exactly when the model makes the
corresponding directed-copy arc true.
"""
from __future__ import annotations

from .gnf import GnfDocument, GnfError


def render_maze(doc: GnfDocument, values) -> str:
    meta = doc.meta.get("maze")
    if meta is None:
        raise GnfError("document carries no maze metadata")
    width, height, g2_gid, start, finish = (int(x) for x in meta)
    g2 = doc.graphs[g2_gid]
    rows = [bytearray(b"#" * (2 * width + 1)) for _ in range(2 * height + 1)]
    for node in range(width * height):
        r, c = divmod(node, width)
        rows[2 * r + 1][2 * c + 1] = ord(" ")
    for e in g2.edges:
        if not values[e.var]:
            continue
        ru, cu = divmod(e.u, width)
        rv, cv = divmod(e.v, width)
        rows[ru + rv + 1][cu + cv + 1] = ord(" ")
    for node, mark in ((start, b"S"), (finish, b"F")):
        r, c = divmod(node, width)
        rows[2 * r + 1][2 * c + 1] = mark[0]
    return "\n".join(row.decode("ascii") for row in rows)
