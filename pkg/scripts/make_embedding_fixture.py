#!/usr/bin/env python3
"""Generate the bundled hardware-graph fixture used by the embedding tests.

The fixture imitates the relevant features of a modern annealer topology
without reproducing any vendor layout: a square lattice of qubits with
orthogonal couplers plus one diagonal per cell. The diagonals create
triangles, so the graph is non-bipartite and carries odd cycles of every
length the tests request; degree stays small like real hardware.

A manifest JSON records node/edge counts at generation time; the loader
test checks the parsed graph against it.
"""

import json
from pathlib import Path

SIDE = 40

def main():
    out_dir = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
    out_dir.mkdir(parents=True, exist_ok=True)
    edges = []
    for r in range(SIDE):
        for c in range(SIDE):
            n = r * SIDE + c
            if c + 1 < SIDE:
                edges.append((n, n + 1))
            if r + 1 < SIDE:
                edges.append((n, n + SIDE))
            if r + 1 < SIDE and c + 1 < SIDE:
                edges.append((n, n + SIDE + 1))
    nodes = {u for e in edges for u in e}
    path = out_dir / "lattice_fixture.edges"
    lines = ["# hardware-graph fixture: square lattice with one diagonal per cell"]
    lines += [f"{u} {v}" for u, v in edges]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    manifest = {
        "file": path.name,
        "side": SIDE,
        "num_nodes": len(nodes),
        "num_edges": len(edges),
        "bipartite": False,
    }
    (out_dir / "lattice_fixture_manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote {path} ({len(nodes)} nodes, {len(edges)} edges)")


if __name__ == "__main__":
    main()
