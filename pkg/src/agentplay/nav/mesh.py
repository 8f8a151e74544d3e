"""Triangle meshes and their conversion to navigation graphs.

Mesh text format, one record per line::

    v <x> <y>        vertex (0-based index by order of appearance)
    t <i> <j> <k>    triangle over three vertex indices

Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

from agentplay.nav.graph import NavGraph


class MeshError(ValueError):
    pass


@dataclass
class TriangleMesh:
    vertices: list[tuple[float, float]] = field(default_factory=list)
    triangles: list[tuple[int, int, int]] = field(default_factory=list)

    def area(self, t: int) -> float:
        i, j, k = self.triangles[t]
        (ax, ay), (bx, by), (cx, cy) = self.vertices[i], self.vertices[j], self.vertices[k]
        return abs((bx - ax) * (cy - ay) - (cx - ax) * (by - ay)) / 2.0

    def centroid(self, t: int) -> tuple[float, float]:
        pts = [self.vertices[v] for v in self.triangles[t]]
        return (sum(p[0] for p in pts) / 3.0, sum(p[1] for p in pts) / 3.0)

    def validate(self) -> None:
        n = len(self.vertices)
        for t, tri in enumerate(self.triangles):
            if len(set(tri)) != 3 or any(not 0 <= v < n for v in tri):
                raise MeshError(f"triangle {t} has invalid vertex indices {tri}")
            if self.area(t) <= 0.0:
                raise MeshError(f"triangle {t} is degenerate")


def from_mesh(mesh: TriangleMesh) -> NavGraph:
    """Node per triangle at its centroid; edge per pair sharing a mesh edge."""
    mesh.validate()
    g = NavGraph()
    by_edge: dict[tuple[int, int], list[int]] = defaultdict(list)
    for t, (i, j, k) in enumerate(mesh.triangles):
        g.add_node(t, mesh.centroid(t))
        for a, b in ((i, j), (j, k), (k, i)):
            by_edge[(min(a, b), max(a, b))].append(t)
    for owners in by_edge.values():
        for x in range(len(owners)):
            for y in range(x + 1, len(owners)):
                g.add_edge(owners[x], owners[y])
    return g


def parse_mesh(text: str) -> TriangleMesh:
    mesh = TriangleMesh()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tag, *fields = line.split()
        try:
            if tag == "v" and len(fields) == 2:
                mesh.vertices.append((float(fields[0]), float(fields[1])))
            elif tag == "t" and len(fields) == 3:
                mesh.triangles.append(tuple(int(f) for f in fields))  # type: ignore[arg-type]
            else:
                raise MeshError(f"line {lineno}: unrecognised record {line!r}")
        except ValueError as exc:
            if isinstance(exc, MeshError):
                raise
            raise MeshError(f"line {lineno}: {exc}") from None
    mesh.validate()
    return mesh


def dump_mesh(mesh: TriangleMesh) -> str:
    lines = [f"v {x!r} {y!r}" for x, y in mesh.vertices]
    lines += [f"t {i} {j} {k}" for i, j, k in mesh.triangles]
    return "\n".join(lines) + "\n"


def load_mesh(path: str | Path) -> TriangleMesh:
    return parse_mesh(Path(path).read_text())
