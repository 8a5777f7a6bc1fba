"""Clusters of 4-simplexes: incidence tables and inner/boundary classification."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .weights import Simplex4, WeightError


class ClusterError(ValueError):
    pass


@dataclass(frozen=True)
class Classification:
    inner_tetrahedra: tuple[tuple[int, ...], ...]
    boundary_tetrahedra: tuple[tuple[int, ...], ...]
    inner_faces: tuple[tuple[int, ...], ...]
    boundary_faces: tuple[tuple[int, ...], ...]
    inner_edges: tuple[tuple[int, ...], ...]
    boundary_edges: tuple[tuple[int, ...], ...]


class Cluster:
    """Ordered 4-simplexes with derived tetrahedron, face and edge tables.

    Every tetrahedron must lie in one (boundary) or two (inner) simplexes.
    A face or edge is boundary iff some boundary tetrahedron contains it.
    """

    def __init__(self, simplexes: Iterable[Simplex4 | Iterable[int]]):
        simps = []
        for s in simplexes:
            simps.append(s if isinstance(s, Simplex4) else Simplex4.of(s))
        if len(set(simps)) != len(simps):
            raise ClusterError("duplicate 4-simplex in cluster")
        if not simps:
            raise ClusterError("empty cluster")
        self.simplexes: tuple[Simplex4, ...] = tuple(sorted(simps))

        counts: dict[tuple[int, ...], int] = defaultdict(int)
        for s in self.simplexes:
            for t in s.tetrahedra:
                counts[t] += 1
        bad = sorted(t for t, c in counts.items() if c > 2)
        if bad:
            raise ClusterError(f"tetrahedra {bad} lie in more than two 4-simplexes")
        self.tetrahedron_count = dict(sorted(counts.items()))
        self.tetrahedra = tuple(self.tetrahedron_count)

        faces: dict[tuple[int, ...], list] = defaultdict(list)
        edges: dict[tuple[int, ...], set] = defaultdict(set)
        for t in self.tetrahedra:
            for face in combinations(t, 3):
                faces[face].append(t)
            for edge in combinations(t, 2):
                edges[edge].add(t)
        self.face_tetrahedra = {f: tuple(ts) for f, ts in sorted(faces.items())}
        self.edge_tetrahedra = {e: tuple(sorted(ts)) for e, ts in sorted(edges.items())}

    @classmethod
    def of(cls, *simplexes: Iterable[int]) -> "Cluster":
        return cls(simplexes)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for s in self.simplexes for v in s.vertices}))

    def is_inner_tetrahedron(self, t) -> bool:
        return self.tetrahedron_count[tuple(t)] == 2

    def classify(self) -> Classification:
        inner_t = tuple(t for t, c in self.tetrahedron_count.items() if c == 2)
        bdry_t = tuple(t for t, c in self.tetrahedron_count.items() if c == 1)
        bdry = set(bdry_t)

        def split(table):
            inner, boundary = [], []
            for key, tets in table.items():
                (boundary if bdry.intersection(tets) else inner).append(key)
            return tuple(inner), tuple(boundary)

        inner_f, bdry_f = split(self.face_tetrahedra)
        inner_e, bdry_e = split(self.edge_tetrahedra)
        return Classification(inner_t, bdry_t, inner_f, bdry_f, inner_e, bdry_e)

    def __eq__(self, other):
        return isinstance(other, Cluster) and self.simplexes == other.simplexes

    def __hash__(self):
        return hash(self.simplexes)

    def __repr__(self):
        return "Cluster(" + ", ".join(str(s) for s in self.simplexes) + ")"

    def relabel(self, mapping: dict[int, int]) -> "Cluster":
        return Cluster(Simplex4.of(mapping[v] for v in s.vertices) for s in self.simplexes)


def classify(cluster: Cluster) -> Classification:
    return cluster.classify()


def load_triangulation(source: str) -> Cluster:
    """One 4-simplex per line as five positive integers; ``#`` comments allowed."""
    simps: list[Simplex4] = []
    seen: dict[Simplex4, int] = {}
    counts: dict[tuple[int, ...], list[int]] = defaultdict(list)
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            verts = [int(x) for x in line.split()]
        except ValueError:
            raise ClusterError(f"line {lineno}: expected integers, got {raw.strip()!r}") from None
        if len(verts) != 5:
            raise ClusterError(f"line {lineno}: expected 5 vertices, got {len(verts)}")
        if any(v < 1 for v in verts):
            raise ClusterError(f"line {lineno}: vertices must be positive")
        if len(set(verts)) != 5:
            raise ClusterError(f"line {lineno}: repeated vertex in {verts}")
        try:
            s = Simplex4.of(verts)
        except WeightError as exc:
            raise ClusterError(f"line {lineno}: {exc}") from None
        if s in seen:
            raise ClusterError(f"line {lineno}: duplicate of the simplex on line {seen[s]}")
        seen[s] = lineno
        for t in s.tetrahedra:
            counts[t].append(lineno)
            if len(counts[t]) > 2:
                raise ClusterError(
                    f"line {lineno}: tetrahedron {t} already lies in the simplexes on lines "
                    f"{counts[t][0]} and {counts[t][1]}")
        simps.append(s)
    if not simps:
        raise ClusterError("no 4-simplexes in input")
    return Cluster(simps)


def format_triangulation(cluster: Cluster) -> str:
    return "".join(" ".join(map(str, s.vertices)) + "\n" for s in cluster.simplexes)
