"""Instances, shortest paths and the DNA library that encodes them."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import Disconnected, InstanceError, InstanceParseError
from .tube import ANTISENSE, HASH, SYMBOL_MERS, A, B, Strand, Symbol, Tube, X, label


@dataclass(frozen=True)
class Issue:
    code: str
    message: str

    def to_dict(self):
        return {"code": self.code, "message": self.message}


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int, int], ...]

    @property
    def max_weight(self) -> int:
        """Largest edge weight (``Y``); bounds the extraction loops."""
        return max((w for _, _, w in self.edges), default=0)

    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        adj = {v: [] for v in range(1, self.n + 1)}
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj


@dataclass(frozen=True)
class Instance:
    graph: Graph
    clients: frozenset[int]
    facilities: frozenset[int]
    k: int

    @property
    def n(self) -> int:
        return self.graph.n

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": [list(e) for e in self.graph.edges],
            "clients": sorted(self.clients),
            "facilities": sorted(self.facilities),
            "k": self.k,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _connected(n: int, edges) -> bool:
    parent = list(range(n + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v, _ in edges:
        parent[find(u)] = find(v)
    return len({find(v) for v in range(1, n + 1)}) <= 1


def validate_instance(raw: dict) -> Instance:
    """Check a raw instance description and build an :class:`Instance`.

    Every problem found is collected; if there are any, a single
    :class:`InstanceError` carrying all of them is raised.
    """
    if not isinstance(raw, dict):
        raise InstanceParseError("instance must be a JSON object")
    missing = [key for key in ("n", "edges", "clients", "facilities", "k") if key not in raw]
    if missing:
        raise InstanceParseError(f"instance is missing keys: {', '.join(missing)}")
    n = raw["n"]
    if not _is_int(n) or n < 1:
        raise InstanceParseError("n must be a positive integer")

    issues: list[Issue] = []
    edges = []
    seen = set()
    for item in raw["edges"]:
        if not isinstance(item, (list, tuple)) or len(item) != 3:
            issues.append(Issue("InvalidEdge", f"edge {item!r} is not [u, v, w]"))
            continue
        u, v, w = item
        if not (_is_int(u) and _is_int(v)) or not (1 <= u <= n and 1 <= v <= n):
            issues.append(Issue("InvalidEdge", f"edge {item!r} has endpoints outside 1..{n}"))
            continue
        if u == v:
            issues.append(Issue("InvalidEdge", f"edge {item!r} is a self-loop"))
            continue
        if isinstance(w, float) and w.is_integer():
            w = int(w)
        if not _is_int(w) or w < 1:
            issues.append(Issue("NonIntegerWeight", f"edge {item!r} weight must be an integer >= 1"))
            continue
        pair = (min(u, v), max(u, v))
        if pair in seen:
            issues.append(Issue("DuplicateEdge", f"edge {pair} appears more than once"))
            continue
        seen.add(pair)
        edges.append((pair[0], pair[1], w))
    if len(edges) > n * (n + 1) // 2:
        issues.append(Issue("EdgeBound", f"{len(edges)} edges exceed n(n+1)/2"))

    vertex_sets = {}
    for key in ("clients", "facilities"):
        values = raw[key]
        if not isinstance(values, list) or not all(_is_int(v) and 1 <= v <= n for v in values):
            issues.append(Issue("BadVertexSet", f"{key} must list vertices in 1..{n}"))
            values = []
        elif len(set(values)) != len(values):
            issues.append(Issue("BadVertexSet", f"{key} lists a vertex twice"))
        elif not values:
            issues.append(Issue("BadVertexSet", f"{key} must be nonempty"))
        vertex_sets[key] = frozenset(values)
    clients, facilities = vertex_sets["clients"], vertex_sets["facilities"]
    overlap = clients & facilities
    if overlap:
        issues.append(Issue("OverlappingCF", f"vertices {sorted(overlap)} are both client and facility"))
    k = raw["k"]
    if not _is_int(k) or not 1 <= k <= len(facilities):
        issues.append(Issue("BadK", f"k must satisfy 1 <= k <= |F| = {len(facilities)}"))
    if not _connected(n, edges):
        issues.append(Issue("Disconnected", "graph must be connected"))
    if issues:
        raise InstanceError(issues)
    edges.sort()
    return Instance(Graph(n, tuple(edges)), clients, facilities, k)


def load_instance(path) -> Instance:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InstanceParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"{path} is not valid JSON: {exc}") from exc
    return validate_instance(raw)


@dataclass(frozen=True)
class ShortestPaths:
    n: int
    matrix: tuple[tuple[int, ...], ...]  # 0-based rows/cols

    def __call__(self, i: int, j: int) -> int:
        """Distance between 1-indexed vertices ``i`` and ``j``."""
        return self.matrix[i - 1][j - 1]

    @property
    def max_tag_mers(self) -> int:
        return SYMBOL_MERS * max((max(row) for row in self.matrix), default=0)


def all_pairs_shortest_paths(graph: Graph) -> ShortestPaths:
    """Floyd-Warshall over integer weights."""
    n = graph.n
    inf = float("inf")
    dist = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for u, v, w in graph.edges:
        if w < dist[u - 1][v - 1]:
            dist[u - 1][v - 1] = dist[v - 1][u - 1] = w
    for m in range(n):
        row_m = dist[m]
        for i in range(n):
            d_im = dist[i][m]
            if d_im == inf:
                continue
            row_i = dist[i]
            for j in range(n):
                alt = d_im + row_m[j]
                if alt < row_i[j]:
                    row_i[j] = alt
    if any(d == inf for row in dist for d in row):
        raise Disconnected([Issue("Disconnected", "graph must be connected")])
    return ShortestPaths(n, tuple(tuple(int(d) for d in row) for row in dist))


def descending_pairs(spm: ShortestPaths, inst: Instance) -> list[tuple[int, int, int]]:
    """All (client, facility, distance) triples, longest first; ties by client then facility."""
    pairs = [(v, u, spm(v, u)) for v in inst.clients for u in inst.facilities]
    pairs.sort(key=lambda t: (-t[2], t[0], t[1]))
    return pairs


def vertex_pattern(vertex: int, value: int) -> tuple[Symbol, Symbol, Symbol]:
    """The ``A_v value B_v`` block marking which subset a vertex is in."""
    return (A(vertex), label(value), B(vertex))


@dataclass(frozen=True)
class Library:
    n: int
    sense_fragments: tuple[tuple[Symbol, ...], ...]
    splints: tuple[tuple[Symbol, ...], ...]
    tag_fragments: dict = field(hash=False, compare=True)

    def sense_tube(self, name: str = "P") -> Tube:
        return Tube.of((Strand(f) for f in self.sense_fragments), name)

    def splint_tube(self, name: str = "Q") -> Tube:
        return Tube.of((Strand(s, ANTISENSE) for s in self.splints), name)


def build_library(inst: Instance, spm: ShortestPaths) -> Library:
    n = inst.n
    sense = [(HASH, A(1))]
    sense += [(B(d), A(d + 1)) for d in range(1, n)]
    sense += [(B(n), HASH)]
    sense += [(label(x),) for x in (0, 1, 2)]
    splints = [vertex_pattern(d, x) for d in range(1, n + 1) for x in (0, 1, 2)]
    # the lone '#' complement is carried along but covers no junction
    splints.append((HASH,))
    tags = {
        (i, j): (X,) * spm(i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j
    }
    return Library(n, tuple(sense), tuple(splints), tags)
