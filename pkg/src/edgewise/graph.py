"""Weighted multigraphs with stable edge identifiers.

Graphs are immutable; surgery operations (contract, delete, subdivide,
duplicate) return new graphs.  Edge ids survive contraction and deletion so
that sampling decisions indexed by edge id stay meaningful across minors.
Self-loops are dropped on construction; a dropped loop still consumes its id.

Vertices are 0-based ints internally.  The text format is 1-based:

    n m
    u v [w]

with one edge per line in id order (ids become 1..m on read).  Weights are
exact rationals, written as "3" or "3/2".  The JSON form preserves edge ids.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True

    def copy(self) -> "UnionFind":
        out = UnionFind.__new__(UnionFind)
        out.parent = self.parent.copy()
        out.size = self.size.copy()
        out.count = self.count
        return out


@dataclass(frozen=True)
class MinCut:
    value: Fraction
    side: frozenset
    edge_ids: frozenset


def _as_weight(w) -> Fraction:
    w = Fraction(w)
    if w < 0:
        raise ValueError("edge weights must be >= 0")
    return w


class Graph:
    """Immutable weighted multigraph; edges keyed by stable positive ids."""

    def __init__(self, n: int, edges=(), _indexed: dict | None = None):
        if n < 0:
            raise ValueError("n must be >= 0")
        self.n = n
        items: dict[int, tuple[int, int, Fraction]] = {}
        if _indexed is not None:
            source = _indexed.items()
        else:
            source = ((i + 1, e) for i, e in enumerate(edges))
        for eid, e in source:
            if len(e) == 2:
                u, v = e
                w = Fraction(1)
            else:
                u, v, w = e
                w = _as_weight(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {eid} endpoint out of range")
            if eid < 1:
                raise ValueError("edge ids must be >= 1")
            if u == v:
                continue  # loop dropped, id consumed
            items[eid] = (u, v, w)
        self._edges = items
        self._adj: dict[int, list[tuple[int, int]]] | None = None

    # -- basic accessors ---------------------------------------------------

    @property
    def m(self) -> int:
        return len(self._edges)

    def edge_ids(self) -> list[int]:
        return sorted(self._edges)

    def edge(self, eid: int) -> tuple[int, int, Fraction]:
        return self._edges[eid]

    def has_edge(self, eid: int) -> bool:
        return eid in self._edges

    def edges(self):
        """Yield (id, u, v, w) in id order."""
        for eid in sorted(self._edges):
            u, v, w = self._edges[eid]
            yield eid, u, v, w

    def weight(self, eid: int) -> Fraction:
        return self._edges[eid][2]

    def total_weight(self) -> Fraction:
        return sum((w for _, _, _, w in self.edges()), Fraction(0))

    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        """vertex -> [(neighbor, edge_id)], sorted; parallel edges repeat."""
        if self._adj is None:
            adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(self.n)}
            for eid, u, v, _ in self.edges():
                adj[u].append((v, eid))
                adj[v].append((u, eid))
            for v in adj:
                adj[v].sort()
            self._adj = adj
        return self._adj

    def degree(self, v: int) -> int:
        return len(self.adjacency()[v])

    # -- connectivity ------------------------------------------------------

    def union_find(self) -> UnionFind:
        uf = UnionFind(self.n)
        for _, u, v, _ in self.edges():
            uf.union(u, v)
        return uf

    def components(self) -> list[list[int]]:
        """Vertex lists, each sorted, ordered by smallest member."""
        uf = self.union_find()
        groups: dict[int, list[int]] = defaultdict(list)
        for v in range(self.n):
            groups[uf.find(v)].append(v)
        return sorted(groups.values())

    def component_count(self) -> int:
        return self.union_find().count

    def is_connected(self) -> bool:
        return self.n <= 1 or self.component_count() == 1

    def crossing_edges(self, side) -> frozenset:
        s = set(side)
        return frozenset(
            eid for eid, u, v, _ in self.edges() if (u in s) != (v in s)
        )

    def cut_weight(self, side) -> Fraction:
        s = set(side)
        return sum(
            (w for _, u, v, w in self.edges() if (u in s) != (v in s)),
            Fraction(0),
        )

    # -- minimum cut ---------------------------------------------------------

    def min_cut(self) -> MinCut:
        """Global minimum weighted cut, deterministic.

        Runs a max-adjacency (Stoer-Wagner) sweep per component with exact
        arithmetic.  Ties break toward the lexicographically smallest side
        (the side is canonicalized to the lex-smaller of itself and its
        complement).  A disconnected graph has a zero cut.
        """
        if self.n < 2:
            raise ValueError("min cut needs at least 2 vertices")
        comps = self.components()
        best: tuple[Fraction, tuple] | None = None
        if len(comps) > 1:
            for comp in comps:
                cand = (Fraction(0), self._canon_side(comp))
                if best is None or cand < best:
                    best = cand
        else:
            for value, side in self._sw_candidates(comps[0]):
                cand = (value, self._canon_side(side))
                if best is None or cand < best:
                    best = cand
        value, side_t = best
        side = frozenset(side_t)
        return MinCut(value=value, side=side, edge_ids=self.crossing_edges(side))

    def _canon_side(self, side) -> tuple:
        inside = tuple(sorted(side))
        outside = tuple(sorted(set(range(self.n)) - set(side)))
        return min(inside, outside)

    def _sw_candidates(self, comp: list[int]):
        """Cut-of-the-phase candidates for one connected component."""
        weights: dict[int, dict[int, Fraction]] = {v: defaultdict(Fraction) for v in comp}
        comp_set = set(comp)
        for _, u, v, w in self.edges():
            if u in comp_set and v in comp_set:
                weights[u][v] += w
                weights[v][u] += w
        groups = {v: frozenset([v]) for v in comp}
        active = sorted(comp)
        while len(active) > 1:
            start = active[0]
            in_a = {start}
            order = [start]
            conn: dict[int, Fraction] = defaultdict(Fraction)
            for x, wx in weights[start].items():
                conn[x] += wx
            while len(order) < len(active):
                pick = min(
                    (x for x in active if x not in in_a),
                    key=lambda x: (-conn[x], x),
                )
                order.append(pick)
                in_a.add(pick)
                for y, wy in weights[pick].items():
                    if y not in in_a:
                        conn[y] += wy
            t = order[-1]
            s = order[-2]
            yield sum(weights[t].values(), Fraction(0)), groups[t]
            # merge t into s
            groups[s] = groups[s] | groups[t]
            for y, wy in weights[t].items():
                if y == s:
                    continue
                weights[s][y] += wy
                weights[y][s] += wy
                del weights[y][t]
            weights[s].pop(t, None)
            del weights[t]
            active.remove(t)

    def enumerate_cuts(self, max_vertices: int = 20):
        """All distinct cut edge sets, one component at a time.

        For each component the pinned smallest vertex stays on one side, so
        each vertex bipartition is visited once.  Distinct bipartitions with
        the same crossing edge set are reported once, keyed by the edge set.
        Returns a list of (edge_ids frozenset, side frozenset, value) sorted
        by (value, sorted side).
        """
        if self.n > max_vertices:
            raise ValueError(f"cut enumeration capped at {max_vertices} vertices")
        out: dict[frozenset, tuple[Fraction, frozenset]] = {}
        for comp in self.components():
            if len(comp) < 2:
                continue
            pin, rest = comp[0], comp[1:]
            for bits in range(1 << len(rest)):
                if bits == (1 << len(rest)) - 1:
                    continue  # side == whole component
                side = {pin}
                for i, v in enumerate(rest):
                    if (bits >> i) & 1:
                        side.add(v)
                eids = self.crossing_edges(side)
                if eids in out:
                    continue
                value = sum((self._edges[e][2] for e in eids), Fraction(0))
                out[eids] = (value, frozenset(side))
        return sorted(
            ((eids, side, value) for eids, (value, side) in out.items()),
            key=lambda t: (t[2], tuple(sorted(t[1]))),
        )

    # -- girth and cycles ----------------------------------------------------

    def girth(self) -> int | None:
        """Number of edges on a shortest cycle; None if the graph is a forest."""
        pair_seen = set()
        simple: dict[int, set[int]] = {v: set() for v in range(self.n)}
        for _, u, v, _ in self.edges():
            key = (min(u, v), max(u, v))
            if key in pair_seen:
                return 2  # parallel pair
            pair_seen.add(key)
            simple[u].add(v)
            simple[v].add(u)
        best: int | None = None
        for root in range(self.n):
            dist = {root: 0}
            parent = {root: -1}
            q = deque([root])
            while q:
                u = q.popleft()
                if best is not None and dist[u] * 2 >= best:
                    continue
                for v in sorted(simple[u]):
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        parent[v] = u
                        q.append(v)
                    elif v != parent[u]:
                        cand = dist[u] + dist[v] + 1
                        if best is None or cand < best:
                            best = cand
        return best

    def enumerate_cycles(self, max_edges: int = 40):
        """All simple cycles as frozensets of edge ids (length >= 2).

        Anchored search: a cycle is discovered from its smallest vertex, with
        interior vertices restricted to larger indices.  Parallel edges give
        2-cycles.  Exponential in general; refuses m > max_edges.
        """
        if self.m > max_edges:
            raise ValueError(f"cycle enumeration capped at {max_edges} edges")
        adj = self.adjacency()
        cycles: set[frozenset] = set()

        def dfs(anchor, v, visited, path_edges):
            for w, eid in adj[v]:
                if eid in path_edges:
                    continue
                if w == anchor:
                    cycles.add(frozenset(path_edges | {eid}))
                elif w > anchor and w not in visited:
                    dfs(anchor, w, visited | {w}, path_edges | {eid})

        for anchor in range(self.n):
            for w, eid in adj[anchor]:
                if w > anchor:
                    dfs(anchor, w, {anchor, w}, {eid})
        return sorted(cycles, key=lambda c: (len(c), tuple(sorted(c))))

    def is_forest(self) -> bool:
        uf = UnionFind(self.n)
        for _, u, v, _ in self.edges():
            if not uf.union(u, v):
                return False
        return True

    def spanning_forest(self) -> list[int]:
        """Edge ids of the smallest-id-first spanning forest."""
        uf = UnionFind(self.n)
        out = []
        for eid, u, v, _ in self.edges():
            if uf.union(u, v):
                out.append(eid)
        return out

    # -- surgery -------------------------------------------------------------

    def _replace_edges(self, indexed: dict) -> "Graph":
        return Graph(self.n, _indexed=indexed)

    def delete_edges(self, eids) -> "Graph":
        drop = set(eids)
        missing = drop - set(self._edges)
        if missing:
            raise KeyError(f"unknown edge ids {sorted(missing)}")
        return self._replace_edges(
            {e: t for e, t in self._edges.items() if e not in drop}
        )

    def keep_edges(self, eids) -> "Graph":
        keep = set(eids)
        missing = keep - set(self._edges)
        if missing:
            raise KeyError(f"unknown edge ids {sorted(missing)}")
        return self._replace_edges({e: self._edges[e] for e in keep})

    def contract_partition(self, parts) -> tuple["Graph", dict[int, int]]:
        """Merge each part to one vertex.  Returns (graph, old->new map).

        Parts must partition the vertex set; they are renumbered 0.. in order
        of smallest member.  Edges inside a part vanish (ids consumed); edges
        across parts survive with their ids.
        """
        seen: set[int] = set()
        norm = []
        for part in parts:
            pset = set(part)
            if not pset:
                raise ValueError("empty part")
            if pset & seen:
                raise ValueError("parts overlap")
            seen |= pset
            norm.append(sorted(pset))
        if seen != set(range(self.n)):
            raise ValueError("parts must cover all vertices")
        norm.sort(key=lambda p: p[0])
        vmap = {v: i for i, part in enumerate(norm) for v in part}
        indexed = {}
        for eid, (u, v, w) in self._edges.items():
            indexed[eid] = (vmap[u], vmap[v], w)
        g = Graph(len(norm), _indexed=indexed)
        return g, vmap

    def contract_edges(self, eids) -> tuple["Graph", dict[int, int]]:
        """Contract the given edges (identify their endpoints)."""
        uf = UnionFind(self.n)
        for eid in eids:
            u, v, _ = self._edges[eid]
            uf.union(u, v)
        groups: dict[int, list[int]] = defaultdict(list)
        for v in range(self.n):
            groups[uf.find(v)].append(v)
        return self.contract_partition(list(groups.values()))

    def subdivide(self, s: int) -> "Graph":
        """Replace each edge by a path of s edges.

        Edge i becomes ids (i-1)*s + 1 .. i*s, each with the original weight;
        the s-1 fresh interior vertices are appended in edge-id order, walking
        from u to v.
        """
        if s < 1:
            raise ValueError("s must be >= 1")
        indexed = {}
        next_v = self.n
        for eid, u, v, w in self.edges():
            chain = [u] + list(range(next_v, next_v + s - 1)) + [v]
            next_v += s - 1
            for j in range(s):
                indexed[(eid - 1) * s + j + 1] = (chain[j], chain[j + 1], w)
        return Graph(next_v, _indexed=indexed)

    def duplicate_edges(self, s: int) -> "Graph":
        """Replace each edge by s parallel copies, ids (i-1)*s + 1 .. i*s."""
        if s < 1:
            raise ValueError("s must be >= 1")
        indexed = {}
        for eid, u, v, w in self.edges():
            for j in range(s):
                indexed[(eid - 1) * s + j + 1] = (u, v, w)
        return Graph(self.n, _indexed=indexed)

    def induced_subgraph(self, vertices) -> tuple["Graph", dict[int, int]]:
        """Subgraph on the given vertices, relabeled 0.. in sorted order.

        Edges with both endpoints inside survive with their ids.
        """
        vs = sorted(set(vertices))
        if vs and not (0 <= vs[0] and vs[-1] < self.n):
            raise ValueError("vertex out of range")
        vmap = {v: i for i, v in enumerate(vs)}
        indexed = {}
        for eid, (u, v, w) in self._edges.items():
            if u in vmap and v in vmap:
                indexed[eid] = (vmap[u], vmap[v], w)
        return Graph(len(vs), _indexed=indexed), vmap

    def with_weights(self, mapping) -> "Graph":
        """Same graph with weights replaced per edge id (others unchanged)."""
        indexed = {}
        for eid, (u, v, w) in self._edges.items():
            indexed[eid] = (u, v, _as_weight(mapping.get(eid, w)))
        return self._replace_edges(indexed)

    def with_unit_weights(self) -> "Graph":
        return self.with_weights({eid: Fraction(1) for eid in self._edges})

    # -- serialization ---------------------------------------------------------

    def to_text(self) -> str:
        """1-based text form; edge ids are renumbered 1..m in id order."""
        lines = [f"{self.n} {self.m}"]
        for _, u, v, w in self.edges():
            if w == 1:
                lines.append(f"{u + 1} {v + 1}")
            else:
                lines.append(f"{u + 1} {v + 1} {w}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not rows:
            raise ValueError("empty graph text")
        n, m = int(rows[0][0]), int(rows[0][1])
        if len(rows) - 1 != m:
            raise ValueError(f"expected {m} edge lines, got {len(rows) - 1}")
        edges = []
        for row in rows[1:]:
            u, v = int(row[0]) - 1, int(row[1]) - 1
            if len(row) > 2:
                edges.append((u, v, Fraction(row[2])))
            else:
                edges.append((u, v))
        return cls(n, edges)

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "edges": [
                {"id": eid, "u": u, "v": v, "w": str(w)}
                for eid, u, v, w in self.edges()
            ],
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        payload = json.loads(text)
        indexed = {
            e["id"]: (e["u"], e["v"], Fraction(e["w"])) for e in payload["edges"]
        }
        return cls(payload["n"], _indexed=indexed)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def brute_force_min_cut(g: Graph) -> MinCut:
    """Reference minimum cut by exhausting bipartitions (small graphs only)."""
    if g.n < 2:
        raise ValueError("min cut needs at least 2 vertices")
    if g.n > 20:
        raise ValueError("brute force capped at 20 vertices")
    best: tuple[Fraction, tuple] | None = None
    verts = list(range(g.n))
    for bits in range(1 << (g.n - 1)):
        side = {verts[0]}
        for i in range(1, g.n):
            if (bits >> (i - 1)) & 1:
                side.add(verts[i])
        if len(side) == g.n:
            continue
        value = g.cut_weight(side)
        cand = (value, g._canon_side(side))
        if best is None or cand < best:
            best = cand
    value, side_t = best
    side = frozenset(side_t)
    return MinCut(value=value, side=side, edge_ids=g.crossing_edges(side))


def is_simple_cycle(g: Graph, eids) -> bool:
    """True when the edge subset forms one connected, all-degree-2 subgraph."""
    eids = set(eids)
    if len(eids) < 2:
        return False
    deg: dict[int, int] = defaultdict(int)
    for eid in eids:
        u, v, _ = g.edge(eid)
        deg[u] += 1
        deg[v] += 1
    if any(d != 2 for d in deg.values()):
        return False
    touched = sorted(deg)
    sub, vmap = g.induced_subgraph(touched)
    sub = sub.keep_edges(eids & set(sub.edge_ids()))
    if sub.m != len(eids):
        return False
    return sub.is_connected()


def brute_force_cycles(g: Graph, max_edges: int = 14):
    """All simple cycles by subset exhaustion (tiny graphs only)."""
    if g.m > max_edges:
        raise ValueError(f"subset exhaustion capped at {max_edges} edges")
    ids = g.edge_ids()
    out = []
    for size in range(2, g.m + 1):
        for sub in combinations(ids, size):
            if is_simple_cycle(g, sub):
                out.append(frozenset(sub))
    return sorted(out, key=lambda c: (len(c), tuple(sorted(c))))
