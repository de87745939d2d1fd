"""Independence oracles over graph edge sets, with round/query accounting.

Two matroid kinds share the oracle interface: independent means forest
(graphic) or removal-preserves-components (cographic).  A session tracks a
symbolic minor (contracted set T, deleted set D) and answers queries against
it through the identity Ind(S in minor) = Ind(S union T in the full matroid),
so no graph surgery happens per query.

Parallel rounds are simulated sequentially: a round is opened, queries are
issued (their answers withheld until the round closes), and the ledger
records one count per round.  Algorithms that want strict structural
non-adaptivity use run_round, which takes the full query batch up front.
"""

from __future__ import annotations

import json

from .graph import Graph, UnionFind

GRAPHIC = "graphic"
COGRAPHIC = "cographic"


def ind_graphic(g: Graph, S) -> bool:
    """Independent iff the edge set contains no cycle."""
    uf = UnionFind(g.n)
    for eid in S:
        u, v, _ = g.edge(eid)
        if not uf.union(u, v):
            return False
    return True


def ind_cographic(g: Graph, S) -> bool:
    """Independent iff removing the edge set keeps every component intact."""
    S = set(S)
    for eid in S:
        if not g.has_edge(eid):
            raise KeyError(f"unknown edge id {eid}")
    uf = UnionFind(g.n)
    remaining = g.component_count()
    for eid, u, v, _ in g.edges():
        if eid not in S:
            uf.union(u, v)
    return uf.count == remaining


class LedgerError(RuntimeError):
    pass


class QueryLedger:
    """Per-round query counts with phase labels."""

    def __init__(self):
        self.rounds: list[tuple[str, int]] = []
        self._open: str | None = None
        self._count = 0

    @property
    def total_rounds(self) -> int:
        return len(self.rounds)

    @property
    def total_queries(self) -> int:
        return sum(c for _, c in self.rounds)

    def begin_round(self, label: str = "round"):
        if self._open is not None:
            raise LedgerError("round already open")
        self._open = label
        self._count = 0

    def add_query(self):
        if self._open is None:
            raise LedgerError("no open round")
        self._count += 1

    def end_round(self) -> tuple[str, int]:
        if self._open is None:
            raise LedgerError("no open round")
        rec = (self._open, self._count)
        self.rounds.append(rec)
        self._open = None
        self._count = 0
        return rec

    def to_dict(self) -> dict:
        phases = []
        for label, count in self.rounds:
            if phases and phases[-1]["label"] == label:
                phases[-1]["rounds"].append(count)
            else:
                phases.append({"label": label, "rounds": [count]})
        return {
            "phases": phases,
            "total_rounds": self.total_rounds,
            "total_queries": self.total_queries,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class OracleSession:
    """Oracle access to a graphic or cographic matroid minor.

    The ground set is the edge-id set of the graph.  query() answers for the
    current minor and bills the open round (a round is opened implicitly for
    a lone query).  rank() and minor_graph() are test oracles computed
    directly from the graph; they never touch the ledger.
    """

    def __init__(self, g: Graph, kind: str):
        if kind not in (GRAPHIC, COGRAPHIC):
            raise ValueError(f"unknown matroid kind {kind!r}")
        self.graph = g
        self.kind = kind
        self.contracted: set[int] = set()
        self.deleted: set[int] = set()
        self.ledger = QueryLedger()
        # graphic fast path: union-find with the contracted edges pre-merged
        self._base_uf: UnionFind | None = None

    # -- element bookkeeping ------------------------------------------------

    def elements(self) -> list[int]:
        """Ground set of the current minor, ascending edge ids."""
        gone = self.contracted | self.deleted
        return [e for e in self.graph.edge_ids() if e not in gone]

    def _check_elements(self, S):
        S = set(S)
        for eid in S:
            if not self.graph.has_edge(eid):
                raise KeyError(f"unknown edge id {eid}")
            if eid in self.contracted or eid in self.deleted:
                raise ValueError(f"element {eid} is not in the current minor")
        return S

    def _ind_with_contracted(self, S: set[int]) -> bool:
        if self.kind == GRAPHIC:
            if self._base_uf is None:
                uf = UnionFind(self.graph.n)
                for eid in self.contracted:
                    u, v, _ = self.graph.edge(eid)
                    uf.union(u, v)
                self._base_uf = uf
            uf = self._base_uf.copy()
            for eid in S:
                u, v, _ = self.graph.edge(eid)
                if not uf.union(u, v):
                    return False
            return True
        return ind_cographic(self.graph, S | self.contracted)

    # -- the oracle ---------------------------------------------------------

    def query(self, S) -> bool:
        """Ind(S) in the current minor; billed to the open round."""
        S = self._check_elements(S)
        implicit = self.ledger._open is None
        if implicit:
            self.ledger.begin_round("adhoc")
        self.ledger.add_query()
        answer = self._ind_with_contracted(S)
        if implicit:
            self.ledger.end_round()
        return answer

    def begin_round(self, label: str = "round"):
        self.ledger.begin_round(label)

    def end_round(self) -> tuple[str, int]:
        return self.ledger.end_round()

    def run_round(self, label: str, queries) -> list[bool]:
        """One parallel round: all queries are fixed before any answer."""
        batches = [self._check_elements(S) for S in queries]
        self.ledger.begin_round(label)
        answers = []
        for S in batches:
            self.ledger.add_query()
            answers.append(self._ind_with_contracted(S))
        self.ledger.end_round()
        return answers

    # -- minor surgery ------------------------------------------------------

    def contract(self, S):
        """Move S into the contracted set; S union T must stay independent."""
        S = self._check_elements(S)
        if not self._ind_with_contracted(S):
            raise ValueError("cannot contract a dependent set")
        self.contracted |= S
        self._base_uf = None

    def delete(self, S):
        S = self._check_elements(S)
        self.deleted |= S

    # -- test oracles (no ledger) --------------------------------------------

    def minor_graph(self) -> Graph:
        """Graph view of the current minor (graphic: delete D, contract T;
        cographic: delete T, contract D).  Edge ids are preserved.

        Caveat: elements whose endpoints collapse together are dropped with
        the self-loops.  For the graphic kind those are loops of the matroid
        minor (1-element circuits); for the cographic kind they are coloops.
        rank() and min_circuit_size() account for them; this view does not.
        """
        if self.kind == GRAPHIC:
            h = self.graph.delete_edges(self.deleted)
            if self.contracted:
                h, _ = h.contract_edges(self.contracted)
            return h
        h = self.graph.delete_edges(self.contracted)
        if self.deleted:
            h, _ = h.contract_edges(self.deleted)
        return h

    def _graphic_rank_of(self, edge_set) -> int:
        uf = UnionFind(self.graph.n)
        r = 0
        for eid in sorted(edge_set):
            u, v, _ = self.graph.edge(eid)
            if uf.union(u, v):
                r += 1
        return r

    def rank(self) -> int:
        """Rank of the current minor, from the graph, not the oracle.

        Graphic: rank(E - D) - |T|.  Cographic: by the dual rank formula
        r*(X) = |X| + rank(E - X) - rank(E), which stays correct when the
        graph view of the minor loses coloops to self-loop dropping.
        """
        all_ids = set(self.graph.edge_ids())
        if self.kind == GRAPHIC:
            return self._graphic_rank_of(all_ids - self.deleted) - len(self.contracted)
        r_d = self._graphic_rank_of(self.deleted)
        r_not_t = self._graphic_rank_of(all_ids - self.contracted)
        return (
            len(all_ids)
            - len(self.deleted)
            - len(self.contracted)
            + r_d
            - r_not_t
        )

    def min_circuit_size(self) -> int | None:
        """Smallest circuit size of the current minor; None when independent.

        Graphic circuits are the minor's cycles, including 1-cycles from
        elements parallel to the contracted forest.  Cographic circuits are
        the minimal fully-surviving cuts, read off the minor graph (its
        dropped self-loops are coloops, which lie in no circuit).
        """
        if self.kind == GRAPHIC:
            uf = UnionFind(self.graph.n)
            for eid in self.contracted:
                u, v, _ = self.graph.edge(eid)
                uf.union(u, v)
            for eid in self.elements():
                u, v, _ = self.graph.edge(eid)
                if uf.find(u) == uf.find(v):
                    return 1
            g = self.minor_graph()
            return g.girth()
        h = self.minor_graph()
        best = None
        for comp in h.components():
            if len(comp) < 2:
                continue
            sub, _ = h.induced_subgraph(comp)
            val = int(sub.with_unit_weights().min_cut().value)
            if best is None or val < best:
                best = val
        return best
