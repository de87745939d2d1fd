"""Finding a matroid basis with batched independence queries.

The driver alternates two phases on an oracle session.  A sweep phase walks a
size window upward, listing every short circuit of the current minor and
deleting one element of each, until the minimum circuit size clears a
threshold.  A harvest phase then extracts one large independent set in a
single round and contracts it.  Listing is done either by querying all small
subsets outright or, for larger windows, by enumerating the support of a
bounded-independence sample space and running single-circuit detection on
every support vector.  Each subroutine batches its queries into one oracle
round, so the round ledger directly measures the parallel complexity.

Full-strength thresholds make the supports astronomically large, so the
constants are configuration: `Constants.paper()` records the full-strength
values, `Constants.desk()` is a scaled profile that keeps every enumeration
small enough to run, and every report lists the substitutions in force.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from fractions import Fraction
from itertools import combinations
from math import ceil, comb, floor, log2

from .matroid import COGRAPHIC, GRAPHIC, OracleSession, ind_cographic, ind_graphic
from .samplespace import (
    DEFAULT_ENUM_BUDGET,
    SampleSpace,
    SupportTooLargeError,
    almost_builder,
    build_almost_kwise,
    build_kwise,
    exact_builder,
    with_marginal,
)

MODE_ENUMERATE = "enumerate"
MODE_SAMPLE = "sample"


class ClaimViolation(AssertionError):
    """A subroutine broke a guarantee the caller relies on."""


class PreconditionError(ValueError):
    """The instance is outside the regime the subroutine is specified for."""


@dataclass(frozen=True)
class Constants:
    """Threshold and sample-space knobs, in units of log2.

    girth_mult / cut_mult scale the sweep stopping threshold (times log2 m).
    k_flis_mult and flis_delta_exp size the harvest-phase space (k at least 2,
    bias 1/m**exp with the denominator floored at 2).  c_cyc / c_cut set the
    listing marginal exponent ceil(c * log2(m) / ell); k_list_mult sizes the
    listing independence order; small_ell_cutoff bounds the brute-subsets
    regime.  enum_budget caps any single support enumeration or subset batch.
    """

    girth_mult: float
    cut_mult: float
    k_flis_mult: float
    flis_delta_exp: float
    c_cyc: float
    c_cut: float
    k_list_mult: float
    list_delta_exp: float
    small_ell_cutoff: int = 100
    enum_budget: int = DEFAULT_ENUM_BUDGET

    @classmethod
    def paper(cls) -> "Constants":
        """Full-strength profile; listings and harvests will not fit a desk."""
        return cls(
            girth_mult=20.0,
            cut_mult=20.0,
            k_flis_mult=40.0,
            flis_delta_exp=200.0,
            c_cyc=200.0,
            c_cut=200.0,
            k_list_mult=2.0,
            list_delta_exp=200.0,
        )

    @classmethod
    def desk(cls) -> "Constants":
        """Scaled-down profile sized for exhaustive runs on small graphs."""
        return cls(
            girth_mult=0.5,
            cut_mult=0.5,
            k_flis_mult=0.0,
            flis_delta_exp=0.2,
            c_cyc=1.0,
            c_cut=1.0,
            k_list_mult=2.0,
            list_delta_exp=0.2,
        )

    # -- derived parameters ---------------------------------------------------

    def girth_threshold(self, m: int) -> float:
        # floored at 1: the window at ell = 1 must always be sweepable, since
        # single-element circuits can never join an independent set
        return max(1.0, self.girth_mult * log2(max(m, 2)))

    def cut_threshold(self, m: int) -> float:
        return max(1.0, self.cut_mult * log2(max(m, 2)))

    def k_flis(self, m: int) -> int:
        return max(2, ceil(self.k_flis_mult * log2(max(m, 2))))

    def flis_delta(self, m: int) -> Fraction:
        return Fraction(1, max(2, round(max(m, 2) ** self.flis_delta_exp)))

    def list_marginal_exp(self, m: int, ell: int, kind: str) -> int:
        c = self.c_cyc if kind == GRAPHIC else self.c_cut
        return max(1, ceil(c * log2(max(m, 2)) / ell))

    def k_list(self, ell: int) -> int:
        return max(2, ceil(self.k_list_mult * ell))

    def list_delta(self, m: int) -> Fraction:
        return Fraction(1, max(2, round(max(m, 2) ** self.list_delta_exp)))

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def deviations(self) -> list[str]:
        """Substitutions relative to the full-strength profile."""
        ref = Constants.paper()
        out = []
        for f in fields(self):
            mine, theirs = getattr(self, f.name), getattr(ref, f.name)
            if mine != theirs:
                out.append(f"{f.name}: full-strength {theirs}, using {mine}")
        return out


@dataclass(frozen=True)
class CircuitList:
    """Circuits recovered for one size window, in discovery order."""

    circuits: tuple[frozenset[int], ...]
    size_window: tuple[int, int]
    mode: str  # "brute" | "enumerate" | "sample"
    queries: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "circuits": [sorted(c) for c in self.circuits],
                "size_window": list(self.size_window),
                "mode": self.mode,
                "queries": self.queries,
            },
            sort_keys=True,
        )


# -- single-circuit detection --------------------------------------------------


def _interpret_detection(elements: list[int], answers: list[bool]):
    """Shared readout: answers = [Ind(E'), Ind(E'-e) for e in elements]."""
    if answers[0]:
        return None, "none"
    circuit = frozenset(e for e, ok in zip(elements, answers[1:]) if ok)
    if not circuit:
        # every single removal stays dependent, so two or more circuits exist:
        # an element of only one of them leaves the other intact, and a shared
        # element leaves the circuit their elimination produces
        return None, "multiple"
    return circuit, "unique"


def detect_single_circuit(session: OracleSession, elements):
    """Identify the circuit of a set that contains exactly one.

    One round of |E'|+1 queries: the whole set, then each single-element
    removal.  When the set holds exactly one circuit, that circuit is the
    elements whose removal makes the rest independent.  Returns
    (circuit, "unique"), or (None, "none" | "multiple").
    """
    elems = sorted(elements)
    queries = [set(elems)] + [set(elems) - {e} for e in elems]
    answers = session.run_round("detect", queries)
    return _interpret_detection(elems, answers)


def delete_circuits(ground_order, elements, circuits):
    """Remove the highest-index element of every circuit, simultaneously.

    Index means position in ground_order.  Distinct circuits may nominate the
    same element; the nominated set is removed in one shot.  Rank is
    preserved: processing nominees in descending index order, each one still
    lies inside its own circuit when removed (any earlier nominee in that
    circuit would have had a higher index than the circuit's maximum).
    """
    rank_of = {e: i for i, e in enumerate(ground_order)}
    elements = set(elements)
    doomed = set()
    for circuit in circuits:
        if not set(circuit) <= elements:
            raise ValueError(f"circuit {sorted(circuit)} is not within the element set")
        if not circuit:
            raise ValueError("empty circuit")
        doomed.add(max(circuit, key=lambda e: rank_of[e]))
    return elements - doomed


# -- circuit listing -------------------------------------------------------------


def _selected(elements: list[int], vector: int) -> set[int]:
    return {e for i, e in enumerate(elements) if (vector >> i) & 1}


def _support_vectors(space: SampleSpace, mode: str, budget: int, sample_count: int, seed: int):
    if mode == MODE_ENUMERATE:
        return list(space.iter_support(budget))
    if mode == MODE_SAMPLE:
        return space.sample_vectors(sample_count, seed)
    raise ValueError(f"unknown mode {mode!r}")


def _list_circuits(
    session: OracleSession,
    ell: int,
    m: int,
    constants: Constants,
    threshold: float,
    round_label: str,
    mode: str,
    sample_count: int,
    seed: int,
) -> CircuitList:
    if ell < 1:
        raise PreconditionError("window start must be >= 1")
    if ell > threshold:
        raise PreconditionError(
            f"window start {ell} exceeds the sweep threshold {threshold:.2f}"
        )
    window_hi = floor(1.01 * ell)
    elems = sorted(session.elements())

    if ell <= constants.small_ell_cutoff:
        # brute regime: query every subset up to just past the window, then
        # read circuits off as the minimal dependent sets
        cap = min(ceil(1.01 * ell), len(elems))
        total = sum(comb(len(elems), s) for s in range(1, cap + 1))
        if total > constants.enum_budget:
            raise SupportTooLargeError(max(total, 2).bit_length(), constants.enum_budget)
        queries = []
        for size in range(1, cap + 1):
            queries.extend(set(c) for c in combinations(elems, size))
        answers = session.run_round(round_label, queries)
        independent = {
            frozenset(q): ok for q, ok in zip(queries, answers)
        }
        independent[frozenset()] = True
        found = []
        for q, ok in independent.items():
            if ok or not q or len(q) > window_hi:
                continue
            if all(independent[q - {e}] for e in q):
                found.append(q)
        found.sort(key=lambda c: (len(c), sorted(c)))
        return CircuitList(tuple(found), (ell, window_hi), "brute", len(queries))

    # sampled regime: one round holding a full detection batch per support
    # vector of the window's bounded-independence space
    exp = constants.list_marginal_exp(m, ell, session.kind)
    k = constants.k_list(ell)
    if session.kind == GRAPHIC:
        space = with_marginal(almost_builder, len(elems), k, constants.list_delta(m), exp)
    else:
        space = with_marginal(exact_builder, len(elems), k, Fraction(0), exp)
    vectors = _support_vectors(space, mode, constants.enum_budget, sample_count, seed)
    queries = []
    batches = []
    for v in vectors:
        sel = sorted(_selected(elems, v))
        batches.append(sel)
        queries.append(set(sel))
        queries.extend(set(sel) - {e} for e in sel)
    answers = session.run_round(round_label, queries)
    found = []
    seen = set()
    pos = 0
    for sel in batches:
        take = len(sel) + 1
        circuit, status = _interpret_detection(sel, answers[pos : pos + take])
        pos += take
        if status == "unique" and len(circuit) <= window_hi and circuit not in seen:
            seen.add(circuit)
            found.append(circuit)
    list_mode = MODE_ENUMERATE if mode == MODE_ENUMERATE else MODE_SAMPLE
    return CircuitList(tuple(found), (ell, window_hi), list_mode, len(queries))


def list_short_cycles(
    session: OracleSession,
    ell: int,
    m: int,
    constants: Constants | None = None,
    mode: str = MODE_ENUMERATE,
    sample_count: int = 1024,
    seed: int = 0,
) -> CircuitList:
    """All cycles of the current minor with size in [ell, floor(1.01 ell)]."""
    if session.kind != GRAPHIC:
        raise ValueError("cycle listing needs a graphic session")
    constants = constants or Constants.desk()
    return _list_circuits(
        session, ell, m, constants, constants.girth_threshold(m),
        "list-cycles", mode, sample_count, seed,
    )


def list_small_cuts(
    session: OracleSession,
    ell: int,
    m: int,
    constants: Constants | None = None,
    mode: str = MODE_ENUMERATE,
    sample_count: int = 1024,
    seed: int = 0,
) -> CircuitList:
    """All minimal fully-surviving cuts with size in [ell, floor(1.01 ell)]."""
    if session.kind != COGRAPHIC:
        raise ValueError("cut listing needs a cographic session")
    constants = constants or Constants.desk()
    return _list_circuits(
        session, ell, m, constants, constants.cut_threshold(m),
        "list-cuts", mode, sample_count, seed,
    )


# -- large independent sets ------------------------------------------------------


def _find_large_independent_set(
    session: OracleSession,
    m: int,
    constants: Constants,
    threshold: float,
    round_label: str,
    mode: str,
    sample_count: int,
    seed: int,
    check_precondition: bool,
) -> set[int]:
    elems = sorted(session.elements())
    if check_precondition:
        mc = session.min_circuit_size()
        if mc is not None and mc <= threshold:
            raise PreconditionError(
                f"minimum circuit size {mc} is within the sweep threshold "
                f"{threshold:.2f}; sweep first"
            )
    k = constants.k_flis(m)
    if session.kind == GRAPHIC:
        space = build_almost_kwise(
            len(elems), k, constants.flis_delta(m), budget=constants.enum_budget
        )
    else:
        space = build_kwise(len(elems), k)
    vectors = _support_vectors(space, mode, constants.enum_budget, sample_count, seed)
    # the whole element set rides along as query zero so an already
    # independent minor is taken in full
    queries = [set(elems)] + [_selected(elems, v) for v in vectors]
    answers = session.run_round(round_label, queries)
    if answers[0]:
        return set(elems)
    best: set[int] = set()
    for q, ok in zip(queries[1:], answers[1:]):
        if ok and len(q) > len(best):
            best = q
    return best


def find_large_independent_set_graphic(
    session: OracleSession,
    m: int | None = None,
    constants: Constants | None = None,
    mode: str = MODE_ENUMERATE,
    sample_count: int = 1024,
    seed: int = 0,
    check_precondition: bool = True,
) -> set[int]:
    """One-round harvest of a large forest from a minor with no short cycle."""
    if session.kind != GRAPHIC:
        raise ValueError("needs a graphic session")
    constants = constants or Constants.desk()
    if m is None:
        m = len(session.elements())
    return _find_large_independent_set(
        session, m, constants, constants.girth_threshold(m),
        "flis-graphic", mode, sample_count, seed, check_precondition,
    )


def find_large_independent_set_cographic(
    session: OracleSession,
    m: int | None = None,
    constants: Constants | None = None,
    mode: str = MODE_ENUMERATE,
    sample_count: int = 1024,
    seed: int = 0,
    check_precondition: bool = True,
) -> set[int]:
    """One-round harvest of a large co-independent set (complement spans)."""
    if session.kind != COGRAPHIC:
        raise ValueError("needs a cographic session")
    constants = constants or Constants.desk()
    if m is None:
        m = len(session.elements())
    return _find_large_independent_set(
        session, m, constants, constants.cut_threshold(m),
        "flis-cographic", mode, sample_count, seed, check_precondition,
    )


# -- the driver --------------------------------------------------------------------


@dataclass(frozen=True)
class BasisReport:
    basis: tuple[int, ...]
    rank: int
    kind: str
    mode: str  # "derandomized" | "NON-DERANDOMIZED"
    rounds_used: int
    queries_total: int
    queries_per_round: tuple[int, ...]
    ledger: dict
    outer_iterations: int
    phase_trace: tuple[dict, ...]
    constants_used: dict
    deviations: tuple[str, ...]
    verified: bool

    def round_bound_constant(self) -> float:
        """Measured rounds over log2(m) * log2 log2(m), the report's C_r."""
        m = self.ledger.get("ground_size", 0)
        denom = max(log2(max(m, 2)) * log2(max(log2(max(m, 2)), 2)), 1.0)
        return self.rounds_used / denom

    def to_dict(self) -> dict:
        return {
            "basis": list(self.basis),
            "rank": self.rank,
            "kind": self.kind,
            "mode": self.mode,
            "rounds": self.rounds_used,
            "queries": list(self.queries_per_round),
            "queries_total": self.queries_total,
            "phases": self.ledger["phases"],
            "outer_iterations": self.outer_iterations,
            "phase_trace": list(self.phase_trace),
            "constants_used": self.constants_used,
            "deviations": list(self.deviations),
            "round_bound_constant": round(self.round_bound_constant(), 6),
            "verified": self.verified,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def find_basis(
    session: OracleSession,
    m: int | None = None,
    constants: Constants | None = None,
    mode: str = MODE_ENUMERATE,
    sample_count: int = 1024,
    seed: int = 0,
) -> BasisReport:
    """Assemble a basis of the session's matroid, counting rounds and queries.

    Repeats until no elements remain: sweep the circuit-size window upward
    from 1, deleting one element of every listed circuit, until the minimum
    circuit size clears the threshold; then harvest one independent set and
    contract it.  Thresholds always use the original ground-set size.  The
    returned basis is re-verified against the graph directly (independence
    plus full rank), outside the query ledger.
    """
    if session.contracted or session.deleted:
        raise ValueError("needs a fresh session")
    constants = constants or Constants.desk()
    kind = session.kind
    if m is None:
        m = len(session.elements())
    ground_order = sorted(session.elements())
    if kind == GRAPHIC:
        threshold = constants.girth_threshold(m)
        lister = list_short_cycles
        harvester = find_large_independent_set_graphic
    else:
        threshold = constants.cut_threshold(m)
        lister = list_small_cuts
        harvester = find_large_independent_set_cographic

    trace: list[dict] = []
    outer = 0
    while session.elements():
        outer += 1
        sweep_steps = []
        ell = 1
        while ell <= threshold and session.elements():
            clist = lister(
                session, ell, m, constants,
                mode=mode, sample_count=sample_count, seed=seed,
            )
            rank_before = session.rank()
            kept = delete_circuits(ground_order, session.elements(), clist.circuits)
            removed = sorted(set(session.elements()) - kept)
            if removed:
                session.delete(removed)
            if session.rank() != rank_before:
                raise ClaimViolation(
                    "deleting one element per listed circuit changed the rank"
                )
            sweep_steps.append(
                {
                    "ell": ell,
                    "window": list(clist.size_window),
                    "circuits": len(clist.circuits),
                    "deleted": removed,
                    "queries": clist.queries,
                }
            )
            ell = max(ell + 1, ceil(1.01 * ell))
        if not session.elements():
            trace.append({"outer": outer, "sweep": sweep_steps, "harvested": 0})
            break
        got = harvester(
            session, m, constants,
            mode=mode, sample_count=sample_count, seed=seed,
        )
        if not got:
            raise ClaimViolation(
                "large-independent-set harvest came back empty on a nonempty minor"
            )
        session.contract(got)
        trace.append({"outer": outer, "sweep": sweep_steps, "harvested": len(got)})

    basis = set(session.contracted)
    base_ind = ind_graphic if kind == GRAPHIC else ind_cographic
    fresh = OracleSession(session.graph, kind)
    verified = base_ind(session.graph, basis) and len(basis) == fresh.rank()

    ledger = session.ledger.to_dict()
    ledger["ground_size"] = m
    per_round = tuple(count for _, count in session.ledger.rounds)
    dev = list(constants.deviations())
    if mode != MODE_ENUMERATE:
        dev.append(
            f"NON-DERANDOMIZED: sampled {sample_count} support points per space "
            "instead of enumerating"
        )
    return BasisReport(
        basis=tuple(sorted(basis)),
        rank=len(basis),
        kind=kind,
        mode="derandomized" if mode == MODE_ENUMERATE else "NON-DERANDOMIZED",
        rounds_used=session.ledger.total_rounds,
        queries_total=session.ledger.total_queries,
        queries_per_round=per_round,
        ledger=ledger,
        outer_iterations=outer,
        phase_trace=tuple(trace),
        constants_used=constants.to_dict(),
        deviations=tuple(dev),
        verified=verified,
    )
