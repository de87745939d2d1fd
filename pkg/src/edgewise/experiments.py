"""Empirical verification harness over edge-sampling sample spaces.

Each experiment walks a bit-vector distribution whose coordinates are a
graph's edges (bit set = edge kept), checks a structural property per
vector, and reports exact rational rates with up to ten failure witnesses.
Enumeration mode visits every seed of the space once, so rates are exact
counts over the support; sample mode is a seeded Monte Carlo estimate and
says so in the report.

Also here: the named instance generators the experiments and the CLI run
on, and the union-bound oracle that predicts a floor for the component
preservation rate from the cut structure.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .basisfind import PreconditionError
from .graph import Graph
from .reweight import reweight_min_cut
from .samplespace import (
    DEFAULT_ENUM_BUDGET,
    SampleSpace,
    _rows_to_words,
    build_kwise,
    group_heterogeneous,
    verify_independence,
)
from .spectral import edge_form_checker, leverage_scores, sparsify_rates

_WORD = 64
_POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)

__all__ = [
    "ExperimentReport",
    "ExperimentSpec",
    "conditional_bias_check",
    "connectivity_experiment",
    "cyclefree_experiment",
    "gen_graph",
    "graph_summary",
    "independence_strength_sweep",
    "instance_label",
    "load_graph",
    "reweight_then_connectivity",
    "sparsify_experiment",
    "union_bound_component_floor",
    "unique_cut_survival_experiment",
    "unique_cycle_survival_experiment",
]


# -- instance generators -----------------------------------------------------


def _require_int(params: Mapping, key: str, low: int, default=None) -> int:
    if key not in params:
        if default is not None:
            return default
        raise ValueError(f"missing parameter {key!r}")
    try:
        val = int(params[key])
    except (TypeError, ValueError):
        raise ValueError(f"parameter {key!r} must be an integer") from None
    if val < low:
        raise ValueError(f"parameter {key!r} must be >= {low}")
    return val


def _gen_cycle(params: Mapping, seed: int) -> Graph:
    length = _require_int(params, "length", 2)
    return Graph(length, [(i, (i + 1) % length) for i in range(length)])


def _gen_theta(params: Mapping, seed: int) -> Graph:
    """Two hub vertices joined by internally disjoint paths."""
    lengths = params.get("lengths")
    if lengths is None:
        raise ValueError("missing parameter 'lengths'")
    lengths = [int(x) for x in lengths]
    if len(lengths) < 2 or any(x < 1 for x in lengths):
        raise ValueError("'lengths' needs >= 2 path lengths, each >= 1")
    edges = []
    nxt = 2
    for ln in lengths:
        chain = [0] + list(range(nxt, nxt + ln - 1)) + [1]
        nxt += ln - 1
        edges.extend((chain[i], chain[i + 1]) for i in range(ln))
    return Graph(nxt, edges)


def _gen_complete(params: Mapping, seed: int) -> Graph:
    h = _require_int(params, "vertices", 1)
    return Graph(h, [(u, v) for u in range(h) for v in range(u + 1, h)])


def _gen_multi_cycle(params: Mapping, seed: int) -> Graph:
    copies = _require_int(params, "copies", 1)
    return _gen_cycle(params, seed).duplicate_edges(copies)


def _gen_expander_like(params: Mapping, seed: int) -> Graph:
    """Union of seeded random Hamiltonian cycles (plus a matching when the
    degree is odd): a d-regular multigraph without self-loops."""
    n = _require_int(params, "vertices", 3)
    d = _require_int(params, "degree", 1)
    if d % 2 == 1 and n % 2 == 1:
        raise ValueError("odd degree needs an even vertex count")
    rng = random.Random(f"expander-{n}-{d}-{seed}")
    edges = []
    for _ in range(d // 2):
        perm = list(range(n))
        rng.shuffle(perm)
        edges.extend((perm[i], perm[(i + 1) % n]) for i in range(n))
    if d % 2 == 1:
        perm = list(range(n))
        rng.shuffle(perm)
        edges.extend((perm[2 * i], perm[2 * i + 1]) for i in range(n // 2))
    return Graph(n, edges)


def _gen_subdivided(params: Mapping, seed: int) -> Graph:
    base = _gen_complete(params, seed)
    pieces = _require_int(params, "pieces", 1)
    return base.subdivide(pieces)


def _gen_dumbbell(params: Mapping, seed: int) -> Graph:
    left = _require_int(params, "left", 1)
    right = _require_int(params, "right", 1, default=left)
    edges = [(u, v) for u in range(left) for v in range(u + 1, left)]
    edges += [
        (left + u, left + v) for u in range(right) for v in range(u + 1, right)
    ]
    edges.append((0, left))  # the bridge
    return Graph(left + right, edges)


def _gen_custom(params: Mapping, seed: int) -> Graph:
    path = params.get("path")
    if not path:
        raise ValueError("missing parameter 'path'")
    return load_graph(str(path))


_FAMILIES = {
    "cycle": _gen_cycle,
    "theta": _gen_theta,
    "complete": _gen_complete,
    "multi_cycle": _gen_multi_cycle,
    "expander_like": _gen_expander_like,
    "subdivided": _gen_subdivided,
    "dumbbell": _gen_dumbbell,
    "custom": _gen_custom,
}


def gen_graph(family: str, params: Mapping | None = None, *, seed: int = 0) -> Graph:
    """Build a named instance; deterministic given (family, params, seed)."""
    if family not in _FAMILIES:
        known = ", ".join(sorted(_FAMILIES))
        raise ValueError(f"unknown family {family!r} (known: {known})")
    return _FAMILIES[family](params or {}, seed)


def instance_label(family: str, params: Mapping | None = None, seed: int = 0) -> str:
    parts = [f"{k}={params[k]}" for k in sorted(params)] if params else []
    if family == "expander_like" or seed:
        parts.append(f"seed={seed}")
    return f"{family}({','.join(parts)})"


def load_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return Graph.from_json(text)
    return Graph.from_text(text)


def graph_summary(g: Graph) -> dict:
    """Measured shape of an instance: size, components, min cut, girth."""
    cut = None
    if g.n >= 2:
        cut = _rat(g.min_cut().value)
    return {
        "vertices": g.n,
        "edges": g.m,
        "components": g.component_count(),
        "min_cut": cut,
        "girth": g.girth(),
        "unit_weights": all(w == 1 for _, _, _, w in g.edges()),
    }


# -- report plumbing ----------------------------------------------------------


def _rat(f: Fraction) -> str:
    f = Fraction(f)
    return f"{f.numerator}/{f.denominator}"


def _const(name: str, full, used) -> tuple[str, str, str]:
    return (name, str(full), str(used))


def _deviation_lines(constants: Sequence[tuple[str, str, str]]) -> tuple[str, ...]:
    return tuple(
        f"{name}: full-strength {full}, using {used}"
        for name, full, used in constants
        if full != used
    )


@dataclass(frozen=True)
class ExperimentSpec:
    """What was run: instance, property, constants, space, evaluation mode."""

    generator: str
    theorem: str
    constants: tuple  # (name, full_strength, used) triples
    space: dict  # space descriptor (exact rationals inside)
    mode: str
    trials: int | None = None
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "generator": self.generator,
            "theorem": self.theorem,
            "constants": [list(c) for c in self.constants],
            "space": self.space,
            "mode": self.mode,
            "trials": self.trials,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class ExperimentReport:
    spec: ExperimentSpec
    trials: int
    successes: int
    rates: dict  # name -> Fraction; "success" always present
    failure_witnesses: tuple
    deviations: tuple
    notes: tuple = ()
    extras: dict | None = None

    @property
    def success_rate(self) -> Fraction:
        return self.rates["success"]

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "counts": {"trials": self.trials, "successes": self.successes},
            "rates": {k: _rat(v) for k, v in sorted(self.rates.items())},
            "witnesses": list(self.failure_witnesses),
            "deviations": list(self.deviations),
            "notes": list(self.notes),
            "extras": self.extras or {},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _mode_notes(mode: str, trials: int) -> tuple[str, ...]:
    if mode != "sample":
        return ()
    # two-sided Hoeffding at 95%
    hw = math.sqrt(math.log(2 / 0.05) / (2 * trials))
    return (
        "sampled run, not a support enumeration; rates are estimates",
        f"hoeffding 95% half-width {hw:.4f} at {trials} trials",
    )


# -- vectorized support evaluation --------------------------------------------


def _support_words(space: SampleSpace, mode: str, trials, seed, budget) -> np.ndarray:
    if mode == "enumerate":
        return space.support_words(DEFAULT_ENUM_BUDGET if budget is None else budget)
    if mode == "sample":
        if not trials or trials < 1:
            raise ValueError("sample mode needs trials >= 1")
        vecs = space.sample_vectors(trials, seed)
        return _rows_to_words(vecs, space.params.n)
    raise ValueError(f"unknown mode {mode!r}")


def _masks(positions: Iterable[int], words: int) -> list[tuple[int, np.uint64]]:
    by_word: dict[int, int] = {}
    for p in positions:
        w, off = divmod(p, _WORD)
        by_word[w] = by_word.get(w, 0) | (1 << off)
    if words <= max(by_word, default=0):
        raise ValueError("coordinate outside the word matrix")
    return [(w, np.uint64(m)) for w, m in sorted(by_word.items())]


def _rows_all_set(words: np.ndarray, positions) -> np.ndarray:
    """Boolean row mask: every listed coordinate is 1."""
    out = np.ones(words.shape[0], dtype=bool)
    for w, m in _masks(positions, words.shape[1]):
        out &= (words[:, w] & m) == m
    return out


def _rows_none_set(words: np.ndarray, positions) -> np.ndarray:
    zero = np.uint64(0)
    out = np.ones(words.shape[0], dtype=bool)
    for w, m in _masks(positions, words.shape[1]):
        out &= (words[:, w] & m) == zero
    return out


def _row_popcounts(words: np.ndarray, n: int) -> np.ndarray:
    tail = n % _WORD
    view = words
    if tail:
        # mask off bits beyond coordinate n-1 in the last word
        view = words.copy()
        view[:, -1] &= np.uint64((1 << tail) - 1)
    return _POP8[view.view(np.uint8)].reshape(words.shape[0], -1).sum(
        axis=1, dtype=np.int64
    )


def _row_to_int(words: np.ndarray, i: int) -> int:
    v = 0
    for j in range(words.shape[1] - 1, -1, -1):
        v = (v << _WORD) | int(words[i, j])
    return v


def _bit_matrix(words: np.ndarray, n: int) -> np.ndarray:
    """(rows, n) float matrix of the coordinate bits."""
    out = np.empty((words.shape[0], n))
    one = np.uint64(1)
    for j in range(n):
        w, off = divmod(j, _WORD)
        out[:, j] = ((words[:, w] >> np.uint64(off)) & one).astype(np.float64)
    return out


def _kept_ids(vector: int, order: Sequence[int]) -> list[int]:
    return [eid for j, eid in enumerate(order) if (vector >> j) & 1]


def _witnesses(words, order, fail_rows, reason_fn, cap: int = 10) -> tuple:
    out = []
    for i in fail_rows[:cap]:
        i = int(i)
        vec = _row_to_int(words, i)
        out.append(
            {
                "row": i,
                "vector": vec,
                "kept": _kept_ids(vec, order),
                "reason": reason_fn(i),
            }
        )
    return tuple(out)


def _check_space_matches(g: Graph, space: SampleSpace) -> list[int]:
    order = g.edge_ids()
    if space.params.n != len(order):
        raise ValueError(
            f"space has {space.params.n} coordinates for {len(order)} edges"
        )
    return order


# -- union-bound oracle --------------------------------------------------------


def union_bound_component_floor(g: Graph, space: SampleSpace) -> Fraction:
    """Predicted floor for the component preservation rate.

    Components change exactly when some enumerated cut loses every edge.
    For one cut, the probability all its edges drop is at most the product
    of the min(k, |cut|) smallest per-edge drop probabilities, plus the
    space's independence defect delta (an event over <= k coordinates).
    Subtracting the sum over all distinct cut edge sets gives the floor;
    clamped at zero.  Exact rational.
    """
    order = _check_space_matches(g, space)
    pos = {eid: j for j, eid in enumerate(order)}
    marg = space.coordinate_marginals()
    k = space.params.k
    delta = space.params.delta
    total_fail = Fraction(0)
    for eids, _, _ in g.enumerate_cuts():
        drops = sorted(1 - marg[pos[e]] for e in eids)[: min(k, len(eids))]
        pr = Fraction(1)
        for q in drops:
            pr *= q
        total_fail += pr + delta
    floor = 1 - total_fail
    return floor if floor > 0 else Fraction(0)


# -- the experiments -----------------------------------------------------------


def connectivity_experiment(
    g: Graph,
    space: SampleSpace,
    *,
    mode: str = "enumerate",
    trials: int | None = None,
    seed: int = 0,
    budget: int | None = None,
    generator: str | None = None,
) -> ExperimentReport:
    """Rate at which the kept subgraph preserves the components of g.

    For disconnected inputs success means the component partition is
    unchanged, not that the sample is connected.  When g is small enough
    to enumerate its cuts the check runs vectorized over the support
    (components change iff some cut edge set is fully dropped) and the
    report carries the union-bound floor; otherwise each vector is checked
    by union-find.
    """
    order = _check_space_matches(g, space)
    words = _support_words(space, mode, trials, seed, budget)
    n_rows = words.shape[0]
    extras: dict = {}
    floor = Fraction(0)

    if g.n <= 20:
        cuts = g.enumerate_cuts()
        ok = np.ones(n_rows, dtype=bool)
        dead_by_cut = []
        for eids, _, _ in cuts:
            dead = _rows_none_set(words, [order.index(e) for e in sorted(eids)])
            dead_by_cut.append((eids, dead))
            ok &= ~dead
        extras["cut_count"] = len(cuts)
        floor = union_bound_component_floor(g, space)

        def reason(i: int) -> str:
            for eids, dead in dead_by_cut:
                if dead[i]:
                    return f"cut {sorted(eids)} fully dropped"
            return "unreachable"

    else:
        base = g.components()
        flags = []
        for i in range(n_rows):
            kept = _kept_ids(_row_to_int(words, i), order)
            flags.append(g.keep_edges(kept).components() == base)
        ok = np.array(flags, dtype=bool)

        def reason(i: int) -> str:
            return "component partition changed"

    successes = int(ok.sum())
    fail_rows = np.nonzero(~ok)[0]
    m = len(order)
    k_full = 2 * max(1, math.ceil(math.log2(max(m, 2))))
    constants = (
        _const("independence_order", k_full, space.params.k),
        _const("marginal", Fraction(1, 2), space.params.marginal),
        _const("independence_defect", 0, space.params.delta),
    )
    spec = ExperimentSpec(
        generator=generator or f"custom(n={g.n},m={g.m})",
        theorem="kept subgraph preserves components",
        constants=constants,
        space=space.descriptor(),
        mode=mode,
        trials=None if mode == "enumerate" else n_rows,
        seed=None if mode == "enumerate" else seed,
    )
    return ExperimentReport(
        spec=spec,
        trials=n_rows,
        successes=successes,
        rates={
            "success": Fraction(successes, n_rows),
            "union_bound_floor": floor,
        },
        failure_witnesses=_witnesses(words, order, fail_rows, reason),
        deviations=_deviation_lines(constants),
        notes=_mode_notes(mode, n_rows),
        extras=extras,
    )


def cyclefree_experiment(
    g: Graph,
    space: SampleSpace,
    *,
    mode: str = "enumerate",
    trials: int | None = None,
    seed: int = 0,
    budget: int | None = None,
    generator: str | None = None,
) -> ExperimentReport:
    """Rates of acyclicity and of keeping at least a tenth of the edges.

    success = both at once (the existence claim is success rate > 0, which
    the caller asserts).  Acyclicity runs vectorized against the cycle list
    when the graph is small enough to enumerate cycles; the edge count
    check is a popcount either way.
    """
    order = _check_space_matches(g, space)
    words = _support_words(space, mode, trials, seed, budget)
    n_rows = words.shape[0]
    m = len(order)

    floor = -(-m // 10)  # >= m/10 edges, integer form
    big_enough = _row_popcounts(words, m) >= floor

    if m <= 40:
        cycles = g.enumerate_cycles()
        acyclic = np.ones(n_rows, dtype=bool)
        alive_by_cycle = []
        for cyc in cycles:
            alive = _rows_all_set(words, [order.index(e) for e in sorted(cyc)])
            alive_by_cycle.append((cyc, alive))
            acyclic &= ~alive

        def reason(i: int) -> str:
            for cyc, alive in alive_by_cycle:
                if alive[i]:
                    return f"cycle {sorted(cyc)} survived"
            return "fewer than the edge floor survived"

    else:
        flags = []
        for i in range(n_rows):
            kept = _kept_ids(_row_to_int(words, i), order)
            flags.append(g.keep_edges(kept).is_forest())
        acyclic = np.array(flags, dtype=bool)

        def reason(i: int) -> str:
            if not acyclic[i]:
                return "a cycle survived"
            return "fewer than the edge floor survived"

    ok = acyclic & big_enough
    successes = int(ok.sum())
    fail_rows = np.nonzero(~ok)[0]
    k_full = 2 * max(1, math.ceil(math.log2(max(m, 2))))
    delta_full = Fraction(1, max(m, 2) ** 200)
    constants = (
        _const("independence_order", k_full, space.params.k),
        _const("marginal", Fraction(1, 2), space.params.marginal),
        _const("independence_defect", delta_full, space.params.delta),
    )
    spec = ExperimentSpec(
        generator=generator or f"custom(n={g.n},m={g.m})",
        theorem="kept subgraph is cycle-free and not too small",
        constants=constants,
        space=space.descriptor(),
        mode=mode,
        trials=None if mode == "enumerate" else n_rows,
        seed=None if mode == "enumerate" else seed,
    )
    return ExperimentReport(
        spec=spec,
        trials=n_rows,
        successes=successes,
        rates={
            "success": Fraction(successes, n_rows),
            "acyclic": Fraction(int(acyclic.sum()), n_rows),
            "enough_edges": Fraction(int(big_enough.sum()), n_rows),
        },
        failure_witnesses=_witnesses(words, order, fail_rows, reason),
        deviations=_deviation_lines(constants),
        notes=_mode_notes(mode, n_rows),
        extras={"edge_floor": floor},
    )


def _window_check(size: int, ell: int, what: str) -> None:
    # integer-exact test of ell <= size <= 1.01 * ell
    if not (ell <= size and 100 * size <= 101 * ell):
        raise ValueError(
            f"{what} size {size} outside the sampling window [{ell}, 1.01*{ell}]"
        )


def unique_cut_survival_experiment(
    g: Graph,
    cut_edges,
    space: SampleSpace,
    *,
    mode: str = "enumerate",
    trials: int | None = None,
    seed: int = 0,
    budget: int | None = None,
    generator: str | None = None,
) -> ExperimentReport:
    """Rate at which the chosen cut survives while every other cut loses
    an edge.

    The chosen edge set must be one of the graph's cut edge sets, with size
    inside the window [l, 1.01 l] for l the smallest cut cardinality.  Cut
    enumeration is the checking oracle, so the graph must be small enough
    for it.
    """
    order = _check_space_matches(g, space)
    target = frozenset(cut_edges)
    cuts = g.enumerate_cuts()
    all_sets = [eids for eids, _, _ in cuts]
    if target not in all_sets:
        raise ValueError("the chosen edge set is not a cut of the graph")
    ell = min(len(eids) for eids in all_sets)
    _window_check(len(target), ell, "cut")

    words = _support_words(space, mode, trials, seed, budget)
    n_rows = words.shape[0]
    kept_target = _rows_all_set(words, [order.index(e) for e in sorted(target)])
    ok = kept_target.copy()
    alive_others = []
    for eids in all_sets:
        if eids == target:
            continue
        alive = _rows_all_set(words, [order.index(e) for e in sorted(eids)])
        alive_others.append((eids, alive))
        ok &= ~alive

    successes = int(ok.sum())
    fail_rows = np.nonzero(~ok)[0]

    def reason(i: int) -> str:
        if not kept_target[i]:
            return "chosen cut lost an edge"
        for eids, alive in alive_others:
            if alive[i]:
                return f"rival cut {sorted(eids)} also survived"
        return "unreachable"

    m = len(order)
    log_m = max(1, math.ceil(math.log2(max(m, 2))))
    constants = (
        _const("independence_order", 2 * math.ceil(1.01 * ell), space.params.k),
        _const(
            "marginal_exponent",
            math.ceil(10 * log_m / ell),
            space.params.p_log_inv,
        ),
        _const("independence_defect", 0, space.params.delta),
    )
    spec = ExperimentSpec(
        generator=generator or f"custom(n={g.n},m={g.m})",
        theorem="chosen cut survives alone",
        constants=constants,
        space=space.descriptor(),
        mode=mode,
        trials=None if mode == "enumerate" else n_rows,
        seed=None if mode == "enumerate" else seed,
    )
    return ExperimentReport(
        spec=spec,
        trials=n_rows,
        successes=successes,
        rates={
            "success": Fraction(successes, n_rows),
            "target_survives": Fraction(int(kept_target.sum()), n_rows),
        },
        failure_witnesses=_witnesses(words, order, fail_rows, reason),
        deviations=_deviation_lines(constants),
        notes=_mode_notes(mode, n_rows),
        extras={
            "min_cut_size": ell,
            "target_size": len(target),
            "cut_count": len(all_sets),
        },
    )


def unique_cycle_survival_experiment(
    g: Graph,
    cycle_edges,
    space: SampleSpace,
    *,
    mode: str = "enumerate",
    trials: int | None = None,
    seed: int = 0,
    budget: int | None = None,
    generator: str | None = None,
) -> ExperimentReport:
    """Rate at which the chosen cycle is fully kept and no other cycle is."""
    order = _check_space_matches(g, space)
    target = frozenset(cycle_edges)
    cycles = g.enumerate_cycles()
    if target not in cycles:
        raise ValueError("the chosen edge set is not a cycle of the graph")
    ell = g.girth()
    _window_check(len(target), ell, "cycle")

    words = _support_words(space, mode, trials, seed, budget)
    n_rows = words.shape[0]
    kept_target = _rows_all_set(words, [order.index(e) for e in sorted(target)])
    ok = kept_target.copy()
    alive_others = []
    for cyc in cycles:
        if cyc == target:
            continue
        alive = _rows_all_set(words, [order.index(e) for e in sorted(cyc)])
        alive_others.append((cyc, alive))
        ok &= ~alive

    successes = int(ok.sum())
    fail_rows = np.nonzero(~ok)[0]

    def reason(i: int) -> str:
        if not kept_target[i]:
            return "chosen cycle lost an edge"
        for cyc, alive in alive_others:
            if alive[i]:
                return f"rival cycle {sorted(cyc)} also survived"
        return "unreachable"

    m = len(order)
    log_m = max(1, math.ceil(math.log2(max(m, 2))))
    constants = (
        _const("independence_order", 2 * ell, space.params.k),
        _const("marginal_exponent", math.ceil(200 * log_m / ell), space.params.p_log_inv),
        _const("independence_defect", Fraction(1, max(m, 2) ** 500), space.params.delta),
    )
    spec = ExperimentSpec(
        generator=generator or f"custom(n={g.n},m={g.m})",
        theorem="chosen cycle survives alone",
        constants=constants,
        space=space.descriptor(),
        mode=mode,
        trials=None if mode == "enumerate" else n_rows,
        seed=None if mode == "enumerate" else seed,
    )
    return ExperimentReport(
        spec=spec,
        trials=n_rows,
        successes=successes,
        rates={
            "success": Fraction(successes, n_rows),
            "target_survives": Fraction(int(kept_target.sum()), n_rows),
        },
        failure_witnesses=_witnesses(words, order, fail_rows, reason),
        deviations=_deviation_lines(constants),
        notes=_mode_notes(mode, n_rows),
        extras={
            "girth": ell,
            "target_size": len(target),
            "cycle_count": len(cycles),
        },
    )


# -- sparsification pipeline ----------------------------------------------------


def _dyadic_floor(p: Fraction, max_level: int) -> int:
    """Level L with 2^-L <= p, smallest such (round the rate down)."""
    if p >= 1:
        return 0
    level = 0
    bound = Fraction(1)
    while bound > p:
        level += 1
        bound /= 2
        if level > max_level:
            raise ValueError(
                f"marginal quantization infeasible: rate {float(p):.3g} needs "
                f"level > {max_level}"
            )
    return level


def _heterogeneous_space(levels: Sequence[int], k: int):
    """Exact k-wise space whose coordinate i has marginal 2^-levels[i].

    Returns None when every level is 0 (all rates clamped to 1): sampling
    is degenerate and the caller short-circuits.
    """
    total = sum(levels)
    if total == 0:
        return None
    underlying = build_kwise(total, k * max(levels))
    return group_heterogeneous(underlying, list(levels), k, Fraction(0))


def _constant_space_descriptor(m: int) -> dict:
    return {"construction": "constant_ones", "n": m, "seed_bits": 0}


def sparsify_experiment(
    g: Graph,
    k: int,
    epsilon: float,
    delta: float,
    *,
    rate_scale: float = 1.0,
    max_level: int = 20,
    mode: str = "enumerate",
    trials: int | None = None,
    seed: int = 0,
    budget: int | None = None,
    generator: str | None = None,
) -> ExperimentReport:
    """Leverage-proportional sampling with reweighting, checked spectrally.

    Per-edge keep rates min(1, w * Reff * s) are rounded down to dyadic
    2^-L so a k-wise space with heterogeneous marginals can realize them;
    kept edges are reweighted by w/p (p the rounded rate) and the sample
    passes when its quadratic form stays within (1 +- epsilon) of g's.
    Reports the pass rate, the kept-edge-count histogram, and the exact
    expected kept count for the linearity cross-check.
    """
    if g.n < 2 or not g.is_connected():
        raise ValueError("sparsification check expects a connected graph")
    order = g.edge_ids()
    m = len(order)
    table = leverage_scores(g)
    plan = sparsify_rates(g, table, k, epsilon, delta, rate_scale)
    levels = []
    rounded: dict[int, Fraction] = {}
    for eid in order:
        lv = _dyadic_floor(Fraction(plan.rates[eid]), max_level)
        levels.append(lv)
        rounded[eid] = Fraction(1, 1 << lv)

    space = _heterogeneous_space(levels, k)
    if space is None:
        words = _rows_to_words([(1 << m) - 1], m)
        descriptor = _constant_space_descriptor(m)
        marginals = tuple(Fraction(1) for _ in order)
        space_k = k
    else:
        words = _support_words(space, mode, trials, seed, budget)
        descriptor = space.descriptor()
        marginals = space.coordinate_marginals()
        space_k = space.params.k
    n_rows = words.shape[0]

    checker = edge_form_checker(g, epsilon)
    wtilde = np.array([float(g.weight(eid) / rounded[eid]) for eid in order])
    kept_counts = _row_popcounts(words, m)
    weight_rows = _bit_matrix(words, m) * wtilde[None, :]
    ok, lo, hi = checker.batch_verdicts(weight_rows)

    successes = int(ok.sum())
    fail_rows = np.nonzero(~ok)[0]

    def reason(i: int) -> str:
        return (
            f"quadratic form ratio [{lo[i]:.4f}, {hi[i]:.4f}] outside 1+-{epsilon}"
        )

    hist: dict[str, int] = {}
    for c in kept_counts.tolist():
        hist[str(int(c))] = hist.get(str(int(c)), 0) + 1
    expected_kept = sum(marginals, Fraction(0))
    mean_kept = Fraction(int(kept_counts.sum()), n_rows)

    constants = (
        _const("oversample_scale", 1.0, rate_scale),
        _const("independence_order", max(2, 2 * math.ceil(math.log2(max(g.n, 2)))), space_k),
    )
    deviations = _deviation_lines(constants) + tuple(plan.flags)
    spec = ExperimentSpec(
        generator=generator or f"custom(n={g.n},m={g.m})",
        theorem="reweighted sample approximates the quadratic form",
        constants=constants,
        space=descriptor,
        mode=mode,
        trials=None if mode == "enumerate" else n_rows,
        seed=None if mode == "enumerate" else seed,
    )
    return ExperimentReport(
        spec=spec,
        trials=n_rows,
        successes=successes,
        rates={
            "success": Fraction(successes, n_rows),
            "mean_kept_edges": mean_kept,
            "expected_kept_edges": expected_kept,
        },
        failure_witnesses=_witnesses(words, order, fail_rows, reason),
        deviations=deviations,
        notes=_mode_notes(mode, n_rows)
        + ("per-edge rates rounded down to dyadic marginals",),
        extras={
            "oversample_factor": repr(plan.s),
            "epsilon": repr(epsilon),
            "failure_budget": repr(delta),
            "target_pass_rate": repr(1.0 - 2.0 * delta),
            "rates_raw": {str(e): repr(plan.rates[e]) for e in order},
            "rates_rounded": {str(e): _rat(rounded[e]) for e in order},
            "kept_histogram": hist,
        },
    )


def reweight_then_connectivity(
    g: Graph,
    k: int,
    *,
    epsilon: float = 0.5,
    delta: float = 0.25,
    rate_scale: float = 1.0,
    max_level: int = 20,
    mode: str = "enumerate",
    trials: int | None = None,
    seed: int = 0,
    budget: int | None = None,
    generator: str | None = None,
) -> ExperimentReport:
    """End-to-end pipeline: weight the graph so leverage is spread, derive
    keep rates from the weighted leverage, sample k-wise, check components.

    The input must be unweighted and connected with minimum cut at least 2;
    a bridge forces a keep rate of 1 on itself and the guarantee gives
    nothing, so such inputs are rejected.
    """
    if g.n < 2:
        raise PreconditionError("pipeline needs at least 2 vertices")
    if g.min_cut().value < 2:
        raise PreconditionError(
            "pipeline expects minimum cut >= 2 (got "
            f"{g.min_cut().value}); a bridge cannot be sampled away"
        )
    weighting = reweight_min_cut(g)
    gw = g.with_weights(weighting.weights)
    table = leverage_scores(gw)
    plan = sparsify_rates(gw, table, k, epsilon, delta, rate_scale)

    order = g.edge_ids()
    m = len(order)
    levels = []
    for eid in order:
        levels.append(_dyadic_floor(Fraction(plan.rates[eid]), max_level))
    space = _heterogeneous_space(levels, k)

    if space is None:
        words = _rows_to_words([(1 << m) - 1], m)
        descriptor = _constant_space_descriptor(m)
        floor = Fraction(1)
        space_k = k
    else:
        words = _support_words(space, mode, trials, seed, budget)
        descriptor = space.descriptor()
        floor = (
            union_bound_component_floor(g, space) if g.n <= 20 else Fraction(0)
        )
        space_k = space.params.k
    n_rows = words.shape[0]

    cuts = g.enumerate_cuts() if g.n <= 20 else None
    if cuts is not None:
        ok = np.ones(n_rows, dtype=bool)
        dead_by_cut = []
        for eids, _, _ in cuts:
            dead = _rows_none_set(words, [order.index(e) for e in sorted(eids)])
            dead_by_cut.append((eids, dead))
            ok &= ~dead

        def reason(i: int) -> str:
            for eids, dead in dead_by_cut:
                if dead[i]:
                    return f"cut {sorted(eids)} fully dropped"
            return "unreachable"

    else:
        base = g.components()
        flags = []
        for i in range(n_rows):
            kept = _kept_ids(_row_to_int(words, i), order)
            flags.append(g.keep_edges(kept).components() == base)
        ok = np.array(flags, dtype=bool)

        def reason(i: int) -> str:
            return "component partition changed"

    successes = int(ok.sum())
    fail_rows = np.nonzero(~ok)[0]
    constants = (
        _const("oversample_scale", 1.0, rate_scale),
        _const("independence_order", 2 * max(1, math.ceil(math.log2(max(m, 2)))), space_k),
    )
    deviations = _deviation_lines(constants) + tuple(plan.flags)
    spec = ExperimentSpec(
        generator=generator or f"custom(n={g.n},m={g.m})",
        theorem="weighted rates keep the graph in one piece",
        constants=constants,
        space=descriptor,
        mode=mode,
        trials=None if mode == "enumerate" else n_rows,
        seed=None if mode == "enumerate" else seed,
    )
    return ExperimentReport(
        spec=spec,
        trials=n_rows,
        successes=successes,
        rates={
            "success": Fraction(successes, n_rows),
            "union_bound_floor": floor,
        },
        failure_witnesses=_witnesses(words, order, fail_rows, reason),
        deviations=deviations,
        notes=_mode_notes(mode, n_rows),
        extras={
            "weighting_levels": weighting.level_count,
            "weighting_delta": weighting.delta_param,
            "max_leverage": repr(weighting.max_leverage),
            "oversample_factor": repr(plan.s),
            "marginal_levels": {str(e): lv for e, lv in zip(order, levels)},
        },
    )


# -- distribution-level diagnostics ---------------------------------------------


@dataclass(frozen=True)
class ConditionalBiasReport:
    """How far conditioning on a survival event bends small events."""

    pr_condition: Fraction
    bound: Fraction | None  # 2*delta / Pr[condition]; None when Pr = 0
    worst_deviation: Fraction
    ok: bool  # every applicable event within the bound
    events: tuple  # (coords, applicable, pr_conditional, pr_reference, deviation)


def conditional_bias_check(
    space: SampleSpace,
    condition: Sequence[int],
    events: Sequence[Sequence[int]],
    budget: int | None = None,
) -> ConditionalBiasReport:
    """Exact check of the conditioning inequality on all-ones events.

    condition and each event are coordinate index sets required to be all 1.
    An event is applicable when |condition united with event| fits within the
    space's independence order; only applicable events are held to the
    2*delta / Pr[condition] bound.
    """
    words = space.support_words(DEFAULT_ENUM_BUDGET if budget is None else budget)
    n_rows = words.shape[0]
    marg = space.coordinate_marginals()
    cond = sorted(set(condition))
    cond_mask = _rows_all_set(words, cond)
    cond_count = int(cond_mask.sum())
    pr_cond = Fraction(cond_count, n_rows)
    bound = None
    if cond_count:
        bound = 2 * space.params.delta / pr_cond

    rows = []
    worst = Fraction(0)
    ok = True
    for ev in events:
        ev = sorted(set(ev))
        joint = int((_rows_all_set(words, ev) & cond_mask).sum())
        pr_ref = Fraction(1)
        for c in ev:
            pr_ref *= marg[c]
        applicable = len(set(ev) | set(cond)) <= space.params.k and cond_count > 0
        pr_cond_ev = Fraction(joint, cond_count) if cond_count else Fraction(0)
        dev = abs(pr_cond_ev - pr_ref)
        if applicable:
            worst = max(worst, dev)
            if dev > bound:
                ok = False
        rows.append((tuple(ev), applicable, pr_cond_ev, pr_ref, dev))
    return ConditionalBiasReport(
        pr_condition=pr_cond,
        bound=bound,
        worst_deviation=worst,
        ok=ok,
        events=tuple(rows),
    )


def independence_strength_sweep(
    builder,
    n: int,
    ks: Sequence[int],
    delta,
    budget: int | None = None,
) -> list[tuple[int, Fraction]]:
    """Measured worst-case TV at each independence order, for scaling checks.

    builder(n, k, delta) -> space.  Returns (k, max_tv) pairs in the given
    order; exact spaces must all measure zero, near-uniform spaces must all
    stay within their certified delta.
    """
    out = []
    for k in ks:
        sp = builder(n, k, delta)
        rpt = verify_independence(sp, budget=budget)
        out.append((k, rpt.max_tv))
    return out
