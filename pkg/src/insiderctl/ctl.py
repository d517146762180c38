"""Reachable state space construction and fixpoint-based CTL evaluation.

States are canonical encodings of infrastructure snapshots (the policy map
lives in the model and never changes along a transition, so it is factored
out).  The reachable set is explored breadth-first with deterministic
indexing; state sets are plain ``frozenset`` of indices.

The ten CTL operators are evaluated as least/greatest fixpoints of their
standard set transformers:

    EX f = {s | some successor of s is in f}
    AX f = {s | every successor of s is in f}      (vacuously true on deadlocks)
    EF f = lfp(Z -> f | EX Z)       AF f = lfp(Z -> f | AX Z)
    EG f = gfp(Z -> f & EX Z)       AG f = gfp(Z -> f & AX Z)
    EU/AU f1 f2 = lfp(Z -> f2 | (f1 & {E,A}X Z))
    ER/AR f1 f2 = gfp(Z -> f2 & (f1 | {E,A}X Z))

``check`` holds when every initial state is in the satisfying set.

Note on deadlocks: AX over an empty successor set is vacuously true, so a
deadlock state satisfies ``AG f`` whenever it satisfies ``f``.

In debug mode the engine spot-checks transformer monotonicity on random
subset pairs and asserts the AG/EF duality (sat(AG f) equals the complement
of sat(EF not-f)) on every AG query.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .model import InfraGraph, Location, Model, ModelError, eval_predicate
from .transition import TransitionLabel, successors


class ExplorationLimitError(RuntimeError):
    """Raised when reachability exceeds the configured state cap."""


class MonotonicityError(RuntimeError):
    """Raised when a fixpoint transformer misbehaves (non-monotone or
    failing to converge within the guaranteed bound)."""


class TraceError(ValueError):
    """Raised on witness/counterexample requests that do not match the
    formula shape or verdict."""


# ---------------------------------------------------------------------------
# Canonical states


@dataclass(frozen=True)
class State:
    """Canonical, comparable encoding of a snapshot: sorted placements,
    credential and role sets, and location values.  Graph edges are model
    constants and not part of the encoding."""

    placements: tuple
    credentials: tuple
    roles: tuple
    values: tuple


def encode(graph: InfraGraph) -> State:
    return State(
        placements=tuple(
            (loc, graph.placements[loc])
            for loc in sorted(graph.placements, key=lambda l: l.id)
        ),
        credentials=tuple(
            (ident, tuple(sorted(graph.credentials[ident])))
            for ident in sorted(graph.credentials)
        ),
        roles=tuple(
            (ident, tuple(sorted(graph.roles[ident]))) for ident in sorted(graph.roles)
        ),
        values=tuple(
            (loc, graph.loc_value[loc])
            for loc in sorted(graph.loc_value, key=lambda l: l.id)
        ),
    )


# ---------------------------------------------------------------------------
# Kripke structures


@dataclass
class KripkeModel:
    """Reachable state set with labelled edges and initial states.

    Always built by :func:`reachable`; the state list must be exactly the
    closure of the initial states under the stored edges, which the
    constructor verifies.
    """

    model: Model
    states: list[State]
    graphs: list[InfraGraph]
    edges: list[list[tuple[TransitionLabel, int]]]
    init: frozenset[int]
    index: dict = field(repr=False)

    def __post_init__(self) -> None:
        n = len(self.states)
        if not (len(self.graphs) == len(self.edges) == n):
            raise ModelError("inconsistent Kripke payload lengths")
        if not self.init or any(i not in range(n) for i in self.init):
            raise ModelError("initial states must be a non-empty subset of the state set")
        seen = set(self.init)
        frontier = sorted(self.init)
        while frontier:
            nxt = []
            for i in frontier:
                for _, j in self.edges[i]:
                    if j not in range(n):
                        raise ModelError(f"edge from state {i} targets unknown state {j}")
                    if j not in seen:
                        seen.add(j)
                        nxt.append(j)
            frontier = nxt
        if len(seen) != n:
            raise ModelError(
                "state set is not the reachability closure of the initial states"
            )

    @property
    def universe(self) -> frozenset[int]:
        return frozenset(range(len(self.states)))

    def successors_of(self, i: int) -> list[int]:
        return [j for _, j in self.edges[i]]


def reachable(
    model: Model, *, initial: InfraGraph | None = None, max_states: int | None = None
) -> KripkeModel:
    """Breadth-first closure of the transition rules from the initial
    snapshot.  States are indexed by discovery order; raises
    :class:`ExplorationLimitError` when ``max_states`` is exceeded."""
    start = model.initial if initial is None else initial
    states: list[State] = [encode(start)]
    graphs: list[InfraGraph] = [start]
    index: dict[State, int] = {states[0]: 0}
    edges: list[list[tuple[TransitionLabel, int]]] = []
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            out = []
            for label, graph in successors(model, graphs[i]):
                st = encode(graph)
                j = index.get(st)
                if j is None:
                    if max_states is not None and len(states) >= max_states:
                        raise ExplorationLimitError(
                            f"state space exceeds the cap of {max_states} states"
                        )
                    j = len(states)
                    index[st] = j
                    states.append(st)
                    graphs.append(graph)
                    nxt.append(j)
                out.append((label, j))
            while len(edges) <= i:
                edges.append([])
            edges[i] = out
        frontier = nxt
    while len(edges) < len(states):
        edges.append([])
    return KripkeModel(model, states, graphs, edges, frozenset({0}), index)


# ---------------------------------------------------------------------------
# Fixpoint iteration


def _spot_check_monotone(transformer, universe: frozenset[int], rng: random.Random) -> None:
    items = sorted(universe)
    for _ in range(min(32, 4 * len(items) + 4)):
        p = frozenset(x for x in items if rng.random() < 0.5)
        q = p | frozenset(x for x in items if rng.random() < 0.5)
        if not transformer(p) <= transformer(q):
            raise MonotonicityError("transformer failed a monotonicity spot-check")


def lfp_iterate(transformer, universe: frozenset[int], *, debug: bool = False) -> frozenset[int]:
    """Iterate a monotone transformer from the empty set to its least
    fixpoint; converges within ``|universe| + 1`` applications."""
    if debug:
        _spot_check_monotone(transformer, universe, random.Random(0))
    current: frozenset[int] = frozenset()
    for _ in range(len(universe) + 1):
        nxt = transformer(current)
        if not current <= nxt:
            raise MonotonicityError("lfp chain is not monotone non-decreasing")
        if nxt == current:
            return current
        current = nxt
    raise MonotonicityError(
        f"lfp failed to converge within {len(universe) + 1} iterations"
    )


def gfp_iterate(transformer, universe: frozenset[int], *, debug: bool = False) -> frozenset[int]:
    """Dual of :func:`lfp_iterate`: iterate downward from the universe."""
    if debug:
        _spot_check_monotone(transformer, universe, random.Random(1))
    current = universe
    for _ in range(len(universe) + 1):
        nxt = transformer(current)
        if not nxt <= current:
            raise MonotonicityError("gfp chain is not monotone non-increasing")
        if nxt == current:
            return current
        current = nxt
    raise MonotonicityError(
        f"gfp failed to converge within {len(universe) + 1} iterations"
    )


# ---------------------------------------------------------------------------
# Formulas


class CtlFormula:
    """Base class for CTL formula trees."""

    __slots__ = ()


@dataclass(frozen=True)
class Pred(CtlFormula):
    name: str


@dataclass(frozen=True)
class FNot(CtlFormula):
    arg: CtlFormula


@dataclass(frozen=True)
class FAnd(CtlFormula):
    left: CtlFormula
    right: CtlFormula


@dataclass(frozen=True)
class FOr(CtlFormula):
    left: CtlFormula
    right: CtlFormula


@dataclass(frozen=True)
class EX(CtlFormula):
    arg: CtlFormula


@dataclass(frozen=True)
class AX(CtlFormula):
    arg: CtlFormula


@dataclass(frozen=True)
class EF(CtlFormula):
    arg: CtlFormula


@dataclass(frozen=True)
class AF(CtlFormula):
    arg: CtlFormula


@dataclass(frozen=True)
class EG(CtlFormula):
    arg: CtlFormula


@dataclass(frozen=True)
class AG(CtlFormula):
    arg: CtlFormula


@dataclass(frozen=True)
class EU(CtlFormula):
    left: CtlFormula
    right: CtlFormula


@dataclass(frozen=True)
class AU(CtlFormula):
    left: CtlFormula
    right: CtlFormula


@dataclass(frozen=True)
class ER(CtlFormula):
    left: CtlFormula
    right: CtlFormula


@dataclass(frozen=True)
class AR(CtlFormula):
    left: CtlFormula
    right: CtlFormula


def formula_predicates(formula: CtlFormula) -> set[str]:
    """All predicate names mentioned in a formula."""
    match formula:
        case Pred(name=name):
            return {name}
        case FNot(arg=a) | EX(arg=a) | AX(arg=a) | EF(arg=a) | AF(arg=a) | EG(arg=a) | AG(arg=a):
            return formula_predicates(a)
        case (
            FAnd(left=a, right=b)
            | FOr(left=a, right=b)
            | EU(left=a, right=b)
            | AU(left=a, right=b)
            | ER(left=a, right=b)
            | AR(left=a, right=b)
        ):
            return formula_predicates(a) | formula_predicates(b)
    raise ModelError(f"unknown formula node {formula!r}")


# ---------------------------------------------------------------------------
# Evaluation


def eval_ctl(k: KripkeModel, formula: CtlFormula, *, debug: bool = False) -> frozenset[int]:
    """The exact satisfying subset of ``k``'s states."""
    universe = k.universe

    def ex_step(target: frozenset[int]) -> frozenset[int]:
        return frozenset(i for i in universe if any(j in target for j in k.successors_of(i)))

    def ax_step(target: frozenset[int]) -> frozenset[int]:
        return frozenset(i for i in universe if all(j in target for j in k.successors_of(i)))

    def sat(f: CtlFormula) -> frozenset[int]:
        match f:
            case Pred(name=name):
                pred = k.model.named_predicates.get(name)
                if pred is None:
                    raise ModelError(f"unknown predicate name {name!r}")
                return frozenset(
                    i for i in universe if eval_predicate(pred, k.model, k.graphs[i])
                )
            case FNot(arg=a):
                return universe - sat(a)
            case FAnd(left=a, right=b):
                return sat(a) & sat(b)
            case FOr(left=a, right=b):
                return sat(a) | sat(b)
            case EX(arg=a):
                return ex_step(sat(a))
            case AX(arg=a):
                return ax_step(sat(a))
            case EF(arg=a):
                fa = sat(a)
                return lfp_iterate(lambda z: fa | ex_step(z), universe, debug=debug)
            case AF(arg=a):
                fa = sat(a)
                return lfp_iterate(lambda z: fa | ax_step(z), universe, debug=debug)
            case EG(arg=a):
                fa = sat(a)
                return gfp_iterate(lambda z: fa & ex_step(z), universe, debug=debug)
            case AG(arg=a):
                fa = sat(a)
                result = gfp_iterate(lambda z: fa & ax_step(z), universe, debug=debug)
                if debug:
                    complement = universe - fa
                    dual = lfp_iterate(
                        lambda z: complement | ex_step(z), universe, debug=False
                    )
                    assert result == universe - dual, "AG/EF duality violated"
                return result
            case EU(left=a, right=b):
                fa, fb = sat(a), sat(b)
                return lfp_iterate(lambda z: fb | (fa & ex_step(z)), universe, debug=debug)
            case AU(left=a, right=b):
                fa, fb = sat(a), sat(b)
                return lfp_iterate(lambda z: fb | (fa & ax_step(z)), universe, debug=debug)
            case ER(left=a, right=b):
                fa, fb = sat(a), sat(b)
                return gfp_iterate(lambda z: fb & (fa | ex_step(z)), universe, debug=debug)
            case AR(left=a, right=b):
                fa, fb = sat(a), sat(b)
                return gfp_iterate(lambda z: fb & (fa | ax_step(z)), universe, debug=debug)
        raise ModelError(f"unknown formula node {f!r}")

    return sat(formula)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    sat: frozenset[int]


def check(k: KripkeModel, formula: CtlFormula, *, debug: bool = False) -> Verdict:
    """Model checking judgment: holds when every initial state satisfies
    the formula."""
    satisfying = eval_ctl(k, formula, debug=debug)
    return Verdict(holds=k.init <= satisfying, sat=satisfying)


# ---------------------------------------------------------------------------
# Paths, witnesses, counterexamples


@dataclass(frozen=True)
class TracePath:
    """A labelled path: ``states[0]`` is an initial state and
    ``labels[i]`` takes ``states[i]`` to ``states[i + 1]``."""

    states: tuple[int, ...]
    labels: tuple[TransitionLabel, ...]

    def __len__(self) -> int:
        return len(self.labels)


def shortest_path(
    k: KripkeModel, targets: frozenset[int], *, sources: frozenset[int] | None = None
) -> TracePath | None:
    """Shortest labelled path from a source to a target; BFS with
    deterministic tie-breaks (state index, then edge order).  A source
    already in the target set gives a length-0 path."""
    sources = k.init if sources is None else sources
    for i in sorted(sources):
        if i in targets:
            return TracePath((i,), ())
    parent: dict[int, tuple[int, TransitionLabel]] = {}
    seen = set(sources)
    frontier = sorted(sources)
    while frontier:
        nxt = []
        for i in frontier:
            for label, j in k.edges[i]:
                if j in seen:
                    continue
                seen.add(j)
                parent[j] = (i, label)
                if j in targets:
                    states = [j]
                    labels = []
                    cur = j
                    while cur not in sources:
                        prev, lab = parent[cur]
                        states.append(prev)
                        labels.append(lab)
                        cur = prev
                    return TracePath(tuple(reversed(states)), tuple(reversed(labels)))
                nxt.append(j)
        frontier = nxt
    return None


def shortest_path_via(k: KripkeModel, waypoints) -> TracePath | None:
    """Shortest path from an initial state through the given states in
    order, as the concatenation of shortest legs."""
    indices = []
    for st in waypoints:
        i = k.index.get(st) if isinstance(st, State) else st
        if i is None:
            return None
        indices.append(i)
    sources = k.init
    states: list[int] = []
    labels: list[TransitionLabel] = []
    for target in indices:
        leg = shortest_path(k, frozenset({target}), sources=sources)
        if leg is None:
            return None
        if states:
            states.extend(leg.states[1:])
        else:
            states.extend(leg.states)
        labels.extend(leg.labels)
        sources = frozenset({target})
    return TracePath(tuple(states), tuple(labels))


def extract_trace(k: KripkeModel, formula: CtlFormula, mode: str) -> TracePath:
    """Witness for a holding ``EF g`` or counterexample for a failing
    ``AG g``: the shortest path from an initial state into sat(g),
    respectively out of sat(g)."""
    if mode == "witness":
        if not isinstance(formula, EF):
            raise TraceError("witness extraction requires a formula of shape EF g")
        goal = eval_ctl(k, formula.arg)
        path = shortest_path(k, goal)
        if path is None:
            raise TraceError("witness requested but the EF formula does not hold")
        return path
    if mode == "counterexample":
        if not isinstance(formula, AG):
            raise TraceError("counterexample extraction requires a formula of shape AG g")
        bad = k.universe - eval_ctl(k, formula.arg)
        path = shortest_path(k, bad)
        if path is None:
            raise TraceError("counterexample requested but the AG formula holds")
        return path
    raise TraceError(f"unknown trace mode {mode!r}")


# ---------------------------------------------------------------------------
# Presentation


def describe_graph(graph: InfraGraph, locations) -> str:
    """Compact one-line rendering of a snapshot's distinguishing fields."""
    parts = []
    for loc in sorted(locations, key=lambda l: l.id):
        names = graph.placement(loc)
        if names:
            parts.append(f"{loc}:[{','.join(names)}]")
    values = " ".join(
        f"{loc}={graph.loc_value[loc]}"
        for loc in sorted(graph.loc_value, key=lambda l: l.id)
    )
    return " ".join(parts) + (" | " + values if values else "")


def format_trace(k: KripkeModel, path: TracePath) -> str:
    lines = [f"s{path.states[0]}: {describe_graph(k.graphs[path.states[0]], k.model.locations)}"]
    for label, state in zip(path.labels, path.states[1:]):
        lines.append(f"  --[{label}]--> s{state}: {describe_graph(k.graphs[state], k.model.locations)}")
    return "\n".join(lines)


def dot_export(k: KripkeModel) -> str:
    """GraphViz rendering with stable node and edge ordering."""
    lines = ["digraph kripke {", "  rankdir=LR;", '  node [shape=box fontname="monospace"];']
    for i, graph in enumerate(k.graphs):
        desc = describe_graph(graph, k.model.locations).replace(" | ", "\\n").replace('"', "'")
        extra = " penwidth=2" if i in k.init else ""
        lines.append(f'  s{i} [label="s{i}\\n{desc}"{extra}];')
    for i, out in enumerate(k.edges):
        for label, j in out:
            text = str(label).replace('"', "'")
            lines.append(f'  s{i} -> s{j} [label="{text}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
