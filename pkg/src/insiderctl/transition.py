"""State-transition semantics: the four rules and exhaustive successor
enumeration.

The rules are

* ``move``  -- a placed actor relocates to any graph node whose policy
  grants it ``move`` (there is no adjacency requirement);
* ``get``   -- an actor enabled for ``get`` shares a credential its class
  holds with a co-located actor;
* ``put``   -- an actor enabled for ``put`` at its own location writes one
  value from that location's alphabet;
* ``put_remote`` -- any model identity enabled for ``put`` at a location
  writes a value there, without having to be present anywhere.

Successors are emitted in a fixed order (rule, then identity, then location,
then value) so exploration is deterministic.  Self-loops (for example,
re-writing the value a location already has) are kept.

The ``eval`` action exists in the action vocabulary but has no transition
rule; policies granting only ``eval`` are flagged by :func:`lint_model`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import InfraGraph, Location, Model, by_id, enables

RULES = ("move", "get", "put", "put_remote")


@dataclass(frozen=True)
class TransitionLabel:
    """Identifies one rule instance.

    ``actor`` is the moving identity for ``move``, the receiving identity for
    ``get`` (with the enabling identity in ``giver``), and the writing
    identity for ``put``/``put_remote``.
    """

    rule: str
    actor: str
    src: Location | None = None
    dst: Location | None = None
    loc: Location | None = None
    giver: str | None = None
    credential: str | None = None
    value: str | None = None

    def __str__(self) -> str:
        if self.rule == "move":
            return f"move {self.actor} {self.src}->{self.dst}"
        if self.rule == "get":
            return f"get {self.actor} {self.credential} from {self.giver} at {self.loc}"
        return f"{self.rule} {self.actor} {self.loc}={self.value}"


def move_graph(identity: str, src: Location, dst: Location, graph: InfraGraph) -> InfraGraph:
    """Relocate ``identity`` from ``src`` to ``dst``; unchanged when the
    identity is not at ``src`` or already at ``dst`` (hence a no-op when
    ``src == dst``)."""
    if identity not in graph.placement(src) or identity in graph.placement(dst):
        return graph
    placements = dict(graph.placements)
    placements[src] = tuple(x for x in placements[src] if x != identity)
    placements[dst] = placements.get(dst, ()) + (identity,)
    return InfraGraph(graph.edges, placements, graph.credentials, graph.roles, graph.loc_value)


def _grant(graph: InfraGraph, identity: str, credential: str) -> InfraGraph:
    credentials = dict(graph.credentials)
    credentials[identity] = graph.credentials_of(identity) | {credential}
    return InfraGraph(graph.edges, graph.placements, credentials, graph.roles, graph.loc_value)


def _put_value(graph: InfraGraph, loc: Location, value: str) -> InfraGraph:
    loc_value = dict(graph.loc_value)
    loc_value[loc] = value
    return InfraGraph(graph.edges, graph.placements, graph.credentials, graph.roles, loc_value)


def class_credentials(graph: InfraGraph, model: Model, identity: str) -> frozenset[str]:
    """Credentials available to ``identity``'s actor class."""
    actor = model.resolver.actor_of(identity)
    out: frozenset[str] = frozenset()
    for member in model.resolver.members(actor):
        out |= graph.credentials_of(member)
    return out


def successors(model: Model, graph: InfraGraph) -> list[tuple[TransitionLabel, InfraGraph]]:
    """Every enabled rule instance from ``graph``, in deterministic order."""
    out: list[tuple[TransitionLabel, InfraGraph]] = []
    placed = graph.actors()
    locations = by_id(model.locations)
    nodes = graph.nodes()

    for a in placed:
        src = graph.locate(a)
        if src not in nodes:
            continue
        actor = model.resolver.actor_of(a)
        for dst in locations:
            if dst not in nodes:
                continue
            if enables(model, graph, dst, actor, "move"):
                out.append(
                    (TransitionLabel("move", a, src=src, dst=dst), move_graph(a, src, dst, graph))
                )

    for a in placed:
        loc = graph.locate(a)
        actor = model.resolver.actor_of(a)
        if not enables(model, graph, loc, actor, "get"):
            continue
        creds = sorted(class_credentials(graph, model, a))
        for receiver in graph.placement(loc):
            for cred in creds:
                out.append(
                    (
                        TransitionLabel("get", receiver, giver=a, credential=cred, loc=loc),
                        _grant(graph, receiver, cred),
                    )
                )

    for a in placed:
        loc = graph.locate(a)
        actor = model.resolver.actor_of(a)
        if enables(model, graph, loc, actor, "put"):
            for value in sorted(model.value_alphabet.get(loc, ())):
                out.append(
                    (TransitionLabel("put", a, loc=loc, value=value), _put_value(graph, loc, value))
                )

    for a in sorted(model.identities):
        actor = model.resolver.actor_of(a)
        for loc in locations:
            if enables(model, graph, loc, actor, "put"):
                for value in sorted(model.value_alphabet.get(loc, ())):
                    out.append(
                        (
                            TransitionLabel("put_remote", a, loc=loc, value=value),
                            _put_value(graph, loc, value),
                        )
                    )

    return out


def lint_model(model: Model) -> list[str]:
    """Warnings for policy constructs that can never fire."""
    warnings = []
    for loc in by_id(model.locations):
        for pol in sorted(model.policies_at(loc), key=lambda p: sorted(p.actions)):
            if pol.actions == {"eval"}:
                warnings.append(
                    f"policy at {loc} grants only 'eval', which has no transition rule"
                )
    return warnings
