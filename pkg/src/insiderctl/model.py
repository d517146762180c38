"""Core domain model: locations, infrastructure graphs, policies, insiders.

An :class:`InfraGraph` is one snapshot of the world: where every actor is,
which credentials and roles they hold, and the value stored at each location.
A :class:`Model` wraps an initial snapshot with the static problem
definition: the location set, one or more named policy maps, value alphabets,
insider declarations, named state predicates, and evaluation-time
assumptions.

Identities are plain strings.  An insider declaration whose psychological
tipping point is reached collapses its identity with each declared alter ego
into one actor class; every other identity stays in a singleton class.  All
capability checks (``enables``, policy conditions, state predicates) operate
on actor classes, so the insider inherits the placements, credentials, and
roles of its alter egos.

Everything here is immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ACTIONS = ("get", "move", "eval", "put")

PSY_STATES = ("happy", "depressed", "disgruntled", "angry", "stressed")
MOTIVATIONS = (
    "financial",
    "political",
    "revenge",
    "curious",
    "competitive_advantage",
    "power",
    "peer_recognition",
)


class ModelError(ValueError):
    """A model (or one of its parts) violates a structural invariant."""


def _check_token(value: str, what: str) -> str:
    if not isinstance(value, str) or not value or any(c.isspace() for c in value):
        raise ModelError(f"{what} must be a non-empty token without whitespace: {value!r}")
    return value


@dataclass(frozen=True)
class Location:
    """A named node of the infrastructure map.  Ordered by numeric id."""

    id: int
    name: str

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ModelError(f"location id must be non-negative: {self.id}")
        _check_token(self.name, "location name")

    def __str__(self) -> str:
        return self.name


def by_id(locations) -> list[Location]:
    return sorted(locations, key=lambda l: l.id)


@dataclass(frozen=True)
class ActorPsyState:
    """Psychological disposition: one psychic state plus a motivation set."""

    psy: str
    motivations: frozenset[str]

    def __post_init__(self) -> None:
        if self.psy not in PSY_STATES:
            raise ModelError(f"unknown psy state {self.psy!r}; expected one of {PSY_STATES}")
        object.__setattr__(self, "motivations", frozenset(self.motivations))
        bad = self.motivations - set(MOTIVATIONS)
        if bad:
            raise ModelError(f"unknown motivations {sorted(bad)!r}; expected among {MOTIVATIONS}")


def tipping_point(state: ActorPsyState) -> bool:
    """True when motivations are non-empty and the psychic state is not happy."""
    return bool(state.motivations) and state.psy != "happy"


@dataclass(frozen=True)
class InsiderDecl:
    """Declares that ``id`` can impersonate each identity in ``alter_egos``
    once its tipping point is reached."""

    id: str
    alter_egos: frozenset[str]
    state: ActorPsyState

    def __post_init__(self) -> None:
        _check_token(self.id, "insider identity")
        object.__setattr__(self, "alter_egos", frozenset(self.alter_egos))
        if self.id in self.alter_egos:
            raise ModelError(f"insider {self.id!r} cannot list itself as an alter ego")


@dataclass(frozen=True)
class ActorClassId:
    """An actor equivalence class, named by its least member."""

    representative: str

    def __str__(self) -> str:
        return self.representative


@dataclass(frozen=True)
class ActorResolver:
    """Partition of the identity universe into actor classes.

    Non-singleton classes come only from insider declarations whose tipping
    point is active; every other identity maps to itself.
    """

    classes: tuple[frozenset[str], ...] = ()

    _rep: dict = field(default_factory=dict, compare=False, repr=False)
    _members: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        for cls in self.classes:
            rep = min(cls)
            for ident in cls:
                if ident in self._rep:
                    raise ModelError(f"identity {ident!r} appears in two actor classes")
                self._rep[ident] = rep
            self._members[rep] = frozenset(cls)

    def actor_of(self, identity: str) -> ActorClassId:
        return ActorClassId(self._rep.get(identity, identity))

    def members(self, actor: ActorClassId) -> frozenset[str]:
        return self._members.get(actor.representative, frozenset((actor.representative,)))


def build_resolver(insiders, identities) -> ActorResolver:
    """Merge each tipped insider with its alter egos; overlapping declarations
    merge transitively.  Identities never mentioned stay singletons."""
    identities = frozenset(identities)
    groups: list[set[str]] = []
    for decl in insiders:
        if decl.id not in identities:
            raise ModelError(f"insider identity {decl.id!r} is not a model identity")
        unknown = decl.alter_egos - identities
        if unknown:
            raise ModelError(
                f"insider {decl.id!r} lists unknown alter egos {sorted(unknown)!r}"
            )
        if not tipping_point(decl.state):
            continue
        merged = {decl.id} | set(decl.alter_egos)
        keep = []
        for g in groups:
            if g & merged:
                merged |= g
            else:
                keep.append(g)
        keep.append(merged)
        groups = keep
    return ActorResolver(tuple(frozenset(g) for g in groups if len(g) > 1))


# ---------------------------------------------------------------------------
# Infrastructure snapshots


@dataclass(frozen=True)
class InfraGraph:
    """A snapshot: edges, placements, credentials, roles, location values.

    Placements are duplicate-free sequences kept in identity order, so list
    length and set cardinality always coincide.  Each location stores at most
    one value token.  The constructor normalises its inputs (sorts placements,
    drops empty entries) so that structurally equal snapshots compare equal.
    """

    edges: frozenset
    placements: dict
    credentials: dict
    roles: dict
    loc_value: dict

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        seen: dict[str, Location] = {}
        placements = {}
        for loc, idents in self.placements.items():
            idents = tuple(sorted(idents))
            if not idents:
                continue
            if len(set(idents)) != len(idents):
                raise ModelError(f"duplicate identity in placement at {loc}")
            for ident in idents:
                if ident in seen:
                    raise ModelError(
                        f"identity {ident!r} placed at both {seen[ident]} and {loc}"
                    )
                seen[ident] = loc
            placements[loc] = idents
        object.__setattr__(self, "placements", placements)
        object.__setattr__(
            self,
            "credentials",
            {i: frozenset(c) for i, c in self.credentials.items() if c},
        )
        object.__setattr__(
            self, "roles", {i: frozenset(r) for i, r in self.roles.items() if r}
        )
        object.__setattr__(
            self,
            "loc_value",
            {l: v for l, v in self.loc_value.items() if v is not None},
        )

    def placement(self, loc: Location) -> tuple[str, ...]:
        return self.placements.get(loc, ())

    def value_of(self, loc: Location) -> str | None:
        return self.loc_value.get(loc)

    def credentials_of(self, identity: str) -> frozenset[str]:
        return self.credentials.get(identity, frozenset())

    def roles_of(self, identity: str) -> frozenset[str]:
        return self.roles.get(identity, frozenset())

    def locate(self, identity: str) -> Location | None:
        for loc, idents in self.placements.items():
            if identity in idents:
                return loc
        return None

    def actors(self) -> tuple[str, ...]:
        """All placed identities, in identity order."""
        return tuple(sorted(i for ids in self.placements.values() for i in ids))

    def nodes(self) -> frozenset:
        """Locations touching at least one edge."""
        return frozenset(l for e in self.edges for l in e)


# ---------------------------------------------------------------------------
# Policy conditions


class PolicyCondition:
    """Base class for policy condition trees."""

    __slots__ = ()


@dataclass(frozen=True)
class TrueCond(PolicyCondition):
    pass


@dataclass(frozen=True)
class RequesterAt(PolicyCondition):
    loc: Location


@dataclass(frozen=True)
class HasCred(PolicyCondition):
    cred: str


@dataclass(frozen=True)
class HasRole(PolicyCondition):
    role: str


@dataclass(frozen=True)
class IsIn(PolicyCondition):
    loc: Location
    value: str


@dataclass(frozen=True)
class CountAtLeast(PolicyCondition):
    loc: Location
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ModelError(f"count_at_least needs a positive bound, got {self.count}")


@dataclass(frozen=True)
class AllAtAuthorized(PolicyCondition):
    loc: Location
    allowed: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "allowed", frozenset(self.allowed))


@dataclass(frozen=True)
class CondNot(PolicyCondition):
    arg: PolicyCondition


@dataclass(frozen=True)
class CondAnd(PolicyCondition):
    left: PolicyCondition
    right: PolicyCondition


@dataclass(frozen=True)
class CondOr(PolicyCondition):
    left: PolicyCondition
    right: PolicyCondition


def eval_condition(
    cond: PolicyCondition,
    graph: InfraGraph,
    requester: ActorClassId,
    resolver: ActorResolver,
) -> bool:
    """Evaluate a policy condition for a requesting actor class.  Total."""
    match cond:
        case TrueCond():
            return True
        case RequesterAt(loc=loc):
            return any(resolver.actor_of(n) == requester for n in graph.placement(loc))
        case HasCred(cred=cred):
            return any(cred in graph.credentials_of(m) for m in resolver.members(requester))
        case HasRole(role=role):
            return any(role in graph.roles_of(m) for m in resolver.members(requester))
        case IsIn(loc=loc, value=value):
            return graph.value_of(loc) == value
        case CountAtLeast(loc=loc, count=count):
            return len(graph.placement(loc)) >= count
        case AllAtAuthorized(loc=loc, allowed=allowed):
            return all(n in allowed for n in graph.placement(loc))
        case CondNot(arg=arg):
            return not eval_condition(arg, graph, requester, resolver)
        case CondAnd(left=left, right=right):
            return eval_condition(left, graph, requester, resolver) and eval_condition(
                right, graph, requester, resolver
            )
        case CondOr(left=left, right=right):
            return eval_condition(left, graph, requester, resolver) or eval_condition(
                right, graph, requester, resolver
            )
    raise ModelError(f"unknown policy condition node {cond!r}")


@dataclass(frozen=True)
class AtomicPolicy:
    """A (condition, action set) pair attached to a location."""

    condition: PolicyCondition
    actions: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "actions", frozenset(self.actions))
        if not self.actions:
            raise ModelError("atomic policy with empty action set")
        bad = self.actions - set(ACTIONS)
        if bad:
            raise ModelError(f"unknown actions {sorted(bad)!r}; expected among {ACTIONS}")


@dataclass(frozen=True)
class FoeControl:
    """Assumption: ``foe`` is disabled for ``action`` at ``location`` whenever
    someone outside the foe's actor class is present there."""

    location: Location
    action: str
    foe: str

    def __post_init__(self) -> None:
        if self.action not in ACTIONS:
            raise ModelError(f"unknown action {self.action!r} in assumption")


# ---------------------------------------------------------------------------
# Named state predicates


class PredExpr:
    """Base class for state-predicate expression trees."""

    __slots__ = ()


@dataclass(frozen=True)
class PBool(PredExpr):
    value: bool


@dataclass(frozen=True)
class PEnables(PredExpr):
    loc: Location
    identity: str
    action: str


@dataclass(frozen=True)
class PAt(PredExpr):
    identity: str
    loc: Location


@dataclass(frozen=True)
class PIsIn(PredExpr):
    loc: Location
    value: str


@dataclass(frozen=True)
class PCountAtLeast(PredExpr):
    loc: Location
    count: int


@dataclass(frozen=True)
class PInSet(PredExpr):
    identity: str
    set_name: str


@dataclass(frozen=True)
class PNot(PredExpr):
    arg: PredExpr


@dataclass(frozen=True)
class PAnd(PredExpr):
    left: PredExpr
    right: PredExpr


@dataclass(frozen=True)
class POr(PredExpr):
    left: PredExpr
    right: PredExpr


def subst_pred(expr: PredExpr, param: str, value: str) -> PredExpr:
    """Replace occurrences of the bound parameter in identity slots."""
    match expr:
        case PEnables(loc=l, identity=i, action=a):
            return PEnables(l, value if i == param else i, a)
        case PAt(identity=i, loc=l):
            return PAt(value if i == param else i, l)
        case PInSet(identity=i, set_name=s):
            return PInSet(value if i == param else i, s)
        case PNot(arg=arg):
            return PNot(subst_pred(arg, param, value))
        case PAnd(left=left, right=right):
            return PAnd(subst_pred(left, param, value), subst_pred(right, param, value))
        case POr(left=left, right=right):
            return POr(subst_pred(left, param, value), subst_pred(right, param, value))
        case _:
            return expr


@dataclass(frozen=True)
class StatePredicate:
    """A named boolean expression over a snapshot, optionally parameterised
    by one identity argument.  Parameterised predicates must be applied
    before use in formulas."""

    name: str
    body: PredExpr
    param: str | None = None


def eval_predicate(
    pred: StatePredicate, model: "Model", graph: InfraGraph, arg: str | None = None
) -> bool:
    body = pred.body
    if pred.param is not None:
        if arg is None:
            raise ModelError(f"predicate {pred.name!r} requires an identity argument")
        body = subst_pred(body, pred.param, arg)
    elif arg is not None:
        raise ModelError(f"predicate {pred.name!r} takes no argument")
    return _eval_pred_expr(body, model, graph)


def _eval_pred_expr(expr: PredExpr, model: "Model", graph: InfraGraph) -> bool:
    match expr:
        case PBool(value=v):
            return v
        case PEnables(loc=loc, identity=ident, action=action):
            return enables(model, graph, loc, model.resolver.actor_of(ident), action)
        case PAt(identity=ident, loc=loc):
            return ident in graph.placement(loc)
        case PIsIn(loc=loc, value=value):
            return graph.value_of(loc) == value
        case PCountAtLeast(loc=loc, count=count):
            return len(graph.placement(loc)) >= count
        case PInSet(identity=ident, set_name=name):
            if name not in model.identity_sets:
                raise ModelError(f"unknown identity set {name!r}")
            return ident in model.identity_sets[name]
        case PNot(arg=arg):
            return not _eval_pred_expr(arg, model, graph)
        case PAnd(left=left, right=right):
            return _eval_pred_expr(left, model, graph) and _eval_pred_expr(
                right, model, graph
            )
        case POr(left=left, right=right):
            return _eval_pred_expr(left, model, graph) or _eval_pred_expr(
                right, model, graph
            )
    raise ModelError(f"unknown predicate node {expr!r}")


# ---------------------------------------------------------------------------
# The model


@dataclass
class Model:
    """Immutable problem definition.

    ``policy_variants`` maps variant names to policy maps (location to set of
    atomic policies); ``variant`` selects the active one.  ``assumptions``
    are consulted by :func:`enables` at evaluation time and are never derived
    from the policies themselves.
    """

    locations: tuple[Location, ...]
    edges: frozenset
    identities: frozenset[str]
    initial: InfraGraph
    policy_variants: dict
    variant: str = "baseline"
    value_alphabet: dict = field(default_factory=dict)
    insiders: tuple[InsiderDecl, ...] = ()
    identity_sets: dict = field(default_factory=dict)
    named_predicates: dict = field(default_factory=dict)
    assumptions: tuple[FoeControl, ...] = ()
    resolver: ActorResolver = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        self.locations = tuple(by_id(self.locations))
        if not self.locations:
            raise ModelError("a model needs at least one location")
        ids = [l.id for l in self.locations]
        names = [l.name for l in self.locations]
        if len(set(ids)) != len(ids) or len(set(names)) != len(names):
            raise ModelError("location ids and names must be unique")
        self.edges = frozenset(tuple(e) for e in self.edges)
        self.identities = frozenset(self.identities)
        for ident in self.identities:
            _check_token(ident, "identity")
        known = set(self.locations)
        for a, b in self.edges:
            if a not in known or b not in known:
                raise ModelError(f"edge ({a}, {b}) references an unknown location")
        self.value_alphabet = {l: frozenset(v) for l, v in self.value_alphabet.items() if v}
        for loc in self.value_alphabet:
            if loc not in known:
                raise ModelError(f"value alphabet for unknown location {loc}")
        self.identity_sets = {n: frozenset(s) for n, s in self.identity_sets.items()}
        for name, members in self.identity_sets.items():
            stray = members - self.identities
            if stray:
                raise ModelError(f"set {name!r} contains unknown identities {sorted(stray)!r}")
        self.insiders = tuple(sorted(self.insiders, key=lambda d: d.id))
        self.assumptions = tuple(
            sorted(self.assumptions, key=lambda f: (f.location.id, f.action, f.foe))
        )
        for fc in self.assumptions:
            if fc.location not in known:
                raise ModelError(f"assumption references unknown location {fc.location}")
            if fc.foe not in self.identities:
                raise ModelError(f"assumption references unknown identity {fc.foe!r}")
        if self.variant not in self.policy_variants:
            raise ModelError(f"unknown policy variant {self.variant!r}")
        self.policy_variants = {
            vname: {loc: frozenset(pols) for loc, pols in pmap.items() if pols}
            for vname, pmap in self.policy_variants.items()
        }
        for vname, pmap in self.policy_variants.items():
            for loc, policies in pmap.items():
                if loc not in known:
                    raise ModelError(f"policy variant {vname!r} targets unknown location {loc}")
                for pol in policies:
                    self._check_condition(pol.condition, known)
        self._check_graph(self.initial, known)
        for pred in self.named_predicates.values():
            self._check_predicate(pred, known)
        self.resolver = build_resolver(self.insiders, self.identities)

    def _check_graph(self, graph: InfraGraph, known: set) -> None:
        for loc in list(graph.placements) + list(graph.loc_value):
            if loc not in known:
                raise ModelError(f"graph references unknown location {loc}")
        for ident in graph.actors():
            if ident not in self.identities:
                raise ModelError(f"graph places unknown identity {ident!r}")

    def _check_condition(self, cond: PolicyCondition, known: set) -> None:
        match cond:
            case RequesterAt(loc=l) | IsIn(loc=l) | CountAtLeast(loc=l) | AllAtAuthorized(loc=l):
                if l not in known:
                    raise ModelError(f"policy condition references unknown location {l}")
            case CondNot(arg=a):
                self._check_condition(a, known)
            case CondAnd(left=a, right=b) | CondOr(left=a, right=b):
                self._check_condition(a, known)
                self._check_condition(b, known)
            case _:
                pass

    def _check_predicate(self, pred: StatePredicate, known: set) -> None:
        def walk(expr: PredExpr) -> None:
            match expr:
                case PEnables(loc=l, identity=i, action=a):
                    if l not in known:
                        raise ModelError(f"predicate {pred.name!r} references unknown location {l}")
                    if a not in ACTIONS:
                        raise ModelError(f"predicate {pred.name!r} references unknown action {a!r}")
                    self._check_pred_identity(pred, i)
                case PAt(identity=i, loc=l):
                    if l not in known:
                        raise ModelError(f"predicate {pred.name!r} references unknown location {l}")
                    self._check_pred_identity(pred, i)
                case PIsIn(loc=l) | PCountAtLeast(loc=l):
                    if l not in known:
                        raise ModelError(f"predicate {pred.name!r} references unknown location {l}")
                case PInSet(identity=i, set_name=s):
                    if s not in self.identity_sets:
                        raise ModelError(f"predicate {pred.name!r} references unknown set {s!r}")
                    self._check_pred_identity(pred, i)
                case PNot(arg=a):
                    walk(a)
                case PAnd(left=a, right=b) | POr(left=a, right=b):
                    walk(a)
                    walk(b)
                case _:
                    pass

        if pred.param is not None and pred.param in self.identities:
            raise ModelError(
                f"predicate {pred.name!r} parameter {pred.param!r} shadows a model identity"
            )
        walk(pred.body)

    def _check_pred_identity(self, pred: StatePredicate, ident: str) -> None:
        if ident == pred.param:
            return
        if ident not in self.identities:
            raise ModelError(f"predicate {pred.name!r} references unknown identity {ident!r}")

    @property
    def policy_map(self) -> dict:
        return self.policy_variants[self.variant]

    def policies_at(self, loc: Location) -> frozenset:
        return self.policy_map.get(loc, frozenset())

    def with_variant(self, variant: str) -> "Model":
        return self._clone(variant=variant)

    def with_assumptions(self, assumptions) -> "Model":
        return self._clone(assumptions=tuple(assumptions))

    def _clone(self, **overrides) -> "Model":
        kwargs = dict(
            locations=self.locations,
            edges=self.edges,
            identities=self.identities,
            initial=self.initial,
            policy_variants=self.policy_variants,
            variant=self.variant,
            value_alphabet=self.value_alphabet,
            insiders=self.insiders,
            identity_sets=self.identity_sets,
            named_predicates=self.named_predicates,
            assumptions=self.assumptions,
        )
        kwargs.update(overrides)
        return Model(**kwargs)


def enables(
    model: Model,
    graph: InfraGraph,
    loc: Location,
    requester: ActorClassId,
    action: str,
) -> bool:
    """The access judgment: does some policy at ``loc`` grant ``action`` to
    the requesting class?

    An active foe-control assumption overrides the policies: the foe's class
    is denied whenever someone outside that class is present at the location.
    """
    for fc in model.assumptions:
        if (
            fc.location == loc
            and fc.action == action
            and requester == model.resolver.actor_of(fc.foe)
            and any(model.resolver.actor_of(x) != requester for x in graph.placement(loc))
        ):
            return False
    return any(
        action in pol.actions
        and eval_condition(pol.condition, graph, requester, model.resolver)
        for pol in model.policies_at(loc)
    )
