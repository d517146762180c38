import itertools

import pytest
from hypothesis import given, strategies as st

from insiderctl.model import (
    ActorPsyState,
    AtomicPolicy,
    CountAtLeast,
    FoeControl,
    HasCred,
    InfraGraph,
    InsiderDecl,
    IsIn,
    Location,
    ModelError,
    TrueCond,
    build_resolver,
    enables,
    eval_condition,
    tipping_point,
)
from insiderctl.airplane import (
    aid_graph,
    build_airplane_model,
    cabin,
    cockpit,
    door,
    ex_graph,
)

from genmodels import random_model

EVE_STATE = ActorPsyState("depressed", frozenset({"revenge", "peer_recognition"}))


class TestTippingPoint:
    def test_depressed_with_motives(self):
        assert tipping_point(EVE_STATE) is True

    def test_happy_no_motives(self):
        assert tipping_point(ActorPsyState("happy", frozenset())) is False

    def test_happy_with_motives(self):
        # the happy disjunct fails regardless of motivations
        assert tipping_point(ActorPsyState("happy", frozenset({"financial"}))) is False

    def test_rejects_unknown_values(self):
        with pytest.raises(ModelError):
            ActorPsyState("bored", frozenset())
        with pytest.raises(ModelError):
            ActorPsyState("angry", frozenset({"greed"}))


class TestResolver:
    IDS = frozenset({"Alice", "Bob", "Charly", "Eve"})

    def test_active_insider_merges(self):
        r = build_resolver([InsiderDecl("Eve", frozenset({"Charly"}), EVE_STATE)], self.IDS)
        assert r.actor_of("Eve") == r.actor_of("Charly")
        assert r.actor_of("Bob") != r.actor_of("Alice")
        assert r.members(r.actor_of("Eve")) == frozenset({"Eve", "Charly"})

    def test_inactive_insider_stays_singleton(self):
        calm = ActorPsyState("happy", frozenset({"revenge"}))
        r = build_resolver([InsiderDecl("Eve", frozenset({"Charly"}), calm)], self.IDS)
        assert r.actor_of("Eve") != r.actor_of("Charly")

    def test_no_insiders_injective(self):
        r = build_resolver([], self.IDS)
        classes = {r.actor_of(i) for i in self.IDS}
        assert len(classes) == len(self.IDS)

    def test_overlapping_declarations_merge_transitively(self):
        decls = [
            InsiderDecl("Eve", frozenset({"Charly"}), EVE_STATE),
            InsiderDecl("Charly", frozenset({"Bob"}), EVE_STATE),
        ]
        r = build_resolver(decls, self.IDS)
        assert r.actor_of("Eve") == r.actor_of("Bob") == r.actor_of("Charly")
        assert r.actor_of("Alice") != r.actor_of("Eve")

    def test_unknown_alter_ego_rejected(self):
        with pytest.raises(ModelError):
            build_resolver([InsiderDecl("Eve", frozenset({"Mallory"}), EVE_STATE)], self.IDS)

    def test_self_alter_ego_rejected(self):
        with pytest.raises(ModelError):
            InsiderDecl("Eve", frozenset({"Eve"}), EVE_STATE)

    @given(
        st.lists(
            st.tuples(
                st.sampled_from(["A", "B", "C", "D", "E"]),
                st.sets(st.sampled_from(["A", "B", "C", "D", "E"]), max_size=3),
                st.booleans(),
            ),
            max_size=4,
        )
    )
    def test_partition_properties(self, raw):
        ids = frozenset("ABCDE")
        decls = []
        for who, egos, active in raw:
            egos = frozenset(egos) - {who}
            state = EVE_STATE if active else ActorPsyState("happy", frozenset())
            decls.append(InsiderDecl(who, egos, state))
        r = build_resolver(decls, ids)
        # class-consistency: same class iff same representative
        for x, y in itertools.product(ids, ids):
            same = r.actor_of(x) == r.actor_of(y)
            assert same == (x in r.members(r.actor_of(y)))
        # idempotence via representatives
        for x in ids:
            rep = r.actor_of(x).representative
            assert r.actor_of(rep) == r.actor_of(x)


class TestInfraGraph:
    def test_placements_are_sorted_and_duplicate_free(self):
        g = ex_graph()
        assert g.placement(cockpit) == ("Bob", "Charly")
        assert g.placement(door) == ()
        assert g.actors() == ("Alice", "Bob", "Charly")
        assert g.nodes() == frozenset({cockpit, door, cabin})

    def test_duplicate_placement_rejected(self):
        with pytest.raises(ModelError):
            InfraGraph(frozenset(), {cockpit: ("Bob", "Bob")}, {}, {}, {})

    def test_two_location_placement_rejected(self):
        with pytest.raises(ModelError):
            InfraGraph(frozenset(), {cockpit: ("Bob",), cabin: ("Bob",)}, {}, {}, {})

    def test_canonical_equality(self):
        a = InfraGraph(frozenset(), {cabin: ("Bob", "Alice")}, {"Bob": {"PIN"}}, {}, {door: "norm"})
        b = InfraGraph(frozenset(), {cabin: ("Alice", "Bob")}, {"Bob": ["PIN"]}, {}, {door: "norm"})
        assert a == b


class TestEvalCondition:
    def test_isin_door_norm_on_initial(self, baseline_model):
        m = baseline_model
        assert eval_condition(IsIn(door, "norm"), ex_graph(), m.resolver.actor_of("Bob"), m.resolver)

    def test_hascred_pin_for_alice(self, baseline_model):
        m = baseline_model
        assert eval_condition(HasCred("PIN"), ex_graph(), m.resolver.actor_of("Alice"), m.resolver)

    def test_count_at_least_three_on_initial(self, baseline_model):
        # cockpit holds exactly {Bob, Charly}, so a 3-bound fails
        m = baseline_model
        assert len(ex_graph().placement(cockpit)) == 2
        assert not eval_condition(
            CountAtLeast(cockpit, 3), ex_graph(), m.resolver.actor_of("Bob"), m.resolver
        )

    def test_insider_inherits_credentials(self, baseline_model):
        # Eve holds nothing herself; the merged class holds Charly's PIN
        m = baseline_model
        assert ex_graph().credentials_of("Eve") == frozenset()
        assert eval_condition(HasCred("PIN"), ex_graph(), m.resolver.actor_of("Eve"), m.resolver)

    def test_deterministic(self, baseline_model):
        m = baseline_model
        cond = IsIn(door, "norm")
        results = {
            eval_condition(cond, ex_graph(), m.resolver.actor_of("Bob"), m.resolver)
            for _ in range(10)
        }
        assert results == {True}


class TestEnables:
    def test_insider_can_put_at_cockpit(self, baseline_model):
        m = baseline_model
        assert enables(m, ex_graph(), cockpit, m.resolver.actor_of("Eve"), "put")

    def test_locked_door_blocks_move(self, baseline_model):
        m = baseline_model
        assert not enables(m, aid_graph(), cockpit, m.resolver.actor_of("Bob"), "move")

    def test_empty_policy_location_disables_everything(self):
        # a model whose only location has no policies enables nothing
        model = random_model(0)._clone(policy_variants={"baseline": {}})
        g = model.initial
        for loc in model.locations:
            for ident in sorted(model.identities):
                for action in ("get", "move", "eval", "put"):
                    assert not enables(model, g, loc, model.resolver.actor_of(ident), action)

    def test_cabin_grants_only_move(self, baseline_model):
        m = baseline_model
        g = ex_graph()
        assert enables(m, g, cabin, m.resolver.actor_of("Bob"), "move")
        assert not enables(m, g, cabin, m.resolver.actor_of("Bob"), "put")
        assert not enables(m, g, cabin, m.resolver.actor_of("Bob"), "get")

    def test_monotone_in_policy_set(self):
        # adding an atomic policy never disables an enabled triple
        extra = AtomicPolicy(TrueCond(), frozenset({"move", "put"}))
        for seed in range(30):
            model = random_model(seed)
            if model.assumptions:
                continue
            grown = {
                loc: pols | {extra} for loc, pols in model.policy_map.items()
            }
            for loc in model.locations:
                grown.setdefault(loc, frozenset({extra}))
            bigger = model._clone(policy_variants={"baseline": grown})
            for loc in model.locations:
                for ident in sorted(model.identities):
                    actor = model.resolver.actor_of(ident)
                    for action in ("get", "move", "put", "eval"):
                        if enables(model, model.initial, loc, actor, action):
                            assert enables(bigger, model.initial, loc, actor, action)

    def test_foe_control_only_affects_the_foe_class(self, four_eyes_model):
        m = four_eyes_model
        assumed = m.with_assumptions([FoeControl(cockpit, "put", "Eve")])
        g = ex_graph()
        foe_class = m.resolver.actor_of("Eve")
        for ident in sorted(m.identities):
            actor = m.resolver.actor_of(ident)
            if actor == foe_class:
                continue
            for loc in m.locations:
                for action in ("get", "move", "put", "eval"):
                    assert enables(m, g, loc, actor, action) == enables(
                        assumed, g, loc, actor, action
                    )

    def test_foe_control_disables_foe_when_outsider_present(self, four_eyes_model):
        m = four_eyes_model
        assumed = m.with_assumptions([FoeControl(cockpit, "put", "Eve")])
        g = ex_graph()  # Bob is in the cockpit, outside Eve's class
        assert enables(m, g, cockpit, m.resolver.actor_of("Eve"), "put")
        assert not enables(assumed, g, cockpit, m.resolver.actor_of("Eve"), "put")
        # Charly is actor-equal to Eve, so the override hits him too
        assert not enables(assumed, g, cockpit, m.resolver.actor_of("Charly"), "put")


class TestModelValidation:
    def test_needs_a_location(self):
        with pytest.raises(ModelError):
            build_airplane_model("baseline")._clone(locations=())

    def test_unknown_variant(self):
        with pytest.raises(ModelError):
            build_airplane_model("nope")

    def test_location_tokens(self):
        with pytest.raises(ModelError):
            Location(0, "two words")
        with pytest.raises(ModelError):
            Location(-1, "cabin")
