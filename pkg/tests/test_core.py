import random

import pytest
from hypothesis import given, settings, strategies as st

from agentplay.core import (
    ABORT,
    Action,
    AgentStatus,
    AnyOf,
    FirstOf,
    FirstOfGoal,
    OutOfOrderObservation,
    PrimitiveGoal,
    Repeat,
    Seq,
    Status,
    TestAgent,
    TransportError,
    WorldEntity,
    WorldModel,
    deliberate,
    evaluate_goal,
    merge_observation,
    select_action,
)


def ent(eid, t, alive=True, pos=(0, 0), **props):
    return WorldEntity(eid, "monster", pos, t, props, alive)


def model(t, *entities, pos=(0, 0), **props):
    return WorldModel("a", t, {e.id: e for e in entities}, pos, props)


# -- tactics --------------------------------------------------------------------

def test_firstof_picks_first_enabled_child():
    a1 = Action("a1", guard=lambda b: False)
    a2 = Action("a2", guard=lambda b: True)
    assert select_action(FirstOf(a1, a2), None, random.Random(0)) is a2


def test_anyof_with_nothing_enabled_gives_none():
    off = lambda b: False
    assert select_action(AnyOf(Action("a", guard=off), Action("b", guard=off)), None, random.Random(0)) is None


def test_anyof_is_uniform():
    a1, a2 = Action("a1"), Action("a2")
    rng = random.Random(1)
    n = 10_000
    hits = sum(select_action(AnyOf(a1, a2), None, rng) is a1 for _ in range(n))
    assert 0.47 <= hits / n <= 0.53


def test_anyof_pools_nested_leaves():
    leaves = [Action(str(i)) for i in range(3)]
    tactic = AnyOf(leaves[0], AnyOf(leaves[1], leaves[2]))
    rng = random.Random(2)
    counts = {a.name: 0 for a in leaves}
    for _ in range(9000):
        counts[select_action(tactic, None, rng).name] += 1
    assert all(2700 <= c <= 3300 for c in counts.values())


def test_firstof_never_draws_from_rng():
    tactic = FirstOf(Action("x", guard=lambda b: False), AnyOf(Action("only")), ABORT)
    rng = random.Random(5)
    state = rng.getstate()
    assert select_action(tactic, None, rng).name == "only"
    assert rng.getstate() == state


def test_abort_is_always_enabled():
    assert select_action(FirstOf(Action("x", guard=lambda b: False), ABORT), None, random.Random(0)) is ABORT


def test_combinators_need_children():
    with pytest.raises(ValueError):
        AnyOf()
    with pytest.raises(ValueError):
        FirstOf()
    with pytest.raises(ValueError):
        Seq()
    with pytest.raises(ValueError):
        PrimitiveGoal("g", lambda b: True, budget=0)


# -- belief merging ----------------------------------------------------------------

def test_first_observation_fills_empty_belief():
    b = merge_observation(WorldModel("a"), model(1, ent("e1", 1)))
    assert set(b.entities) == {"e1"}


def test_out_of_view_entity_is_kept_stale():
    b = merge_observation(model(1, ent("m", 1)), model(2))
    assert b.entities["m"].timestamp == 1
    assert b.timestamp == 2


def test_destroyed_entity_becomes_tombstone():
    b = merge_observation(model(1, ent("m", 1)), model(2, ent("m", 2, alive=False)))
    assert b.entities["m"].alive is False
    assert list(b.query("monster", alive_only=True)) == []
    assert len(list(b.query("monster"))) == 1


def test_older_observation_is_rejected():
    with pytest.raises(OutOfOrderObservation):
        merge_observation(model(3), model(2))


def test_entity_cannot_be_newer_than_its_model():
    with pytest.raises(ValueError):
        model(1, ent("e", 2))


ids = st.sampled_from(["a", "b", "c", "d"])


@st.composite
def observations(draw, t_min=0):
    t = draw(st.integers(t_min, t_min + 5))
    picked = draw(st.lists(ids, unique=True, max_size=4))
    ents = [ent(i, draw(st.integers(0, t)), draw(st.booleans()), (draw(st.integers(0, 9)), 0)) for i in picked]
    return model(t, *ents)


@settings(max_examples=300, deadline=None)
@given(observations(), observations())
def test_merge_is_idempotent(b0, obs):
    if obs.timestamp < b0.timestamp:
        obs = model(b0.timestamp, *obs.entities.values())
    once = merge_observation(b0, obs)
    assert merge_observation(once, obs) == once


@settings(max_examples=300, deadline=None)
@given(observations(), observations(t_min=6))
def test_merge_never_decreases_timestamps(b0, obs):
    merged = merge_observation(b0, obs)
    for eid, e in b0.entities.items():
        assert merged.entities[eid].timestamp >= e.timestamp
    assert merged.timestamp == obs.timestamp


# -- goal structures -----------------------------------------------------------------

def test_seq_of_solved_goal_succeeds():
    g = PrimitiveGoal("g", lambda b: True)
    g.status = Status.SUCCESS
    assert evaluate_goal(Seq(g)) == (Status.SUCCESS, None)


def test_firstof_goal_moves_to_next_after_failure():
    g1, g2 = PrimitiveGoal("g1", lambda b: False), PrimitiveGoal("g2", lambda b: False)
    g1.status = Status.FAIL
    st_, cur = evaluate_goal(FirstOfGoal(g1, g2))
    assert cur is g2 and st_ is not Status.FAIL


class Counter:
    """Environment that counts commands; observations carry a turn clock."""

    def __init__(self):
        self.turn = 0
        self.sent = []

    def observe(self, agent_id):
        return WorldModel(agent_id, self.turn, {}, (0, 0), {"n": len(self.sent)})

    def command(self, agent_id, cmd):
        self.sent.append(cmd)
        self.turn += 1
        return self.observe(agent_id)


def test_repeat_retries_until_success():
    env = Counter()
    # solved once three commands went out; each attempt has budget 1
    g = PrimitiveGoal("g", lambda b: b.props["n"] >= 3, Action("go", lambda b: "x"), budget=1)
    root = Repeat(g, max_retries=2)
    agent = TestAgent("a", root)
    attempts = []
    while agent.status is AgentStatus.RUNNING:
        deliberate(agent, env)
        attempts.append(root.attempts)
    assert agent.status is AgentStatus.SUCCEEDED
    assert root.attempts == 3


def test_repeat_gives_up_after_retries():
    g = PrimitiveGoal("g", lambda b: False, Action("go", lambda b: "x"), budget=1)
    root = Repeat(g, max_retries=1)
    agent = TestAgent("a", root)
    assert agent.run(Counter(), 10) is AgentStatus.FAILED
    assert root.attempts == 2


def test_goal_already_true_sends_nothing():
    env = Counter()
    agent = TestAgent("a", PrimitiveGoal("g", lambda b: True, Action("go", lambda b: "x")))
    assert deliberate(agent, env) is AgentStatus.SUCCEEDED
    assert env.sent == []


def test_budget_exhaustion_fails_goal():
    env = Counter()
    g = PrimitiveGoal("g", lambda b: False, Action("go", lambda b: "x"), budget=1)
    agent = TestAgent("a", g)
    deliberate(agent, env)
    assert deliberate(agent, env) is AgentStatus.FAILED
    assert g.fail_reason == "budget"
    assert env.sent == ["x"]


def test_seq_works_on_goals_in_order():
    env = Counter()
    g1 = PrimitiveGoal("g1", lambda b: b.props["n"] >= 1, Action("one", lambda b: "1"))
    g2 = PrimitiveGoal("g2", lambda b: b.props["n"] >= 2, Action("two", lambda b: "2"))
    agent = TestAgent("a", Seq(g1, g2))
    assert agent.run(env, 10) is AgentStatus.SUCCEEDED
    assert env.sent == ["1", "2"]
    assert [s.goal for s in agent.trace] == ["g1", "g1", "g2", "g2"]


def test_abort_fails_goal():
    agent = TestAgent("a", PrimitiveGoal("g", lambda b: False, ABORT))
    assert deliberate(agent, Counter()) is AgentStatus.FAILED


def test_at_most_one_goal_in_progress():
    env = Counter()
    leaves = [PrimitiveGoal(f"g{i}", lambda b, i=i: b.props["n"] > i, Action("go", lambda b: "x")) for i in range(4)]
    root = Seq(FirstOfGoal(leaves[0], leaves[1]), Repeat(Seq(leaves[2], leaves[3]), 1))
    agent = TestAgent("a", root)
    while agent.status is AgentStatus.RUNNING:
        deliberate(agent, env)
        assert sum(g.status is Status.IN_PROGRESS for g in leaves) <= 1


class Flaky(Counter):
    def command(self, agent_id, cmd):
        raise ConnectionError("link down")


def test_transport_failure_leaves_state_unchanged():
    g = PrimitiveGoal("g", lambda b: False, Action("go", lambda b: "x"), budget=5)
    agent = TestAgent("a", g)
    agent.belief.memory["k"] = [1]
    with pytest.raises(TransportError):
        deliberate(agent, Flaky())
    assert g.remaining == 5 and g.status is Status.PENDING
    assert agent.trace == [] and agent.belief.memory == {"k": [1]}


def test_equal_seeds_give_equal_traces():
    def run():
        env = Counter()
        moves = AnyOf(*(Action(k, lambda b, k=k: k) for k in "wasd"))
        agent = TestAgent("a", PrimitiveGoal("g", lambda b: b.props["n"] >= 30, moves, budget=50), seed=9)
        agent.run(env, 100)
        return env.sent, [s.digest for s in agent.trace]

    assert run() == run()


def test_trace_turns_strictly_increase():
    env = Counter()
    agent = TestAgent("a", PrimitiveGoal("g", lambda b: b.props["n"] >= 5, Action("go", lambda b: "x")))
    agent.run(env, 20)
    turns = [s.turn for s in agent.trace]
    assert turns == sorted(set(turns))
