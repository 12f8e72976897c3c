import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sptm import (
    Configuration,
    HaltStatus,
    classify_halt,
    parse_machine,
    run_pure,
    serialize_machine,
    step,
    zoo_entry,
    zoo_machine,
)
from sptm.errors import (
    ConflictingRulesError,
    IncompleteMachineError,
    MachineSyntaxError,
    MissingStateError,
    UnknownStateError,
)
from sptm.machine import Tape
from sptm.zoo import ZOO_NAMES

from strategies import machines

HEADER = "name t\nupdates 2\nwork_tapes 1\nstates s halt\nstart s\n"


def test_copy1_parses():
    m = zoo_machine("copy1")
    assert m.states == ("s", "halt")
    assert m.start == "s"
    assert all(r.fn is None for r in m.rules)
    assert m.is_deterministic


def test_mix2_shape():
    m = zoo_machine("mix2")
    assert len(m.non_halt_states) == 3
    assert len(m.rules) == 6
    assert m.num_update_functions == 2
    assert m.is_deterministic


def test_mix2_computes_and():
    m = zoo_machine("mix2")
    for x, y in [("00", "0"), ("01", "0"), ("10", "0"), ("11", "1")]:
        c = m.initial_configuration()
        for _ in range(2):
            c, status = step(m, c, x, 1)
        assert status is HaltStatus.HALTED_PROPER
        assert c.output == y


def test_conflicting_rules():
    text = HEADER + "rule 1 s 0 * -> halt - S 0\nrule 1 s 0 * -> halt - S 1\n"
    with pytest.raises(ConflictingRulesError):
        parse_machine(text)


def test_star_rule_conflicts_with_numbered_rule():
    text = HEADER + "rule * s - * -> halt - S 0\nrule 2 s 1 0 -> halt - S 1\n"
    with pytest.raises(ConflictingRulesError):
        parse_machine(text)


def test_split_by_function_is_not_a_conflict():
    text = HEADER + "rule 1 s 0 * -> halt - S 0\nrule 2 s 0 * -> halt - S 1\n"
    m = parse_machine(text)
    assert not m.is_deterministic


def test_unknown_state():
    with pytest.raises(UnknownStateError):
        parse_machine(HEADER + "rule * s 0 * -> nowhere - S 0\n")


@pytest.mark.parametrize("text", [
    "name t\nstates s halt\n",
    "name t\nstates s\nstart s\n",
])
def test_missing_start_or_halt(text):
    with pytest.raises(MissingStateError):
        parse_machine(text)


def test_syntax_error_reports_position():
    text = HEADER + "rule * s 0 * => halt - S 0\n"
    with pytest.raises(MachineSyntaxError) as info:
        parse_machine(text)
    assert info.value.line == 6
    assert info.value.column == 14


def test_syntax_error_bad_move():
    with pytest.raises(MachineSyntaxError) as info:
        parse_machine(HEADER + "rule * s 0 * -> halt - X 0\n")
    assert info.value.line == 6
    assert "move" in str(info.value)


def test_rules_leaving_halt_rejected():
    with pytest.raises(MissingStateError):
        parse_machine(HEADER + "rule * halt - * -> s - S -\n")


def test_comments_and_blank_lines():
    m = parse_machine("# header\n\n" + HEADER + "rule * s 0 * -> halt - S 0  # copy\n")
    assert len(m.rules) == 1


def test_step_copy1_single_step():
    m = zoo_machine("copy1")
    c, status = step(m, m.initial_configuration(), "1", 1)
    assert (c.state, c.output, c.input_cursor, c.step_count) == ("halt", "1", 1, 1)
    assert status is HaltStatus.HALTED_PROPER


def test_step_overrun_leaves_config_unchanged():
    m = zoo_machine("copy1")
    c0 = m.initial_configuration()
    c, status = step(m, c0, "", 1)
    assert status is HaltStatus.INPUT_OVERRUN
    assert c == c0 and c.step_count == 0


def test_step_absorbs_in_halt(zoo):
    halted = Configuration("halt", 0, zoo.initial_configuration().work_tapes, "1", 7)
    for f in range(1, zoo.num_update_functions + 1):
        c, status = step(zoo, halted, "", f)
        assert c is halted
        assert status is HaltStatus.HALTED_PROPER


def test_missing_rule_is_an_error():
    m = parse_machine(HEADER + "rule * s 0 * -> halt - S 0\n")
    with pytest.raises(IncompleteMachineError):
        step(m, m.initial_configuration(), "1", 1)


def test_classify_halt():
    m = zoo_machine("copy1")
    tapes = (Tape.blank(),)
    assert classify_halt(m, Configuration("halt", 2, tapes, ""), "10") is HaltStatus.HALTED_PROPER
    assert classify_halt(m, Configuration("halt", 1, tapes, ""), "10") is HaltStatus.HALTED_ON_PROPER_PREFIX
    assert classify_halt(m, Configuration("s", 0, tapes, ""), "10") is HaltStatus.RUNNING


def test_step_count_not_part_of_identity():
    tapes = (Tape.blank(),)
    assert Configuration("s", 0, tapes, "", 3) == Configuration("s", 0, tapes, "", 9)
    assert hash(Configuration("s", 0, tapes, "", 3)) == hash(Configuration("s", 0, tapes, "", 9))


def test_tape_sparse_identity():
    t = Tape.blank().apply(1, "R").apply(None, "L").apply(0, "S")
    assert t == Tape.blank()


@pytest.mark.parametrize("name,f,x,T,expected", [
    ("copy1", 1, "0", 10, (HaltStatus.HALTED_PROPER, "0", 1)),
    ("alt", 1, "0", 50, (HaltStatus.RUNNING, "0", 50)),
    ("geom", 1, "1", 10, (HaltStatus.HALTED_PROPER, "1", 2)),
    ("loop", 2, "", 5, (HaltStatus.RUNNING, "", 5)),
])
def test_run_pure(name, f, x, T, expected):
    assert tuple(run_pure(zoo_machine(name), f, x, T)) == expected


def test_run_pure_prefix_halt():
    r = run_pure(zoo_machine("copy1"), 1, "01", 10)
    assert r.status is HaltStatus.HALTED_ON_PROPER_PREFIX


@pytest.mark.parametrize("name", ZOO_NAMES)
def test_round_trip_zoo(name):
    m = zoo_machine(name)
    assert parse_machine(serialize_machine(m)) == m
    assert parse_machine(zoo_entry(name).source) == m


@settings(max_examples=60, deadline=None)
@given(machines())
def test_round_trip_random(m):
    assert parse_machine(serialize_machine(m)) == m


@settings(max_examples=60, deadline=None)
@given(machines(), st.text("01", max_size=4), st.lists(st.integers(0, 2), max_size=12))
def test_prefix_architecture_and_determinism(m, x, coins):
    c = m.initial_configuration()
    for coin in coins:
        f = coin % m.num_update_functions + 1
        nxt, status = step(m, c, x, f)
        again, status2 = step(m, c, x, f)
        assert (nxt, status) == (again, status2)
        assert nxt.input_cursor >= c.input_cursor
        assert nxt.output.startswith(c.output)
        if status.halted:
            assert step(m, nxt, x, f)[0] is nxt
        if status is not HaltStatus.RUNNING:
            break
        c = nxt
