from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sptm import enumerate_halting_set, kraft_check, make_prior, surprisal, zoo_machine
from sptm.errors import NonPrefixFreeError, OutOfSupportError, PriorError
from sptm.priors import is_prefix_free, prefix_violation, read_prior_file, shortlex, write_prior_file


@pytest.mark.parametrize("strings,total", [
    (["0", "1"], F(1)),
    (["00", "01", "10", "11"], F(1)),
    (["0", "10"], F(3, 4)),
    ([""], F(1)),
])
def test_kraft_totals(strings, total):
    assert kraft_check(make_prior("faircoin", strings=strings)) == total


def test_faircoin_rejects_prefix():
    with pytest.raises(NonPrefixFreeError) as info:
        make_prior("faircoin", strings=["0", "01"])
    assert info.value.pair == ("0", "01")


def test_faircoin_rejects_non_bits():
    with pytest.raises(PriorError):
        make_prior("faircoin", strings=["0a"])


def test_uniform_n():
    p = make_prior("uniform_n", n=2)
    assert p.support == ("00", "01", "10", "11")
    assert set(p.weights.values()) == {F(1, 4)}
    assert p.prefix_free


def test_uniform_zero():
    p = make_prior("uniform_n", n=0)
    assert p.support == ("",) and p.total == 1


def test_explicit_prior_need_not_be_prefix_free():
    p = make_prior("explicit", table={"0": F(1, 2), "01": F(1, 3)})
    assert not p.prefix_free
    assert kraft_check(p) == F(5, 6)
    assert not p.normalized


@pytest.mark.parametrize("table", [{"0": -1}, [("0", 1), ("0", 2)], {"2": 1}])
def test_explicit_rejects_bad_tables(table):
    with pytest.raises(PriorError):
        make_prior("explicit", table=table)


def test_unknown_kind():
    with pytest.raises(PriorError):
        make_prior("gaussian")


def test_weight_and_membership():
    p = make_prior("faircoin", strings=["0", "10"])
    assert p.weight("10") == F(1, 4)
    assert p.weight("11") == 0
    assert "10" in p and "11" not in p


def test_surprisal():
    p = make_prior("faircoin", strings=["0", "10"])
    assert surprisal(p, "10") == 2.0
    with pytest.raises(OutOfSupportError):
        surprisal(p, "11")


def test_scaled_keeps_support():
    p = make_prior("faircoin", strings=["0", "10"]).scaled(F(2, 3))
    assert p.kind == "explicit"
    assert p.weight("0") == F(1, 3)


def test_prior_file_round_trip():
    p = make_prior("explicit", table={"": F(1, 5), "01": F(2, 7)})
    text = write_prior_file(p)
    assert text == "\t1/5\n01\t2/7\n"
    assert read_prior_file("# weights\n" + text).table == p.table


def test_prior_file_errors():
    with pytest.raises(PriorError):
        read_prior_file("01 1/2\n")
    with pytest.raises(PriorError):
        read_prior_file("01\thalf\n")


def test_shortlex_order():
    assert list(shortlex(2)) == ["", "0", "1", "00", "01", "10", "11"]


def test_mix2_halting_set():
    h = enumerate_halting_set(zoo_machine("mix2"), 1, 3, 10)
    assert h.members == ("00", "01", "10", "11")
    assert len(h.excluded) == 8
    assert kraft_check(h.prior()) == 1


def test_copy1_halting_set():
    h = enumerate_halting_set(zoo_machine("copy1"), 2, 4, 10)
    assert h.members == ("0", "1")


def test_loop_halting_set_empty():
    assert enumerate_halting_set(zoo_machine("loop"), 1, 3, 10).members == ()


@settings(max_examples=100, deadline=None)
@given(st.lists(st.text("01", max_size=6), max_size=12))
def test_prefix_violation_agrees_with_brute_force(strings):
    brute = any(a != b and b.startswith(a) for a in strings for b in strings)
    assert (prefix_violation(sorted(set(strings))) is not None) == brute
    assert is_prefix_free(strings) == (not brute)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.text("01", max_size=6), max_size=12))
def test_kraft_bound_for_any_prefix_free_set(strings):
    kept = []
    for x in sorted(set(strings), key=len):
        if not any(x.startswith(k) for k in kept):
            kept.append(x)
    assert kraft_check(make_prior("faircoin", strings=kept)) <= 1
