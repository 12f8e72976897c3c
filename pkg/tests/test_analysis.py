from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sptm import (
    bayes_inverse,
    build_joint,
    make_prior,
    modal_mass,
    modal_output,
    totality_probe,
    zoo_machine,
)
from sptm.errors import NoPosteriorSupportError, OutOfSupportError


def test_mix2_posterior(mix2_joint):
    post = bayes_inverse(mix2_joint, "0")
    assert post.probs == {"00": F(1, 3), "01": F(1, 3), "10": F(1, 3)}
    assert bayes_inverse(mix2_joint, "1").probs == {"11": F(1)}
    assert mix2_joint.out_marginal == {"0": F(3, 4), "1": F(1, 4)}


def test_mix2_modal(mix2_joint):
    assert modal_mass(mix2_joint, "0") == F(3, 4)
    assert mix2_joint.preimage("0") == ("00", "01", "10")
    assert modal_output(mix2_joint, "11").value == "1"


def test_no_posterior_support(mix2_joint):
    with pytest.raises(NoPosteriorSupportError):
        bayes_inverse(mix2_joint, "01")


def test_modal_out_of_support(mix2_joint):
    with pytest.raises(OutOfSupportError):
        modal_output(mix2_joint, "111")


def test_coin1_tie(bit_prior):
    j = build_joint(zoo_machine("coin1"), bit_prior, 5)
    assert j.table == {(x, y): F(1, 4) for x in "01" for y in "01"}
    assert modal_output(j, "0").reason == "tie"
    assert not modal_output(j, "0").defined
    assert modal_output(j, "0", tie_break="lex").value == "0"
    assert build_joint(zoo_machine("coin1"), bit_prior, 5, tie_break="lex").modal["1"].value == "0"


def test_bad_tie_break(bit_prior):
    with pytest.raises(ValueError):
        build_joint(zoo_machine("coin1"), bit_prior, 5, tie_break="random")


def test_no_halting_modal():
    j = build_joint(zoo_machine("loop"), make_prior("faircoin", strings=[""]), 6)
    assert modal_output(j, "").reason == "no-halting"
    assert j.out_marginal == {}
    assert j.total_residuals["running"] == 1


def test_robust_margin():
    p = make_prior("faircoin", strings=["00", "01", "1"])
    geom = build_joint(zoo_machine("geom"), p, 4, robust_margin=True)
    # 7/8 vs 0 is short of the 1/|x| = 1 margin on a one-bit input
    assert geom.modal["1"].reason == "margin"
    copy = build_joint(zoo_machine("copy1"), make_prior("faircoin", strings=["0", "1"]), 4, robust_margin=True)
    assert copy.modal["0"].value == "0"
    empty = build_joint(zoo_machine("loop"), make_prior("faircoin", strings=[""]), 3, robust_margin=True)
    assert not empty.modal[""].defined


def test_residuals_carry_prefix_halts():
    p = make_prior("faircoin", strings=["0", "10", "11"])
    j = build_joint(zoo_machine("alt"), p, 6)
    assert j.out_marginal == {"0": F(57, 128)}
    assert j.total_residuals == {
        "halted_on_proper_prefix": F(57, 128),
        "input_overrun": F(0),
        "running": F(7, 64),
    }
    assert modal_output(j, "10").reason == "no-halting"


def test_joint_matches_prior_times_forward(zoo, bit_prior):
    j = build_joint(zoo, bit_prior, 10)
    for x in bit_prior.support:
        fa = j.forwards[x]
        for y, p in fa.output_probs.items():
            assert j.table[(x, y)] == bit_prior.weight(x) * p
        total = sum(j.table.get((x, y), 0) for y in fa.output_probs) + sum(j.residuals(x).values())
        assert total == bit_prior.weight(x)


def test_marginal_bounded_by_prior(zoo, two_bit_prior):
    j = build_joint(zoo, two_bit_prior, 10)
    assert sum(j.out_marginal.values(), F(0)) <= two_bit_prior.total
    for y in j.out_marginal:
        assert bayes_inverse(j, y).total() == 1


def test_workers_do_not_change_joint(zoo, two_bit_prior):
    a = build_joint(zoo, two_bit_prior, 10, workers=1)
    b = build_joint(zoo, two_bit_prior, 10, workers=8)
    assert a.table == b.table and a.modal == b.modal


def test_modal_ignores_prior(mix2_joint):
    p = mix2_joint.prior
    other = build_joint(zoo_machine("mix2"), p.scaled(F(1, 7)), 10)
    assert other.modal == mix2_joint.modal


def test_with_prior_rejects_new_inputs(mix2_joint):
    with pytest.raises(ValueError):
        mix2_joint.with_prior(make_prior("faircoin", strings=["0", "1"]))


def test_alt_totality():
    rows = totality_probe(zoo_machine("alt"), make_prior("faircoin", strings=["0", "1"]), [4, 8, 12])
    assert [r.max_residual for r in rows] == [F(5, 16), F(9, 256), F(13, 4096)]
    assert [r.within_bits for r in rows] == [1, 4, 8]
    assert rows[-1].max_residual < F(1, 100)


def test_totality_of_total_machine():
    rows = totality_probe(zoo_machine("copy1"), make_prior("faircoin", strings=["0", "1"]), [1])
    assert rows[0].max_residual == 0
    assert rows[0].within_bits == float("inf")


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(["copy1", "erase1", "coin1", "geom", "alt", "mix2"]),
    st.lists(st.integers(1, 9), min_size=4, max_size=4),
    st.fractions(min_value=F(1, 100), max_value=100).filter(lambda q: q > 0),
)
def test_scale_invariance(name, weights, factor):
    strings = ["00", "01", "10", "11"]
    p = make_prior("explicit", table=dict(zip(strings, [F(w, 10) for w in weights])))
    j = build_joint(zoo_machine(name), p, 8)
    k = j.with_prior(p.scaled(factor))
    assert j.modal == k.modal
    for y in j.out_marginal:
        assert bayes_inverse(j, y).probs == bayes_inverse(k, y).probs
