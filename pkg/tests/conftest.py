import pytest

from sptm import build_joint, make_prior, parse_machine, zoo_machine

DUP = """\
name dup
updates 2
work_tapes 1
states s t0 t1 halt
start s
rule * s 0 * -> t0 - S 0
rule * s 1 * -> t1 - S 1
rule * t0 - * -> halt - S 0
rule * t1 - * -> halt - S 1
"""


@pytest.fixture(params=["copy1", "erase1", "coin1", "loop", "geom", "alt", "mix2"])
def zoo_name(request):
    return request.param


@pytest.fixture
def zoo(zoo_name):
    return zoo_machine(zoo_name)


@pytest.fixture
def bit_prior():
    return make_prior("faircoin", strings=["0", "1"])


@pytest.fixture
def two_bit_prior():
    return make_prior("faircoin", strings=["00", "01", "10", "11"])


@pytest.fixture
def mix2_joint(two_bit_prior):
    return build_joint(zoo_machine("mix2"), two_bit_prior, 10)


@pytest.fixture
def dup_machine():
    return parse_machine(DUP)
