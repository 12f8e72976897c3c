"""Built-in machines, addressable as ``zoo:<name>``.

Each entry carries a table of expected facts; ``sptm check`` replays them.
Fact kinds and their arguments are interpreted in :mod:`sptm.selftest`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache

from .machine import parse_machine

_COPY1 = """\
name copy1
updates 2
work_tapes 1
states s halt
start s
rule * s 0 * -> halt - S 0
rule * s 1 * -> halt - S 1
"""

_ERASE1 = """\
name erase1
updates 2
work_tapes 1
states s halt
start s
rule * s 0 * -> halt - S 0
rule * s 1 * -> halt - S 0
"""

_COIN1 = """\
name coin1
updates 2
work_tapes 1
states s halt
start s
# the input bit is read and discarded; the coin decides the output
rule 1 s 0 * -> halt - S 0
rule 1 s 1 * -> halt - S 0
rule 2 s 0 * -> halt - S 1
rule 2 s 1 * -> halt - S 1
"""

_LOOP = """\
name loop
updates 2
work_tapes 1
states s halt
start s
rule * s - * -> s - S -
"""

_GEOM = """\
name geom
updates 2
work_tapes 1
states s w halt
start s
rule * s 0 * -> w - S 0
rule * s 1 * -> w - S 1
rule 1 w - * -> halt - S -
rule 2 w - * -> w - S -
"""

_ALT = """\
name alt
updates 2
work_tapes 1
states a c b halt
start a
# pure fn-1 runs a -> b -> b -> ..., pure fn-2 runs a -> c -> c -> ...
# mixing halts once a fn-2 step follows a fn-1 step
rule 1 a 0 * -> b - S 0
rule 1 a 1 * -> b - S 1
rule 2 a 0 * -> c - S 0
rule 2 a 1 * -> c - S 1
rule 1 c - * -> b - S -
rule 2 c - * -> c - S -
rule 1 b - * -> b - S -
rule 2 b - * -> halt - S -
"""

_MIX2 = """\
name mix2
updates 2
work_tapes 1
states s r0 r1 halt
start s
# AND of two input bits, deterministic
rule * s 0 * -> r0 - S -
rule * s 1 * -> r1 - S -
rule * r0 0 * -> halt - S 0
rule * r0 1 * -> halt - S 0
rule * r1 0 * -> halt - S 0
rule * r1 1 * -> halt - S 1
"""

Fact = tuple

_FACTS = {
    "copy1": (
        ("run_pure", 1, "0", 10, "halted_proper", "0", 1),
        ("forward", "1", 10, {"1": Q(1)}, {"running": Q(0), "input_overrun": Q(0)}),
        ("halting_set", 1, 3, 10, ("0", "1")),
        ("posterior", ("0", "1"), 10, "1", {"1": Q(1)}),
        ("detlimit", 10, "0", 1, Q(1, 2)),
        ("path_depth", ("0", "1"), 10, "1", "1", Q(1)),
        ("endpoint", ("0", "1"), 3, "retain", 0.0, 0.0, 0.0),
        ("backward", ("0", "1"), 3, "consume", 0.0),
        ("totality", ("0", "1"), 2, Q(0)),
    ),
    "erase1": (
        ("fanin", 1, "0", 2),
        ("step_entropies", ("0", "1"), 3, "consume", 1, (1.0,)),
        ("step_entropies", ("0", "1"), 3, "retain", 1, (0.0,)),
        ("endpoint", ("0", "1"), 3, "consume", 1.0, 1.0, 1.0),
        ("endpoint", ("0", "1"), 3, "retain", 0.0, 0.0, 1.0),
    ),
    "coin1": (
        ("forward", "0", 5, {"0": Q(1, 2), "1": Q(1, 2)}, {"running": Q(0)}),
        ("tau", "0", 5, {1: Q(1)}),
        ("modal", ("0", "1"), 5, "0", "undefined", False, None),
        ("modal", ("0", "1"), 5, "0", "lex", False, "0"),
        ("modal", ("0", "1"), 5, "0", "undefined", True, None),
        ("posterior", ("0", "1"), 5, "0", {"0": Q(1, 2), "1": Q(1, 2)}),
        ("modal_mass", ("0", "1"), 5, "0", Q(0)),
        ("path_depth", ("0", "1"), 5, "0", "1", Q(1, 2)),
        ("backward", ("0", "1"), 3, "consume", 1.0),
    ),
    "loop": (
        ("run_pure", 1, "0", 50, "running", "", 50),
        ("halting_set", 1, 2, 50, ()),
        ("nonhalt", "0", 5, {5: Q(1)}),
    ),
    "geom": (
        ("run_pure", 1, "1", 10, "halted_proper", "1", 2),
        ("forward", "1", 4, {"1": Q(7, 8)}, {"running": Q(1, 8)}),
        ("tau", "1", 4, {2: Q(1, 2), 3: Q(1, 4), 4: Q(1, 8)}),
        ("nonhalt_na", "1", 5, 2),
        ("weights", ("0", "1"), 4, "retain", {2: Q(4, 7), 3: Q(2, 7), 4: Q(1, 7)}),
        ("totality", ("0", "1"), 4, Q(1, 8)),
        ("totality", ("0", "1"), 10, Q(1, 512)),
    ),
    "alt": (
        ("run_pure", 1, "0", 50, "running", "0", 50),
        ("run_pure", 2, "0", 50, "running", "0", 50),
        ("nonhalt", "0", 6, {3: Q(1, 2)}),
        ("totality", ("0", "1"), 12, Q(13, 4096)),
    ),
    "mix2": (
        ("halting_set", 1, 3, 10, ("00", "01", "10", "11")),
        ("joint", ("00", "01", "10", "11"), 10, {("00", "0"): Q(1, 4)}, {"0": Q(3, 4), "1": Q(1, 4)}),
        ("posterior", ("00", "01", "10", "11"), 10, "0", {"00": Q(1, 3), "01": Q(1, 3), "10": Q(1, 3)}),
        ("modal", ("00", "01", "10", "11"), 10, "01", "undefined", False, "0"),
        ("modal", ("00", "01", "10", "11"), 10, "11", "undefined", False, "1"),
        ("modal_mass", ("00", "01", "10", "11"), 10, "0", Q(3, 4)),
        ("modal_mass", ("00", "01", "10", "11"), 10, "1", Q(1, 4)),
        ("depth", ("00", "01", "10", "11"), 10, "1", "S0", Q(1, 4)),
        ("depth", ("00", "01", "10", "11"), 10, "1", "S2", Q(1)),
        ("depth", ("00", "01", "10", "11"), 10, "0", "S2", Q(1, 3)),
        ("detlimit", 10, "1", 2, Q(1, 4)),
        ("detlimit", 10, "0", 2, Q(3, 4)),
        ("fanin", 2, "0", 3),
        ("fanin", 2, "1", 1),
    ),
}

_DESCRIPTIONS = {
    "copy1": "reads one bit and writes it to the output (bijective, deterministic)",
    "erase1": "reads one bit and always writes 0 (two-to-one, deterministic)",
    "coin1": "reads one bit, writes a fair coin to the output",
    "loop": "never reads, never halts",
    "geom": "copies one bit then halts after a geometric number of extra steps",
    "alt": "neither pure update function halts, yet the mixture halts with probability 1",
    "mix2": "deterministic AND of two input bits",
}

_SOURCES = {
    "copy1": _COPY1,
    "erase1": _ERASE1,
    "coin1": _COIN1,
    "loop": _LOOP,
    "geom": _GEOM,
    "alt": _ALT,
    "mix2": _MIX2,
}

ZOO_NAMES = tuple(_SOURCES)


@dataclass(frozen=True)
class ZooEntry:
    name: str
    source: str
    description: str
    facts: tuple

    @property
    def machine(self):
        return zoo_machine(self.name)


def zoo_entry(name):
    if name not in _SOURCES:
        raise KeyError(f"unknown zoo machine {name!r}; choose from {', '.join(ZOO_NAMES)}")
    return ZooEntry(name, _SOURCES[name], _DESCRIPTIONS[name], _FACTS[name])


@lru_cache(maxsize=None)
def zoo_machine(name):
    return parse_machine(zoo_entry(name).source)
