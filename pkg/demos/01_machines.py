"""
Machines, rules and single steps
================================

A machine is a text file.  Each ``rule`` line belongs to one update
function (or to all of them with ``*``), and each step picks one update
function uniformly at random.
"""

from pathlib import Path

from sptm import parse_machine, run_pure, serialize_machine, step, zoo_machine
from sptm.errors import MachineSyntaxError

here = Path(__file__).parent

# the built-in zoo; mix2 computes AND of two bits
m = zoo_machine("mix2")
print(serialize_machine(m))
print("deterministic:", m.is_deterministic)

# one step at a time (update function 1)
c = m.initial_configuration()
for _ in range(2):
    c, status = step(m, c, "11", 1)
    print(c.state, repr(c.output), status.value)

# a pure run uses a single update function until it halts or times out
geom = zoo_machine("geom")
print(run_pure(geom, 1, "1", 10))   # halts after 2 steps
print(run_pure(geom, 2, "1", 10))   # update 2 loops forever

# reading past the input is an overrun, stopping early is a prefix halt
copy1 = zoo_machine("copy1")
print(run_pure(copy1, 1, "", 5).status.value)
print(run_pure(copy1, 1, "01", 5).status.value)

# files parse the same way
flip2 = parse_machine((here / "machines" / "flip2.sptm").read_text())
print(flip2.name, "deterministic:", flip2.is_deterministic)

# errors point at the offending line and column
try:
    parse_machine("name bad\nstates s halt\nstart s\nrule * s 0 * => halt - S 0\n")
except MachineSyntaxError as exc:
    print("syntax error:", exc)
