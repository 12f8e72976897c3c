"""
Class probes
============

B_n, the modal preimages, the decider flag, an energy table and a
one-way trial against a concrete inverter.  Everything here describes a
finite sample, not an asymptotic class.
"""

from fractions import Fraction
from pathlib import Path

from sptm import build_joint, class_probes, make_prior, parse_machine, zoo_machine
from sptm.stochastic_depth import inverter_joint

here = Path(__file__).parent
copy1 = zoo_machine("copy1")
bits = make_prior("faircoin", strings=["0", "1"])
j = build_joint(copy1, bits, 8)

# copy1 inverts itself perfectly, so it is not one-way
good = inverter_joint(copy1, ["0", "1"], 8)
probe = class_probes(j, 1, epsilon=Fraction(1, 2), inverter=good)
print("B_1:", probe.ball, "decider:", probe.decider)
print("energy:", [(x, str(e)) for x, _n, e in probe.energy_rows], "c =", probe.energy_constant)
print("copy1 as inverter:", probe.one_way)

# dup answers with two bits, never a preimage
dup = parse_machine((here / "machines" / "dup.sptm").read_text())
bad = inverter_joint(dup, ["0", "1"], 8)
print("dup as inverter:", class_probes(j, 1, epsilon=Fraction(1, 2), inverter=bad).one_way)

# mix2 has 2^S = 3 on the three inputs mapped to 0
jm = build_joint(zoo_machine("mix2"), make_prior("uniform_n", n=2), 8)
probe = class_probes(jm, 2)
print("mix2 energy:", [(x, str(e)) for x, _n, e in probe.energy_rows], "c =", probe.energy_constant)

# for mix2 the same dup machine always recovers a preimage (00 for 0, 11 for 1)
probe = class_probes(jm, 2, epsilon=Fraction(1, 2), inverter=inverter_joint(dup, ["0", "1"], 8))
print("dup inverting mix2:", probe.one_way)
