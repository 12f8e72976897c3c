"""
Backward entropies along trajectories
=====================================

How much of the past is lost per step depends on what an ID keeps:
``retain`` keeps the whole input, ``consume`` drops read bits, and ``io``
keeps only the input at the start and the output at the end.
"""

from sptm import build_joint, entropy_profile, make_prior, step_entropies, trajectory_law, zoo_machine
from sptm.entropy import path_entropy

bits = make_prior("faircoin", strings=["0", "1"])

erase1 = zoo_machine("erase1")
j = build_joint(erase1, bits, 6)
for a in ("retain", "consume", "io"):
    prof = entropy_profile(trajectory_law(erase1, bits, 6, a), j)
    print(f"erase1 {a:8s} summed={prof.summed_backward:.3f} endpoint={prof.expected_endpoint:.3f} io={prof.io_entropy:.3f}")

# alt forgets which branch it took, one bit in the middle of each k=3 run
alt = zoo_machine("alt")
tl = trajectory_law(alt, bits, 10, "retain")
print("alt k=3 steps:", step_entropies(tl, 3))

# reverse chain rule: the per-step terms add up to the full conditional
for k in tl.laws:
    print(f"  k={k}: sum {sum(step_entropies(tl, k)):.6f} vs joint {path_entropy(tl, k):.6f}")
