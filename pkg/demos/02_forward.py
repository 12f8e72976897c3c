"""
Exact forward laws
==================

``explore`` expands the coin-flip tree breadth first and merges equal
configurations, so every probability is an exact ``Fraction``.
"""

from sptm import explore, nonhalt_bound_check, totality_probe, make_prior, zoo_machine
from sptm.oracle import naive_forward

geom = zoo_machine("geom")
fa = explore(geom, "1", 4)
print("outputs:", fa.output_probs)
print("halting times:", fa.tau_probs)
print("mass:", fa.mass)

# the path-by-path oracle agrees bucket for bucket
records, mass = naive_forward(geom, "1", 4)
print("oracle agrees:", records == fa.halting_records and mass == fa.mass)

# alt: neither update function halts alone, the mixture almost surely does
alt = zoo_machine("alt")
fa = explore(alt, "0", 20)
print("alt halted by 20:", fa.mass.halted_proper, "live IDs per depth:", max(fa.live_counts))
for m in (1, 4, 8, 12):
    print(f"  m={m:2d} running {fa.trace[m].running}")

# while both pure runs are still going, at least 2 * 2^-m must be left
for row in nonhalt_bound_check(alt, "0", 6):
    print(f"  m={row.m} running={row.running_mass} bound={row.bound} ok={row.bound_holds}")

# totality at desk scale: every residual shrinks like (m+1)/2^m
for row in totality_probe(alt, make_prior("faircoin", strings=["0", "1"]), [4, 8, 12]):
    print(f"  horizon {row.horizon}: max residual {row.max_residual} <= 2^-{row.within_bits}")
