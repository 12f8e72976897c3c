"""
Stochastic depth
================

Depths are reported as bits together with the exact value 2^-S.
"""

from sptm import (
    build_joint,
    depth_report,
    det_limit_report,
    enumerate_halting_set,
    fanin_depth,
    make_prior,
    path_depth,
    zoo_machine,
)

mix2 = zoo_machine("mix2")
uniform = make_prior("uniform_n", n=2)
j = build_joint(mix2, uniform, 10)

for y in ("0", "1"):
    rep = depth_report(j, y)
    for v, dv in rep.entries.items():
        print(f"{y}: {v:7s} {dv.value:.6f} bits  (2^-S = {dv.exact}, witness {dv.witness})")

print(path_depth(j, "01", "0"))

# deterministic machine with a uniform prior: 2^S2 counts the preimage
for y in ("0", "1"):
    f = fanin_depth(mix2, uniform, y, horizon=10)
    print(f"|preimage({y})| = {f.count}, matches S2: {f.matches_s2}")

# deterministic limit: max posterior equals 2^-K / Q
faircoin = enumerate_halting_set(mix2, 1, 6, 10).prior()
r = det_limit_report(mix2, faircoin, 10, "0")
print(f"K={r.k_bounded} Q={r.universal_probability} S2={r.s2.exact} identity holds: {r.identity_holds}")
