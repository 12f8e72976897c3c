"""
Joint laws, Bayesian inverses and modal outputs
===============================================
"""

from fractions import Fraction

from sptm import bayes_inverse, build_joint, make_prior, modal_mass, modal_output, zoo_machine

mix2 = zoo_machine("mix2")
j = build_joint(mix2, make_prior("uniform_n", n=2), 10)
print("pi(out):", j.out_marginal)
print("pi(in | out=0):", bayes_inverse(j, "0").probs)
print("pi(mode = 0):", modal_mass(j, "0"))

# a fair coin on the output: modes tie, which is undefined by default
coin = zoo_machine("coin1")
bits = make_prior("faircoin", strings=["0", "1"])
jc = build_joint(coin, bits, 5)
print(modal_output(jc, "0"), modal_output(jc, "0", tie_break="lex"))

# rescaling the prior leaves every posterior alone
p = make_prior("explicit", table={"00": 1, "01": 2, "10": 3, "11": 4})
a = build_joint(mix2, p, 10)
b = a.with_prior(p.scaled(Fraction(1, 10)))
print("posterior unchanged:", bayes_inverse(a, "0").probs == bayes_inverse(b, "0").probs)
print(bayes_inverse(a, "0").probs)

# mass that never resolves is reported, not dropped
alt = zoo_machine("alt")
ja = build_joint(alt, make_prior("faircoin", strings=["0", "10", "11"]), 6)
print("residuals:", ja.total_residuals)
