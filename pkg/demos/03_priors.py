"""
Priors over inputs
==================

Fair-coin priors weigh a prefix-free set by 2^-|x|, the uniform prior
fixes the length, and explicit priors take any table.
"""

from fractions import Fraction

from sptm import enumerate_halting_set, kraft_check, make_prior, surprisal, zoo_machine
from sptm.errors import NonPrefixFreeError
from sptm.priors import read_prior_file, write_prior_file

for strings in (["0", "1"], ["00", "01", "10", "11"], ["0", "10"]):
    p = make_prior("faircoin", strings=strings)
    print(strings, "kraft total", kraft_check(p))

try:
    make_prior("faircoin", strings=["0", "01"])
except NonPrefixFreeError as exc:
    print("rejected:", exc)

u = make_prior("uniform_n", n=3)
print(len(u.support), "strings of length 3, surprisal of 101:", surprisal(u, "101"))

# the natural fair-coin support: inputs on which update 1 halts properly
h = enumerate_halting_set(zoo_machine("mix2"), 1, 4, 10)
print("halting set:", h.members, "(", len(h.excluded), "extensions skipped )")
print(h.prior().description)

# explicit priors round-trip through a small text format
p = make_prior("explicit", table={"0": Fraction(1, 3), "1": Fraction(2, 3)})
text = write_prior_file(p)
print(text, end="")
print(read_prior_file(text) == p)
