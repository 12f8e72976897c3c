"""Priors over input strings and the bounded prefix-free halting set."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import NonPrefixFreeError, OutOfSupportError, PriorError
from .machine import HaltStatus, run_pure

KINDS = ("faircoin", "uniform_n", "explicit")


def shortlex(max_len):
    for n in range(max_len + 1):
        for bits in itertools.product("01", repeat=n):
            yield "".join(bits)


def prefix_violation(strings):
    """First pair (a, b) with a a proper prefix of b, or None."""
    # in lexicographic order every string between a and its extension b also extends a
    stack = []
    for s in sorted(set(strings)):
        while stack and not s.startswith(stack[-1]):
            stack.pop()
        if stack:
            return stack[-1], s
        stack.append(s)
    return None


def is_prefix_free(strings):
    return prefix_violation(strings) is None


@dataclass(frozen=True)
class Prior:
    kind: str
    table: tuple
    description: str = ""

    @property
    def support(self):
        return tuple(x for x, _ in self.table)

    @property
    def weights(self):
        return dict(self.table)

    @cached_property
    def _lookup(self):
        return dict(self.table)

    def weight(self, x):
        return self._lookup.get(x, Fraction(0))

    def __contains__(self, x):
        return x in self._lookup

    @property
    def total(self):
        return sum((w for _, w in self.table), Fraction(0))

    @property
    def normalized(self):
        return self.total == 1

    @property
    def prefix_free(self):
        return is_prefix_free(self.support)

    def scaled(self, factor):
        factor = Fraction(factor)
        if factor <= 0:
            raise PriorError("scale factor must be positive")
        return Prior("explicit", tuple((x, w * factor) for x, w in self.table),
                     f"{self.description} x {factor}")


def _check_bits(x):
    if any(ch not in "01" for ch in x):
        raise PriorError(f"not a bit string: {x!r}")


def make_prior(kind, strings=None, n=None, table=None):
    """Build a prior.

    ``faircoin`` takes a prefix-free collection ``strings`` and weighs each by
    2**-len; ``uniform_n`` puts 2**-n on every string of length exactly ``n``;
    ``explicit`` takes a mapping or pairs of (string, weight).
    """
    if kind == "faircoin":
        if strings is None:
            raise PriorError("faircoin prior needs a set of strings")
        strings = sorted(set(strings), key=lambda s: (len(s), s))
        for x in strings:
            _check_bits(x)
        bad = prefix_violation(strings)
        if bad:
            raise NonPrefixFreeError(*bad)
        tab = tuple((x, Fraction(1, 2 ** len(x))) for x in strings)
        return Prior("faircoin", tab, "faircoin{" + ",".join(strings) + "}")
    if kind == "uniform_n":
        if n is None or n < 0:
            raise PriorError("uniform_n prior needs n >= 0")
        w = Fraction(1, 2 ** n)
        tab = tuple((x, w) for x in shortlex(n) if len(x) == n)
        return Prior("uniform_n", tab, f"uniform over length {n}")
    if kind == "explicit":
        if table is None:
            raise PriorError("explicit prior needs a table")
        items = table.items() if isinstance(table, dict) else table
        tab = []
        seen = set()
        for x, w in items:
            _check_bits(x)
            w = Fraction(w)
            if w < 0:
                raise PriorError(f"negative weight for {x!r}")
            if x in seen:
                raise PriorError(f"duplicate entry {x!r}")
            seen.add(x)
            tab.append((x, w))
        tab.sort(key=lambda kv: (len(kv[0]), kv[0]))
        return Prior("explicit", tuple(tab), "explicit")
    raise PriorError(f"unknown prior kind {kind!r}")


def kraft_check(p):
    total = p.total
    if p.prefix_free and total > 1:
        raise AssertionError(f"Kraft inequality violated: total {total}")
    return total


def surprisal(p, x):
    """-log2 of the prior weight of ``x``."""
    if x not in p:
        raise OutOfSupportError(f"{x!r} is not in the prior support")
    w = p.weight(x)
    if w == 0:
        raise OutOfSupportError(f"{x!r} has zero prior weight")
    return math.log2(w.denominator) - math.log2(w.numerator)


def read_prior_file(text):
    """Parse ``bits<TAB>num/den`` lines into an explicit prior."""
    tab = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip("\r\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise PriorError(f"line {lineno}: expected 'bits<TAB>num/den'")
        bits, w = parts[0].strip(), parts[1].strip()
        try:
            tab.append((bits, Fraction(w)))
        except ValueError:
            raise PriorError(f"line {lineno}: bad weight {w!r}") from None
    return make_prior("explicit", table=tab)


def write_prior_file(p):
    return "".join(f"{x}\t{w.numerator}/{w.denominator}\n" for x, w in p.table)


@dataclass(frozen=True)
class HaltingSetApproximation:
    fn_index: int
    max_len: int
    horizon: int
    members: tuple
    excluded: tuple

    def prior(self):
        p = make_prior("faircoin", strings=self.members)
        desc = f"faircoin over halting set (fn={self.fn_index}, maxlen={self.max_len}, horizon={self.horizon})"
        return Prior(p.kind, p.table, desc)


def enumerate_halting_set(m, f, max_len, horizon):
    """Strings up to ``max_len`` on which update function ``f`` alone halts properly."""
    if max_len < 0 or horizon < 1:
        raise ValueError("need max_len >= 0 and horizon >= 1")
    members, excluded = [], []
    member_set = set()
    for x in shortlex(max_len):
        if any(x[:i] in member_set for i in range(len(x))):
            excluded.append(x)
            continue
        if run_pure(m, f, x, horizon).status is HaltStatus.HALTED_PROPER:
            members.append(x)
            member_set.add(x)
    assert is_prefix_free(members)
    return HaltingSetApproximation(f, max_len, horizon, tuple(members), tuple(excluded))
