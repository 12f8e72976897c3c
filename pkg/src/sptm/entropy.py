"""Backward conditional entropies along trajectories of an SPTM.

Probabilities stay exact until the final ``p * log2(p_ab / p_b)`` term;
point-mass checks are done on the rationals themselves.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .errors import NoHaltingMassError, SPTMError


def _neglog2(q):
    return math.log2(q.denominator) - math.log2(q.numerator)


def conditional_entropy(pairs):
    """H(A | B) in bits from an exact joint ``{(a, b): p}`` (need not sum to 1)."""
    z = sum(pairs.values(), Fraction(0))
    if z == 0:
        return 0.0
    pb = defaultdict(Fraction)
    for (_a, b), p in pairs.items():
        pb[b] += p
    h = 0.0
    for (_a, b), p in pairs.items():
        if p:
            h += float(p / z) * _neglog2(p / pb[b])
    return h


def _law(tl, k):
    if k not in tl.laws:
        raise SPTMError(f"halting time {k} has zero weight in this trajectory law")
    return tl.laws[k]


def _marginal_pair(law, i, j):
    out = defaultdict(Fraction)
    for seq, p in law.items():
        out[(seq[i], seq[j])] += p
    return out


def step_entropies(tl, k):
    """[H(X_{i-1} | X_i)] for the k steps of trajectories with halting time k."""
    law = _law(tl, k)
    return [conditional_entropy(_marginal_pair(law, i - 1, i)) for i in range(1, k + 1)]


def path_entropy(tl, k):
    """H(X_1, ..., X_k | X_{k+1}), straight from the full sequence law."""
    law = _law(tl, k)
    return conditional_entropy({(seq[:-1], seq[-1]): p for seq, p in law.items()})


def endpoint_entropy(tl, k):
    """H(X_1 | X_{k+1})."""
    law = _law(tl, k)
    return conditional_entropy(_marginal_pair(law, 0, k))


def backward_point_masses(tl, k):
    """True when every X_i determines X_{i-1} (an exact, tolerance-free check)."""
    law = _law(tl, k)
    for i in range(1, k + 1):
        pred = {}
        for (a, b), p in _marginal_pair(law, i - 1, i).items():
            if p and pred.setdefault(b, a) != a:
                return False
    return True


def expected_backward_entropy(tl):
    """Expected summed backward entropy, weighting halting times by pi(k)."""
    return sum(float(w) * sum(step_entropies(tl, k)) for k, w in tl.weights.items())


def io_entropy(j):
    """H(in | out) over properly halted mass, renormalized to a distribution."""
    if not j.table:
        raise NoHaltingMassError("no halting mass in the joint law")
    return conditional_entropy(j.table)


@dataclass(frozen=True)
class EntropyProfile:
    abstraction: str
    steps: dict
    endpoints: dict
    weights: dict
    summed_backward: float
    expected_endpoint: float
    io_entropy: float

    @property
    def gap(self):
        return self.summed_backward - self.expected_endpoint


def endpoint_comparison(tl, j):
    summed = expected_backward_entropy(tl)
    expected = sum(float(w) * endpoint_entropy(tl, k) for k, w in tl.weights.items())
    io = io_entropy(j)
    return {
        "summed_backward": summed,
        "expected_endpoint": expected,
        "io_entropy": io,
        "gap": summed - expected,
    }


def entropy_profile(tl, j):
    steps = {k: tuple(step_entropies(tl, k)) for k in tl.laws}
    endpoints = {k: endpoint_entropy(tl, k) for k in tl.laws}
    cmp = endpoint_comparison(tl, j)
    return EntropyProfile(
        abstraction=tl.abstraction,
        steps=steps,
        endpoints=endpoints,
        weights=dict(tl.weights),
        summed_backward=cmp["summed_backward"],
        expected_endpoint=cmp["expected_endpoint"],
        io_entropy=cmp["io_entropy"],
    )
