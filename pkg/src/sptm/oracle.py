"""Naive reference computations used to cross-check the merged engine.

Every coin string of length ``horizon`` is walked separately.  Strings that
share a prefix which already stopped (halt or overrun) are accounted for in
one go, with the weight of all their completions, which is what makes
horizon 12 affordable without changing what is being computed.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction

from .engine import MassBreakdown, _normalize_laws, abstract_id
from .machine import HaltStatus, step


def naive_forward(m, input, horizon):
    """Return ``(halting_records, MassBreakdown)`` by path enumeration."""
    N = m.num_update_functions
    records = defaultdict(Fraction)
    buckets = defaultdict(Fraction)

    def walk(c, depth, p):
        if depth == horizon:
            buckets[HaltStatus.RUNNING] += p
            return
        for f in range(1, N + 1):
            c2, status = step(m, c, input, f)
            q = p / N
            if status is HaltStatus.RUNNING:
                walk(c2, depth + 1, q)
            elif status is HaltStatus.HALTED_PROPER:
                records[(c2.output, depth + 1)] += q
            else:
                buckets[status] += q

    walk(m.initial_configuration(), 0, Fraction(1))
    halted = sum(records.values(), Fraction(0))
    mass = MassBreakdown(
        halted,
        buckets[HaltStatus.HALTED_ON_PROPER_PREFIX],
        buckets[HaltStatus.INPUT_OVERRUN],
        buckets[HaltStatus.RUNNING],
    )
    return dict(records), mass


def naive_trajectory_law(m, prior, horizon, abstraction):
    """Trajectory law built from one record per (input, coin path)."""
    N = m.num_update_functions
    raw = defaultdict(lambda: defaultdict(Fraction))

    for x in prior.support:
        w = prior.weight(x)

        def walk(c, path, p):
            if len(path) - 1 == horizon:
                return
            for f in range(1, N + 1):
                c2, status = step(m, c, x, f)
                q = p / N
                if status is HaltStatus.RUNNING:
                    walk(c2, path + [abstract_id(c2, x, abstraction)], q)
                elif status is HaltStatus.HALTED_PROPER:
                    seq = tuple(path) + (abstract_id(c2, x, abstraction, "last"),)
                    raw[len(path)][seq] += q

        c0 = m.initial_configuration()
        walk(c0, [abstract_id(c0, x, abstraction, "first")], w)
    return _normalize_laws(raw, abstraction, horizon)
