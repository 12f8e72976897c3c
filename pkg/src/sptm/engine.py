"""Exact exploration of the coin-flip computation tree.

Live configurations at the same depth are merged, so the cost is
``horizon x reachable IDs`` instead of ``N ** horizon``.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import NoHaltingMassError
from .machine import HaltStatus, run_pure, step

ABSTRACTIONS = ("retain", "consume", "io")


class MassBreakdown(NamedTuple):
    halted_proper: Fraction
    halted_on_proper_prefix: Fraction
    input_overrun: Fraction
    running: Fraction

    def total(self):
        return sum(self, Fraction(0))

    @property
    def unhalted(self):
        return self.running + self.input_overrun


@dataclass(frozen=True)
class ForwardAnalysis:
    """Exact forward law of one input up to ``horizon``.

    ``trace[t]`` is the mass breakdown after ``t`` steps and ``live_counts[t]``
    the number of distinct live configurations at that depth.
    """

    input: str
    horizon: int
    halting_records: dict
    mass: MassBreakdown
    trace: tuple
    live_counts: tuple

    @property
    def output_probs(self):
        out = defaultdict(Fraction)
        for (y, _t), p in self.halting_records.items():
            out[y] += p
        return dict(sorted(out.items()))

    @property
    def tau_probs(self):
        out = defaultdict(Fraction)
        for (_y, t), p in self.halting_records.items():
            out[t] += p
        return dict(sorted(out.items()))

    def prob_output(self, y):
        return self.output_probs.get(y, Fraction(0))


def explore(m, input, horizon):
    """Breadth-first expansion with merging of equal configurations."""
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    N = m.num_update_functions
    share = Fraction(1, N)
    live = {m.initial_configuration(): Fraction(1)}
    records = defaultdict(Fraction)
    frozen = {HaltStatus.HALTED_ON_PROPER_PREFIX: Fraction(0), HaltStatus.INPUT_OVERRUN: Fraction(0)}
    halted = Fraction(0)
    trace = [MassBreakdown(Fraction(0), Fraction(0), Fraction(0), Fraction(1))]
    counts = [1]
    for t in range(1, horizon + 1):
        nxt = defaultdict(Fraction)
        for c, p in live.items():
            q = p * share
            for f in range(1, N + 1):
                c2, status = step(m, c, input, f)
                if status is HaltStatus.RUNNING:
                    nxt[c2] += q
                elif status is HaltStatus.HALTED_PROPER:
                    records[(c2.output, t)] += q
                    halted += q
                else:
                    frozen[status] += q
        live = nxt
        trace.append(MassBreakdown(
            halted,
            frozen[HaltStatus.HALTED_ON_PROPER_PREFIX],
            frozen[HaltStatus.INPUT_OVERRUN],
            sum(live.values(), Fraction(0)),
        ))
        counts.append(len(live))
    return ForwardAnalysis(
        input=input,
        horizon=horizon,
        halting_records=dict(sorted(records.items(), key=lambda kv: (kv[0][1], kv[0][0]))),
        mass=trace[-1],
        trace=tuple(trace),
        live_counts=tuple(counts),
    )


def explore_many(m, inputs, horizon, workers=1):
    """``explore`` over several inputs; order of results follows ``inputs``."""
    inputs = list(inputs)
    if workers <= 1 or len(inputs) < 2:
        return [explore(m, x, horizon) for x in inputs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda x: explore(m, x, horizon), inputs))


# -- trajectory laws ---------------------------------------------------------

def abstract_id(c, input, abstraction, endpoint=None):
    """Project a configuration to the ID used for entropy bookkeeping.

    ``endpoint`` is "first"/"last" for the ends of a trajectory; it only
    matters for the ``io`` abstraction, which keeps full IDs in between.
    """
    if abstraction == "consume":
        return (c.state, input[c.input_cursor:], c.work_tapes, c.output)
    if abstraction == "io":
        if endpoint == "first":
            return ("in", input)
        if endpoint == "last":
            return ("out", c.output)
    elif abstraction != "retain":
        raise ValueError(f"unknown abstraction {abstraction!r}")
    return (c.state, input, c.input_cursor, c.work_tapes, c.output)


@dataclass(frozen=True)
class TrajectoryLaw:
    """Per halting time ``k``, the law of (X_1, ..., X_{k+1}) given tau = k.

    X_1 is the initial ID and X_{k+1} the first halted ID, so a trajectory
    with halting time ``k`` carries ``k`` steps.
    """

    abstraction: str
    horizon: int
    laws: dict
    weights: dict
    halting_mass: Fraction

    @property
    def halting_times(self):
        return tuple(self.laws)


def _normalize_laws(raw, abstraction, horizon):
    total = sum((sum(d.values(), Fraction(0)) for d in raw.values()), Fraction(0))
    if total == 0:
        raise NoHaltingMassError(f"no proper halting within horizon {horizon}")
    laws, weights = {}, {}
    for k in sorted(raw):
        z = sum(raw[k].values(), Fraction(0))
        if z == 0:
            continue
        weights[k] = z / total
        laws[k] = {seq: p / z for seq, p in sorted(raw[k].items(), key=lambda kv: repr(kv[0]))}
    return TrajectoryLaw(abstraction, horizon, laws, weights, total)


def _trajectories_one(m, x, w, horizon, abstraction):
    N = m.num_update_functions
    share = Fraction(1, N)
    c0 = m.initial_configuration()
    raw = defaultdict(lambda: defaultdict(Fraction))
    live = {(c0, (abstract_id(c0, x, abstraction, "first"),)): w}
    for t in range(1, horizon + 1):
        nxt = defaultdict(Fraction)
        for (c, seq), p in live.items():
            q = p * share
            for f in range(1, N + 1):
                c2, status = step(m, c, x, f)
                if status is HaltStatus.RUNNING:
                    nxt[(c2, seq + (abstract_id(c2, x, abstraction),))] += q
                elif status is HaltStatus.HALTED_PROPER:
                    raw[t][seq + (abstract_id(c2, x, abstraction, "last"),)] += q
        live = nxt
    return raw


def trajectory_law(m, prior, horizon, abstraction, workers=1):
    """Exact law of abstracted ID sequences, weighted by the prior.

    Only proper halts enter; halts on a proper prefix, overruns and runs still
    live at ``horizon`` are outside the conditioning event.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    if abstraction not in ABSTRACTIONS:
        raise ValueError(f"unknown abstraction {abstraction!r}")
    items = [(x, prior.weight(x)) for x in prior.support]

    def one(item):
        return _trajectories_one(m, item[0], item[1], horizon, abstraction)

    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, items))
    else:
        parts = [one(it) for it in items]
    merged = defaultdict(lambda: defaultdict(Fraction))
    for part in parts:
        for k, d in part.items():
            for seq, p in d.items():
                merged[k][seq] += p
    return _normalize_laws(merged, abstraction, horizon)


# -- non-halting bound-------------------------------------------------------

@dataclass(frozen=True)
class BoundRow:
    m: int
    pure_runs_halt: tuple
    running_mass: Fraction
    bound: Fraction
    applicable: bool
    bound_holds: bool
    slack: Fraction


def nonhalt_bound_check(m, input, max_m):
    """Check P(not halted after m steps) >= 2 * 2**-m while both pure runs are still going.

    ``running_mass`` counts every branch that has not halted: still live, or
    waiting on input beyond ``input``.  m starts at 1; at m = 0 the two pure
    sequences coincide and the bound does not apply.
    """
    if m.num_update_functions != 2:
        raise ValueError("the bound is stated for two update functions")
    fa = explore(m, input, max_m)
    pure = []
    for f in (1, 2):
        r = run_pure(m, f, input, max_m)
        pure.append(r.steps if r.status.halted else None)
    rows = []
    for k in range(1, max_m + 1):
        halts = tuple(h is not None and h <= k for h in pure)
        running = fa.trace[k].unhalted
        bound = Fraction(2, 2 ** k)
        applicable = not any(halts)
        rows.append(BoundRow(
            m=k,
            pure_runs_halt=halts,
            running_mass=running,
            bound=bound,
            applicable=applicable,
            bound_holds=(running >= bound) if applicable else True,
            slack=running - bound,
        ))
    return rows
