"""Joint input/output law of an SPTM, Bayesian inverses and modal outputs.

Everything is truncated at an explicit horizon: ``pi(out=y)`` is a certified
lower bound and the unresolved mass is always carried alongside.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Optional

from .engine import explore_many
from .errors import NoPosteriorSupportError, OutOfSupportError

TIE_BREAKS = ("undefined", "lex")


class ModalOutput(NamedTuple):
    value: Optional[str]
    reason: str = ""

    @property
    def defined(self):
        return self.value is not None


def modal_from_forward(fa, tie_break="undefined", robust_margin=False):
    """Most probable output of one ForwardAnalysis; independent of any prior."""
    probs = fa.output_probs
    if not probs or fa.mass.halted_proper == 0:
        return ModalOutput(None, "no-halting")
    ranked = sorted(probs.items(), key=lambda kv: (-kv[1], kv[0]))
    best_y, best_p = ranked[0]
    runner_up = ranked[1][1] if len(ranked) > 1 else Fraction(0)
    if runner_up == best_p and tie_break == "undefined":
        return ModalOutput(None, "tie")
    if robust_margin:
        n = len(fa.input)
        if n == 0 or best_p - runner_up < Fraction(1, n):
            return ModalOutput(None, "margin")
    # with lex tie-breaking ``ranked`` already puts the smallest string first
    return ModalOutput(best_y, "")


@dataclass(frozen=True)
class JointLaw:
    machine: object
    prior: object
    horizon: int
    forwards: dict
    tie_break: str = "undefined"
    robust_margin: bool = False

    @cached_property
    def table(self):
        tab = {}
        for x in self.prior.support:
            w = self.prior.weight(x)
            for y, p in self.forwards[x].output_probs.items():
                if w * p:
                    tab[(x, y)] = w * p
        return tab

    @cached_property
    def out_marginal(self):
        out = defaultdict(Fraction)
        for (_x, y), p in self.table.items():
            out[y] += p
        return dict(sorted(out.items(), key=lambda kv: (len(kv[0]), kv[0])))

    @cached_property
    def modal(self):
        return {
            x: modal_from_forward(self.forwards[x], self.tie_break, self.robust_margin)
            for x in self.prior.support
        }

    @cached_property
    def modal_marginal(self):
        out = defaultdict(Fraction)
        for x, mo in self.modal.items():
            if mo.defined:
                out[mo.value] += self.prior.weight(x)
        return dict(sorted(out.items(), key=lambda kv: (len(kv[0]), kv[0])))

    def residuals(self, x):
        """Prior-weighted unresolved masses for input ``x``."""
        w = self.prior.weight(x)
        m = self.forwards[x].mass
        return {
            "halted_on_proper_prefix": w * m.halted_on_proper_prefix,
            "input_overrun": w * m.input_overrun,
            "running": w * m.running,
        }

    @cached_property
    def total_residuals(self):
        tot = defaultdict(Fraction)
        for x in self.prior.support:
            for k, v in self.residuals(x).items():
                tot[k] += v
        return dict(tot)

    def preimage(self, y):
        return tuple(x for x, mo in self.modal.items() if mo.value == y)

    def with_prior(self, prior):
        """Same machine and horizon under a prior with the same support."""
        if set(prior.support) - set(self.forwards):
            raise ValueError("new prior has inputs that were never explored")
        return JointLaw(self.machine, prior, self.horizon, self.forwards,
                        self.tie_break, self.robust_margin)


def build_joint(m, p, horizon, tie_break="undefined", robust_margin=False, workers=1):
    if tie_break not in TIE_BREAKS:
        raise ValueError(f"tie_break must be one of {TIE_BREAKS}")
    fas = explore_many(m, p.support, horizon, workers=workers)
    return JointLaw(m, p, horizon, dict(zip(p.support, fas)), tie_break, robust_margin)


@dataclass(frozen=True)
class PosteriorLaw:
    y: str
    probs: dict

    def __getitem__(self, x):
        return self.probs.get(x, Fraction(0))

    def total(self):
        return sum(self.probs.values(), Fraction(0))


def bayes_inverse(j, y):
    """pi(in = x | out = y) over the prior support."""
    z = j.out_marginal.get(y, Fraction(0))
    if z == 0:
        raise NoPosteriorSupportError(y)
    probs = {x: p / z for (x, yy), p in j.table.items() if yy == y}
    return PosteriorLaw(y, probs)


def modal_output(j, x, tie_break=None, robust_margin=None):
    """Modal output of ``x``; options default to those the JointLaw was built with."""
    if x not in j.forwards:
        raise OutOfSupportError(f"{x!r} is not in the prior support")
    tb = j.tie_break if tie_break is None else tie_break
    rm = j.robust_margin if robust_margin is None else robust_margin
    return modal_from_forward(j.forwards[x], tb, rm)


def modal_mass(j, y):
    """pi(modal output = y): summed prior weight of inputs whose mode is y."""
    return j.modal_marginal.get(y, Fraction(0))


@dataclass(frozen=True)
class TotalityRow:
    horizon: int
    halted: dict
    residual: dict
    min_halted: Fraction
    max_residual: Fraction

    @property
    def within_bits(self):
        """Largest c with every residual <= 2**-c (inf when nothing is left)."""
        if self.max_residual == 0:
            return math.inf
        r = self.max_residual
        c = math.floor(math.log2(r.denominator) - math.log2(r.numerator))
        while Fraction(1, 2 ** c) < r:
            c -= 1
        while Fraction(1, 2 ** (c + 1)) >= r:
            c += 1
        return c


def totality_probe(m, p, horizons, workers=1):
    """Halting mass per input at each horizon.  Never claims unbounded totality."""
    horizons = sorted(set(horizons))
    if not horizons:
        return []
    fas = explore_many(m, p.support, horizons[-1], workers=workers)
    rows = []
    for T in horizons:
        halted = {fa.input: fa.trace[T].halted_proper for fa in fas}
        residual = {x: 1 - h for x, h in halted.items()}
        rows.append(TotalityRow(
            horizon=T,
            halted=halted,
            residual=residual,
            min_halted=min(halted.values(), default=Fraction(1)),
            max_residual=max(residual.values(), default=Fraction(0)),
        ))
    return rows
