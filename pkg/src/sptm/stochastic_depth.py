"""Stochastic depth of outputs and the complexity-class probes built on it.

Depth values are carried as the exact rational ``2**-S``; the bit value
``S`` is derived only for display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .analysis import bayes_inverse, build_joint, modal_from_forward
from .engine import explore
from .errors import NoPosteriorSupportError, NotDeterministicError, SPTMError, ZeroPosteriorError
from .priors import make_prior, surprisal

VARIANTS = ("S0", "S1", "S2", "S0_sum", "S1_sum", "S2_sum")


def bits(q):
    """-log2 of a positive rational, without going through a tiny float."""
    if q <= 0:
        raise ValueError("bits() needs a positive rational")
    return math.log2(q.denominator) - math.log2(q.numerator)


@dataclass(frozen=True)
class DepthValue:
    variant: str
    exact: Optional[Fraction]
    witness: Optional[str] = None
    reason: str = ""

    @property
    def defined(self):
        return self.exact is not None

    @property
    def value(self):
        return bits(self.exact) if self.defined else None


@dataclass(frozen=True)
class DepthReport:
    y: str
    entries: dict
    notes: tuple = field(default=())

    def __getitem__(self, variant):
        return self.entries[variant]


def path_depth(j, x, y):
    """Depth of generating y from x: ``(bits, 2**-bits)`` of pi(in=x | out=y)."""
    post = bayes_inverse(j, y)
    q = post[x]
    if q == 0:
        raise ZeroPosteriorError(f"pi(in={x!r} | out={y!r}) = 0")
    return bits(q), q


def _argmax(pairs):
    # ties broken toward the shortlex-smallest input so witnesses are stable
    best = None
    for x, q in sorted(pairs, key=lambda kv: (len(kv[0]), kv[0])):
        if best is None or q > best[1]:
            best = (x, q)
    return best


def depth_report(j, y, variants=VARIANTS):
    entries = {}
    pre = j.preimage(y)
    mass_hat = j.modal_marginal.get(y, Fraction(0))
    try:
        post = bayes_inverse(j, y)
    except NoPosteriorSupportError:
        post = None
    for v in variants:
        if v not in VARIANTS:
            raise ValueError(f"unknown depth variant {v!r}")
        if v in ("S0", "S0_sum", "S1", "S1_sum"):
            if not pre or mass_hat == 0:
                entries[v] = DepthValue(v, None, reason=f"no input has modal output {y!r}")
                continue
            weights = [(x, j.prior.weight(x)) for x in pre]
            if v.startswith("S1"):
                weights = [(x, w / mass_hat) for x, w in weights]
            if v.endswith("_sum"):
                entries[v] = DepthValue(v, sum((w for _, w in weights), Fraction(0)))
            else:
                x, w = _argmax(weights)
                entries[v] = DepthValue(v, w, witness=x)
        else:
            if post is None:
                entries[v] = DepthValue(v, None, reason=f"pi(out={y!r}) = 0")
            elif v == "S2_sum":
                entries[v] = DepthValue(v, post.total())
            else:
                x, q = _argmax(post.probs.items())
                entries[v] = DepthValue(v, q, witness=x)
    notes = []
    if any(v in variants for v in ("S1_sum", "S2_sum")):
        notes.append("S1_sum and S2_sum are identically 0 whenever defined (the summed conditional is normalized)")
    return DepthReport(y, entries, tuple(notes))


def depth(j, y, variant):
    return depth_report(j, y, (variant,))[variant]


# -- deterministic limit -----------------------------------------------------

@dataclass(frozen=True)
class DetLimitReport:
    y: str
    k_bounded: int
    universal_probability: Fraction
    preimage: tuple
    s1: DepthValue
    s2: DepthValue
    s1_equals_s2: bool
    identity_holds: bool
    bounds_hold: bool
    certificate: dict

    @property
    def k_plus_log_q(self):
        return self.k_bounded + math.log2(self.universal_probability)


def _require_deterministic(m):
    if not m.is_deterministic:
        raise NotDeterministicError(f"machine {m.name!r} is not deterministic")


def det_limit_report(m, p, horizon, y, certificate=None, joint=None):
    """Check S1 = S2 = K_b(y) + log2 Q(y) for a deterministic machine.

    ``K_b`` is the shortest enumerated input producing y and Q the summed
    fair-coin weight of all of them, so both are relative to the explored
    support and horizon.
    """
    _require_deterministic(m)
    j = joint if joint is not None else build_joint(m, p, horizon)
    pre = tuple(x for x in j.prior.support if j.forwards[x].prob_output(y) == 1)
    if not pre:
        raise NoPosteriorSupportError(y)
    k = min(len(x) for x in pre)
    Q = sum((Fraction(1, 2 ** len(x)) for x in pre), Fraction(0))
    rep = depth_report(j, y, ("S1", "S2"))
    s1, s2 = rep["S1"], rep["S2"]
    predicted = Fraction(1, 2 ** k) / Q
    post = bayes_inverse(j, y)
    bounds = all(j.prior.weight(x) <= post[x] <= 1 for x in pre)
    return DetLimitReport(
        y=y,
        k_bounded=k,
        universal_probability=Q,
        preimage=pre,
        s1=s1,
        s2=s2,
        s1_equals_s2=s1.defined and s1.exact == s2.exact,
        identity_holds=s2.defined and s2.exact == predicted,
        bounds_hold=bounds,
        certificate=dict(certificate or {}, horizon=j.horizon),
    )


@dataclass(frozen=True)
class FanIn:
    y: str
    count: int
    depth: Optional[float]
    matches_s2: bool


def fanin_depth(m, p, y, horizon=64, joint=None):
    """Preimage size of y under a deterministic machine with a uniform prior."""
    _require_deterministic(m)
    j = joint if joint is not None else build_joint(m, p, horizon)
    weights = {j.prior.weight(x) for x in j.prior.support}
    if len(weights) > 1:
        raise ValueError("fan-in reduction needs a uniform prior")
    count = sum(1 for x in j.prior.support if j.forwards[x].prob_output(y) == 1)
    if count == 0:
        return FanIn(y, 0, None, False)
    s2 = depth(j, y, "S2")
    return FanIn(y, count, math.log2(count), s2.exact == Fraction(1, count))


# -- class probes ------------------------------------------------------------

@dataclass(frozen=True)
class ClassProbe:
    n: int
    ball: tuple
    preimages: dict
    decider: bool
    energy_rows: tuple
    energy_constant: Optional[int]
    polynomial_energy_consistent: Optional[bool]
    one_way: Optional[dict]


def _fit_constant(rows, cap=256):
    """Least integer c >= 0 with 2**s <= n(x)**c + c on every row (empirical)."""
    if not rows:
        return None
    for c in range(cap + 1):
        if all(float(e) <= nx ** c + c + 1e-12 for _x, nx, e in rows):
            return c
    return None


def class_probes(j, n, poly_degree=2, epsilon=None, inverter=None):
    """B_n, preimages, decider flag, energy table and an optional one-way trial.

    The energy fit and the one-way comparison are statements about this
    finite sample only.
    """
    p = j.prior
    ball = tuple(x for x in p.support if p.weight(x) >= Fraction(1, 2 ** n))
    pre = {}
    for x, mo in j.modal.items():
        if mo.defined:
            pre.setdefault(mo.value, []).append(x)
    preimages = {y: tuple(xs) for y, xs in sorted(pre.items())}
    decider = all(y in ("0", "1") for y in preimages)

    rows = []
    for x, mo in j.modal.items():
        if not mo.defined or p.weight(x) == 0:
            continue
        _s, q = path_depth(j, x, mo.value)
        rows.append((x, surprisal(p, x), 1 / q))
    c = _fit_constant(rows)

    one_way = None
    if epsilon is not None:
        if inverter is None:
            raise SPTMError("the one-way trial needs an inverter JointLaw")
        epsilon = Fraction(epsilon)
        hit = Fraction(0)
        z = sum((p.weight(x) for x in ball), Fraction(0))
        for x in ball:
            y = j.modal[x].value
            if y is None:
                continue
            if y in inverter.forwards:
                guess = inverter.modal[y]
            else:
                guess = modal_from_forward(_explore_for(inverter, y), inverter.tie_break,
                                           inverter.robust_margin)
            if guess.defined and guess.value in preimages.get(y, ()):
                hit += p.weight(x)
        success = hit / z if z else Fraction(0)
        one_way = {
            "success": success,
            "epsilon": epsilon,
            "consistent_with_one_way": success <= epsilon,
        }
    return ClassProbe(
        n=n,
        ball=ball,
        preimages=preimages,
        decider=decider,
        energy_rows=tuple(rows),
        energy_constant=c,
        polynomial_energy_consistent=None if c is None else c <= poly_degree,
        one_way=one_way,
    )


def _explore_for(j, x):
    return explore(j.machine, x, j.horizon)


def inverter_joint(m, outputs, horizon, tie_break="undefined", robust_margin=False):
    """JointLaw whose support is exactly ``outputs``; modal maps ignore the prior."""
    outputs = sorted(set(outputs), key=lambda s: (len(s), s))
    p = make_prior("explicit", table=[(y, Fraction(1, 2 ** len(y))) for y in outputs])
    return build_joint(m, p, horizon, tie_break, robust_margin)
