"""Invariant suite and zoo fact replay behind ``sptm check``."""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from . import analysis, engine, entropy, oracle, priors
from . import stochastic_depth as depth
from .errors import NoHaltingMassError
from .machine import run_pure
from .zoo import ZOO_NAMES, zoo_entry, zoo_machine

ENTROPY_TOL = 1e-9
ORACLE_MAX_HORIZON = 12
TRAJECTORY_MAX_HORIZON = 10


class CheckResult(NamedTuple):
    name: str
    status: str  # PASS, FAIL or SKIP
    detail: str = ""

    @property
    def failed(self):
        return self.status == "FAIL"


def _q(v):
    return f"{v.numerator}/{v.denominator}"


def _result(name, ok, detail=""):
    return CheckResult(name, "PASS" if ok else "FAIL", detail)


def _guard(name, fn):
    try:
        out = fn()
    except Exception as exc:  # a crashing invariant is a failing invariant
        return CheckResult(name, "FAIL", f"{type(exc).__name__}: {exc}")
    if isinstance(out, CheckResult):
        return out
    ok, detail = out if isinstance(out, tuple) else (out, "")
    return _result(name, ok, detail)


# -- generic invariants ------------------------------------------------------

def _oracle_equivalence(m, p, horizon):
    T = min(horizon, ORACLE_MAX_HORIZON)
    for x in p.support:
        recs, mass = oracle.naive_forward(m, x, T)
        fa = engine.explore(m, x, T)
        if recs != fa.halting_records or mass != fa.mass:
            return False, f"mismatch on input {x!r} at horizon {T}"
    return True, f"{len(p.support)} input(s), horizon {T}"


def _mass_conservation(j):
    for x, fa in j.forwards.items():
        for t, mb in enumerate(fa.trace):
            if mb.total() != 1:
                return False, f"input {x!r} depth {t}: total {_q(mb.total())}"
    return True


def _monotone(j):
    for x, fa in j.forwards.items():
        for a, b in zip(fa.trace, fa.trace[1:]):
            if b.halted_proper < a.halted_proper or b.running > a.running:
                return False, f"input {x!r}"
    return True


def _kraft(p):
    total = priors.kraft_check(p)
    return (not p.prefix_free or total <= 1), f"total {_q(total)}"


def _joint_consistency(j):
    for (x, y), v in j.table.items():
        if v != j.prior.weight(x) * j.forwards[x].prob_output(y):
            return False, f"entry ({x!r}, {y!r})"
    return True


def _marginal_bounds(j):
    kraft = j.prior.total
    s_out = sum(j.out_marginal.values(), Fraction(0))
    s_hat = sum(j.modal_marginal.values(), Fraction(0))
    return (s_out <= kraft and s_hat <= kraft), f"sum pi(out)={_q(s_out)}, sum pi(mode)={_q(s_hat)}, kraft={_q(kraft)}"


def _posterior_normalization(j):
    for y in j.out_marginal:
        if analysis.bayes_inverse(j, y).total() != 1:
            return False, f"y={y!r}"
    return True, f"{len(j.out_marginal)} output(s)"


def _scale_invariance(j, factor=Fraction(1, 3)):
    j2 = j.with_prior(j.prior.scaled(factor))
    for y in j.out_marginal:
        if analysis.bayes_inverse(j, y).probs != analysis.bayes_inverse(j2, y).probs:
            return False, f"posterior for y={y!r}"
        for v in ("S1", "S2"):
            if depth.depth(j, y, v).exact != depth.depth(j2, y, v).exact:
                return False, f"{v} for y={y!r}"
    if j.modal != j2.modal:
        return False, "modal map"
    return True, f"scale {factor}"


def _modal_prior_independence(j):
    flat = priors.make_prior("explicit", table=[(x, 1) for x in j.prior.support])
    return j.with_prior(flat).modal == j.modal


def _depth_relations(j):
    ys = sorted(set(j.out_marginal) | set(j.modal_marginal))
    for y in ys:
        r = depth.depth_report(j, y)
        s0, s1, s0s = r["S0"], r["S1"], r["S0_sum"]
        if s1.defined and s0.defined:
            # 2**-S1 >= 2**-S0 is S1 <= S0
            if not s1.exact >= s0.exact:
                return False, f"S1 > S0 for y={y!r}"
            if s1.exact * s0s.exact != s0.exact:
                return False, f"S1 != S0 - S0_sum for y={y!r}"
        for v in ("S1_sum", "S2_sum"):
            if r[v].defined and r[v].exact != 1:
                return False, f"{v} != 0 for y={y!r}"
    return True, f"{len(ys)} output(s)"


def _deterministic_limit(j):
    if not j.machine.is_deterministic or j.prior.kind != "faircoin":
        return CheckResult("depth.deterministic_limit", "SKIP", "needs a deterministic machine and faircoin prior")
    for y in j.out_marginal:
        rep = depth.det_limit_report(j.machine, j.prior, j.horizon, y, joint=j)
        if not (rep.s1_equals_s2 and rep.identity_holds and rep.bounds_hold):
            return False, f"y={y!r}"
    return True, f"{len(j.out_marginal)} output(s)"


def _fanin(j):
    weights = {j.prior.weight(x) for x in j.prior.support}
    if not j.machine.is_deterministic or len(weights) != 1:
        return CheckResult("depth.fanin", "SKIP", "needs a deterministic machine and uniform prior")
    for y in j.out_marginal:
        fi = depth.fanin_depth(j.machine, j.prior, y, joint=j)
        if not fi.matches_s2:
            return False, f"y={y!r}"
    return True


def _nonhalt(m, p, horizon):
    if m.num_update_functions != 2:
        return CheckResult("engine.nonhalt_bound", "SKIP", "needs two update functions")
    T = min(horizon, ORACLE_MAX_HORIZON)
    if T < 1:
        return CheckResult("engine.nonhalt_bound", "SKIP", "horizon 0")
    applicable = 0
    for x in p.support:
        for row in engine.nonhalt_bound_check(m, x, T):
            applicable += row.applicable
            if not row.bound_holds:
                return False, f"input {x!r} m={row.m}"
    return True, f"{applicable} applicable row(s)"


def _entropy_checks(m, p, horizon):
    out = []
    T = min(horizon, TRAJECTORY_MAX_HORIZON)
    for ab in engine.ABSTRACTIONS:
        prefix = f"entropy.{ab}"
        try:
            tl = engine.trajectory_law(m, p, T, ab)
        except (NoHaltingMassError, ValueError) as exc:
            out.append(CheckResult(prefix, "SKIP", str(exc)))
            continue

        def nonneg():
            for k in tl.laws:
                if min(entropy.step_entropies(tl, k), default=0.0) < 0 or entropy.endpoint_entropy(tl, k) < 0:
                    return False, f"k={k}"
            return True

        def chain():
            worst = 0.0
            for k in tl.laws:
                lhs = sum(entropy.step_entropies(tl, k))
                rhs = entropy.path_entropy(tl, k)
                worst = max(worst, abs(lhs - rhs))
                if entropy.endpoint_entropy(tl, k) > rhs + ENTROPY_TOL:
                    return False, f"endpoint exceeds path entropy at k={k}"
            return worst <= ENTROPY_TOL, f"max deviation {worst:.3e} bits"

        def brute():
            ref = oracle.naive_trajectory_law(m, p, T, ab)
            if ref.weights != tl.weights or ref.laws != tl.laws:
                return False, "exact laws differ"
            worst = 0.0
            for k in tl.laws:
                for a, b in zip(entropy.step_entropies(tl, k), entropy.step_entropies(ref, k)):
                    worst = max(worst, abs(a - b))
            return worst <= ENTROPY_TOL

        def invertible():
            inv = [k for k in tl.laws if entropy.backward_point_masses(tl, k)]
            for k in inv:
                if any(entropy.step_entropies(tl, k)) or entropy.endpoint_entropy(tl, k):
                    return False, f"nonzero entropy with point-mass backward law at k={k}"
            return True, f"{len(inv)}/{len(tl.laws)} halting time(s) exactly invertible"

        out.append(_guard(f"{prefix}.nonnegative", nonneg))
        out.append(_guard(f"{prefix}.reverse_chain_rule", chain))
        out.append(_guard(f"{prefix}.bruteforce_equivalence", brute))
        out.append(_guard(f"{prefix}.invertible_zero", invertible))
    return out


def run_invariants(m, p, horizon, workers=1, tie_break="undefined", robust_margin=False):
    j = analysis.build_joint(m, p, horizon, tie_break, robust_margin, workers=workers)
    results = [
        _guard("engine.oracle_equivalence", lambda: _oracle_equivalence(m, p, horizon)),
        _guard("engine.mass_conservation", lambda: _mass_conservation(j)),
        _guard("engine.monotonicity", lambda: _monotone(j)),
        _guard("engine.nonhalt_bound", lambda: _nonhalt(m, p, horizon)),
        _guard("priors.kraft", lambda: _kraft(p)),
        _guard("priors.prefix_free", lambda: p.prefix_free if p.kind == "faircoin" else
               CheckResult("priors.prefix_free", "SKIP", f"{p.kind} prior")),
        _guard("analysis.joint_consistency", lambda: _joint_consistency(j)),
        _guard("analysis.marginal_bounds", lambda: _marginal_bounds(j)),
        _guard("analysis.posterior_normalization", lambda: _posterior_normalization(j)),
        _guard("analysis.prior_scale_invariance", lambda: _scale_invariance(j)),
        _guard("analysis.modal_prior_independence", lambda: _modal_prior_independence(j)),
        _guard("depth.relations", lambda: _depth_relations(j)),
        _guard("depth.deterministic_limit", lambda: _deterministic_limit(j)),
        _guard("depth.fanin", lambda: _fanin(j)),
    ]
    results += _entropy_checks(m, p, horizon)
    return results


# -- zoo facts ---------------------------------------------------------------

def _faircoin(strings):
    return priors.make_prior("faircoin", strings=strings)


def _fact(m, fact):
    kind, *args = fact
    if kind == "run_pure":
        f, x, T, status, out, steps = args
        r = run_pure(m, f, x, T)
        return (r.status.value, r.output, r.steps) == (status, out, steps)
    if kind == "forward":
        x, T, outs, masses = args
        fa = engine.explore(m, x, T)
        return fa.output_probs == outs and all(getattr(fa.mass, k) == v for k, v in masses.items())
    if kind == "tau":
        x, T, taus = args
        return engine.explore(m, x, T).tau_probs == taus
    if kind == "halting_set":
        f, L, T, members = args
        return priors.enumerate_halting_set(m, f, L, T).members == members
    if kind == "joint":
        S, T, entries, marg = args
        j = analysis.build_joint(m, _faircoin(S), T)
        return all(j.table.get(k) == v for k, v in entries.items()) and j.out_marginal == marg
    if kind == "posterior":
        S, T, y, post = args
        return analysis.bayes_inverse(analysis.build_joint(m, _faircoin(S), T), y).probs == post
    if kind == "modal":
        S, T, x, tb, rm, expect = args
        j = analysis.build_joint(m, _faircoin(S), T)
        return analysis.modal_output(j, x, tb, rm).value == expect
    if kind == "modal_mass":
        S, T, y, v = args
        return analysis.modal_mass(analysis.build_joint(m, _faircoin(S), T), y) == v
    if kind == "depth":
        S, T, y, variant, exact = args
        return depth.depth(analysis.build_joint(m, _faircoin(S), T), y, variant).exact == exact
    if kind == "path_depth":
        S, T, x, y, exact = args
        return depth.path_depth(analysis.build_joint(m, _faircoin(S), T), x, y)[1] == exact
    if kind == "detlimit":
        T, y, k, Q = args
        p = priors.enumerate_halting_set(m, 1, 4, T).prior()
        rep = depth.det_limit_report(m, p, T, y)
        return (rep.k_bounded, rep.universal_probability) == (k, Q) and rep.identity_holds and rep.s1_equals_s2
    if kind == "fanin":
        n, y, count = args
        fi = depth.fanin_depth(m, priors.make_prior("uniform_n", n=n), y, horizon=10)
        return fi.count == count and fi.matches_s2
    if kind == "step_entropies":
        S, T, ab, k, expect = args
        got = entropy.step_entropies(engine.trajectory_law(m, _faircoin(S), T, ab), k)
        return len(got) == len(expect) and all(abs(a - b) <= ENTROPY_TOL for a, b in zip(got, expect))
    if kind == "endpoint":
        S, T, ab, summed, endpoint, io = args
        p = _faircoin(S)
        c = entropy.endpoint_comparison(engine.trajectory_law(m, p, T, ab), analysis.build_joint(m, p, T))
        got = (c["summed_backward"], c["expected_endpoint"], c["io_entropy"])
        return all(abs(a - b) <= ENTROPY_TOL for a, b in zip(got, (summed, endpoint, io)))
    if kind == "backward":
        S, T, ab, v = args
        return abs(entropy.expected_backward_entropy(engine.trajectory_law(m, _faircoin(S), T, ab)) - v) <= ENTROPY_TOL
    if kind == "weights":
        S, T, ab, w = args
        return engine.trajectory_law(m, _faircoin(S), T, ab).weights == w
    if kind == "nonhalt":
        x, M, expect = args
        rows = {r.m: r for r in engine.nonhalt_bound_check(m, x, M)}
        return all(rows[k].running_mass == v and rows[k].bound_holds for k, v in expect.items())
    if kind == "nonhalt_na":
        x, M, first_na = args
        rows = engine.nonhalt_bound_check(m, x, M)
        return all(r.applicable == (r.m < first_na) for r in rows)
    if kind == "totality":
        S, T, residual = args
        row = analysis.totality_probe(m, _faircoin(S), [T])[0]
        return row.max_residual == residual
    raise ValueError(f"unknown fact kind {kind!r}")


def zoo_name_of(m):
    for name in ZOO_NAMES:
        if zoo_machine(name).content_hash == m.content_hash:
            return name
    return None


def run_zoo_facts(name):
    entry = zoo_entry(name)
    m = zoo_machine(name)
    out = []
    for i, fact in enumerate(entry.facts):
        label = f"zoo.{name}.{i:02d}.{fact[0]}"
        out.append(_guard(label, lambda fact=fact: _fact(m, fact)))
    return out


def run_check(m, p, horizon, workers=1, tie_break="undefined", robust_margin=False):
    results = run_invariants(m, p, horizon, workers, tie_break, robust_margin)
    name = zoo_name_of(m)
    if name is not None:
        results += run_zoo_facts(name)
    return results
