"""``sptm`` command-line frontend.

Exit codes: 0 success, 1 usage error, 2 analysis error, 3 invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import analysis, engine, entropy, priors, selftest
from . import stochastic_depth as depth
from .errors import SPTMError
from .machine import parse_machine
from .zoo import ZOO_NAMES, zoo_entry, zoo_machine

DEFAULT_MAXLEN = 6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def q(v):
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def fmt_float(v):
    return f"{v:.6f}"


# -- argument helpers ----------------------------------------------------------

def load_machine(ref):
    if ref.startswith("zoo:"):
        name = ref[4:]
        if name not in ZOO_NAMES:
            raise UsageError(f"unknown zoo machine {name!r}; choose from {', '.join(ZOO_NAMES)}")
        return zoo_machine(name)
    path = Path(ref)
    if not path.is_file():
        raise UsageError(f"no such machine file: {ref}")
    return parse_machine(path.read_text(encoding="utf-8"))


def parse_prior_spec(spec, m, horizon):
    """Return ``(prior, certificate)`` for a prior spec string."""
    kind, _, rest = spec.partition(":")
    if kind == "faircoin":
        opts = {}
        for part in filter(None, rest.split(",")):
            key, eq, val = part.partition("=")
            if not eq or key not in ("fn", "maxlen", "set"):
                raise UsageError(f"bad faircoin option {part!r}")
            opts[key] = val
        if "set" in opts:
            strings = [s for s in opts["set"].split("+")]
            return priors.make_prior("faircoin", strings=strings), {"support": "explicit set"}
        try:
            fn = int(opts.get("fn", 1))
            maxlen = int(opts.get("maxlen", DEFAULT_MAXLEN))
        except ValueError:
            raise UsageError(f"bad faircoin options in {spec!r}") from None
        if not 1 <= fn <= m.num_update_functions:
            raise UsageError(f"fn={fn} out of range for {m.num_update_functions} update functions")
        hs = priors.enumerate_halting_set(m, fn, maxlen, max(horizon, 1))
        cert = {"halting_set": {"fn": fn, "L_max": maxlen, "horizon": max(horizon, 1)}}
        return hs.prior(), cert
    if kind == "uniform":
        if not rest.isdigit():
            raise UsageError(f"uniform prior needs a length, got {spec!r}")
        n = int(rest)
        return priors.make_prior("uniform_n", n=n), {"note": f"uniform over length exactly {n}"}
    if kind == "file":
        path = Path(rest)
        if not path.is_file():
            raise UsageError(f"no such prior file: {rest}")
        return priors.read_prior_file(path.read_text(encoding="utf-8")), {"file": rest}
    raise UsageError(f"unknown prior spec {spec!r}")


def parse_bits(s, what):
    if any(ch not in "01" for ch in s):
        raise UsageError(f"{what} must be a bit string, got {s!r}")
    return s


# -- report assembly -----------------------------------------------------------

def machine_block(m):
    return {"name": m.name, "sha256": m.content_hash}


def prior_block(spec, p):
    if p is None:
        return None
    return {
        "spec": spec,
        "kind": p.kind,
        "description": p.description,
        "support_size": len(p.support),
        "kraft_total": q(p.total),
        "normalized": p.normalized,
    }


def mass_dict(mb):
    return {
        "halted_proper": q(mb.halted_proper),
        "halted_on_proper_prefix": q(mb.halted_on_proper_prefix),
        "input_overrun": q(mb.input_overrun),
        "running": q(mb.running),
    }


def report(command, m, prior, horizon, result, mass=None, certificates=None, text=()):
    return {
        "command": command,
        "machine": machine_block(m) if m is not None else None,
        "prior": prior,
        "horizon": horizon,
        "result": result,
        "mass": mass or {},
        "certificates": certificates or {},
    }, list(text)


def emit(rep, text_lines, fmt, out):
    if fmt == "json":
        out.write(json.dumps(rep, indent=2) + "\n")
        return
    head = [f"command: {rep['command']}"]
    if rep["machine"]:
        head.append(f"machine: {rep['machine']['name']} (sha256 {rep['machine']['sha256'][:16]})")
    if rep["prior"]:
        pb = rep["prior"]
        head.append(f"prior: {pb['description']} [{pb['support_size']} string(s), kraft total {pb['kraft_total']}]")
    if rep["horizon"] is not None:
        head.append(f"horizon: {rep['horizon']}")
    lines = head + list(text_lines)
    if rep["mass"]:
        lines.append("residual mass:")
        lines += [f"  {k} = {v}" for k, v in rep["mass"].items()]
    if rep["certificates"]:
        lines.append("certificates: " + json.dumps(rep["certificates"]))
    out.write("\n".join(lines) + "\n")


# -- commands ------------------------------------------------------------------

def _echo(args, *extra):
    parts = [args.command]
    if getattr(args, "machine", None):
        parts.append(args.machine)
    for flag in extra:
        val = getattr(args, flag.replace("-", "_"), None)
        if val is not None and val is not False:
            parts.append(f"--{flag}" if val is True else f"--{flag} {val}")
    # options that change results are always echoed; --threads never is
    if "tie-break" not in extra and getattr(args, "tie_break", "undefined") != "undefined":
        parts.append(f"--tie-break {args.tie_break}")
    if "robust-margin" not in extra and getattr(args, "robust_margin", False):
        parts.append("--robust-margin")
    return " ".join(parts)


def _joint_from_args(args):
    m = load_machine(args.machine)
    p, cert = parse_prior_spec(args.prior, m, args.horizon)
    j = analysis.build_joint(m, p, args.horizon, args.tie_break, args.robust_margin, workers=args.threads)
    cert = dict(cert, horizon=args.horizon)
    return m, p, j, cert


def _joint_mass(j):
    return {k: q(v) for k, v in sorted(j.total_residuals.items())}


def cmd_validate(args):
    m = load_machine(args.file)
    result = {
        "states": list(m.states),
        "start": m.start,
        "updates": m.num_update_functions,
        "work_tapes": m.work_tape_count,
        "rules": len(m.rules),
        "deterministic": m.is_deterministic,
    }
    text = [f"valid: {len(m.states)} states, {len(m.rules)} rules, N={m.num_update_functions}, "
            f"deterministic={m.is_deterministic}"]
    return report(f"validate {args.file}", m, None, None, result, text=text)


def cmd_zoo(args):
    if args.name:
        if args.name not in ZOO_NAMES:
            raise UsageError(f"unknown zoo machine {args.name!r}")
        e = zoo_entry(args.name)
        result = {"name": e.name, "description": e.description, "source": e.source, "facts": len(e.facts)}
        return report(f"zoo {args.name}", e.machine, None, None, result,
                      text=[f"# {e.description}", e.source.rstrip("\n")])
    rows = [{"name": n, "description": zoo_entry(n).description} for n in ZOO_NAMES]
    return report("zoo", None, None, None, {"machines": rows},
                  text=[f"{r['name']:8s} {r['description']}" for r in rows])


def cmd_forward(args):
    m = load_machine(args.machine)
    x = parse_bits(args.input, "--input")
    fa = engine.explore(m, x, args.horizon)
    halting = [{"output": y, "tau": t, "prob": q(p)} for (y, t), p in fa.halting_records.items()]
    outs = [{"output": y, "prob": q(p), "float": float(p)} for y, p in fa.output_probs.items()]
    taus = [{"tau": t, "prob": q(p)} for t, p in fa.tau_probs.items()]
    result = {"input": x, "halting": halting, "outputs": outs, "tau": taus}
    text = [f"input: {x!r}"]
    text += [f"pi(out={o['output']!r} | in) = {o['prob']} ({fmt_float(o['float'])})" for o in outs]
    text += [f"pi(tau={t['tau']} | in) = {t['prob']}" for t in taus]
    return report(_echo(args, "input", "horizon"), m, None, args.horizon, result, mass_dict(fa.mass),
                  {"horizon": args.horizon}, text)


def cmd_joint(args):
    m, p, j, cert = _joint_from_args(args)
    table = [{"input": x, "output": y, "prob": q(v)} for (x, y), v in j.table.items()]
    marg = [{"output": y, "prob": q(v)} for y, v in j.out_marginal.items()]
    modal = [{"input": x, "modal": mo.value, "reason": mo.reason} for x, mo in j.modal.items()]
    mm = [{"output": y, "prob": q(v)} for y, v in j.modal_marginal.items()]
    result = {"table": table, "out_marginal": marg, "modal": modal, "modal_marginal": mm}
    text = [f"pi(in={r['input']!r}, out={r['output']!r}) = {r['prob']}" for r in table]
    text += [f"pi(out={r['output']!r}) = {r['prob']}" for r in marg]
    text += [f"mode({r['input']!r}) = {r['modal']!r}" + (f" [{r['reason']}]" if r["reason"] else "")
             for r in modal]
    text += [f"pi(mode={r['output']!r}) = {r['prob']}" for r in mm]
    return report(_echo(args, "prior", "horizon"), m, prior_block(args.prior, p), args.horizon,
                  result, _joint_mass(j), cert, text)


def cmd_inverse(args):
    m, p, j, cert = _joint_from_args(args)
    y = parse_bits(args.output, "--output")
    post = analysis.bayes_inverse(j, y)
    rows = [{"input": x, "prob": q(v), "float": float(v)} for x, v in post.probs.items()]
    text = [f"pi(in={r['input']!r} | out={y!r}) = {r['prob']} ({fmt_float(r['float'])})" for r in rows]
    return report(_echo(args, "prior", "horizon", "output"), m, prior_block(args.prior, p), args.horizon,
                  {"output": y, "posterior": rows}, _joint_mass(j), cert, text)


def _depth_row(dv):
    return {
        "variant": dv.variant,
        "defined": dv.defined,
        "bits": dv.value,
        "exact": q(dv.exact) if dv.defined else None,
        "witness": dv.witness,
        "reason": dv.reason,
    }


def _depth_line(dv):
    if not dv.defined:
        return f"{dv.variant} undefined ({dv.reason})"
    return f"{dv.variant} = {fmt_float(dv.value)} bits (2^-{dv.variant} = {q(dv.exact)})"


def cmd_depth(args):
    m, p, j, cert = _joint_from_args(args)
    y = parse_bits(args.output, "--output")
    variants = tuple(v.strip() for v in args.variants.split(",") if v.strip())
    bad = [v for v in variants if v not in depth.VARIANTS]
    if bad:
        raise UsageError(f"unknown variant(s) {', '.join(bad)}; choose from {', '.join(depth.VARIANTS)}")
    rep = depth.depth_report(j, y, variants)
    rows = [_depth_row(rep[v]) for v in variants]
    text = [_depth_line(rep[v]) for v in variants] + [f"note: {n}" for n in rep.notes]
    return report(_echo(args, "prior", "horizon", "output", "variants"), m, prior_block(args.prior, p),
                  args.horizon, {"output": y, "depths": rows, "notes": list(rep.notes)}, _joint_mass(j), cert, text)


def cmd_pathdepth(args):
    m, p, j, cert = _joint_from_args(args)
    x = parse_bits(args.input, "--input")
    y = parse_bits(args.output, "--output")
    s, exact = depth.path_depth(j, x, y)
    result = {"input": x, "output": y, "bits": s, "exact": q(exact)}
    text = [f"s({x!r} -> {y!r}) = {fmt_float(s)} bits (pi(in|out) = {q(exact)})"]
    return report(_echo(args, "prior", "horizon", "input", "output"), m, prior_block(args.prior, p),
                  args.horizon, result, _joint_mass(j), cert, text)


def cmd_entropy(args):
    m, p, j, cert = _joint_from_args(args)
    tl = engine.trajectory_law(m, p, args.horizon, args.abstraction, workers=args.threads)
    prof = entropy.entropy_profile(tl, j)
    per_k = [
        {"k": k, "weight": q(tl.weights[k]), "step_entropies": list(prof.steps[k]), "endpoint": prof.endpoints[k]}
        for k in tl.laws
    ]
    result = {
        "abstraction": prof.abstraction,
        "halting_times": per_k,
        "summed_backward": prof.summed_backward,
        "expected_endpoint": prof.expected_endpoint,
        "io_entropy": prof.io_entropy,
        "gap": prof.gap,
    }
    text = [f"abstraction: {prof.abstraction}"]
    for r in per_k:
        steps = ", ".join(fmt_float(v) for v in r["step_entropies"])
        text.append(f"k={r['k']} weight {r['weight']}: steps [{steps}] endpoint {fmt_float(r['endpoint'])}")
    text += [
        f"expected summed backward entropy = {fmt_float(prof.summed_backward)} bits",
        f"expected endpoint entropy = {fmt_float(prof.expected_endpoint)} bits",
        f"S(in|out) = {fmt_float(prof.io_entropy)} bits",
        f"gap = {fmt_float(prof.gap)} bits",
    ]
    mass = {"halting_within_horizon": q(tl.halting_mass)}
    return report(_echo(args, "prior", "horizon", "abstraction"), m, prior_block(args.prior, p),
                  args.horizon, result, mass, cert, text)


def cmd_detlimit(args):
    m, p, j, cert = _joint_from_args(args)
    y = parse_bits(args.output, "--output")
    rep = depth.det_limit_report(m, p, args.horizon, y, certificate=cert, joint=j)
    result = {
        "output": y,
        "K_bounded": rep.k_bounded,
        "Q": q(rep.universal_probability),
        "k_plus_log_q": rep.k_plus_log_q,
        "preimage": list(rep.preimage),
        "S1": _depth_row(rep.s1),
        "S2": _depth_row(rep.s2),
        "S1_equals_S2": rep.s1_equals_s2,
        "identity_holds": rep.identity_holds,
        "bounds_hold": rep.bounds_hold,
    }
    text = [
        f"K_bounded({y!r}) = {rep.k_bounded}",
        f"Q({y!r}) = {q(rep.universal_probability)}",
        f"K_bounded + log2 Q = {fmt_float(rep.k_plus_log_q)} bits",
        _depth_line(rep.s1),
        _depth_line(rep.s2),
        f"S1 == S2: {rep.s1_equals_s2}; max posterior == 2^-K/Q: {rep.identity_holds}; "
        f"prior <= 2^-s <= 1: {rep.bounds_hold}",
    ]
    return report(_echo(args, "prior", "horizon", "output"), m, prior_block(args.prior, p), args.horizon,
                  result, _joint_mass(j), rep.certificate, text)


def cmd_classes(args):
    m, p, j, cert = _joint_from_args(args)
    inv = None
    epsilon = None
    if args.epsilon is not None:
        try:
            epsilon = Fraction(args.epsilon)
        except ValueError:
            raise UsageError(f"bad --epsilon {args.epsilon!r}") from None
    if args.inverter is not None:
        im = load_machine(args.inverter)
        outs = [mo.value for mo in j.modal.values() if mo.defined]
        inv = depth.inverter_joint(im, outs, args.horizon, args.tie_break, args.robust_margin)
        if epsilon is None:
            epsilon = Fraction(1, 2)
    elif epsilon is not None:
        raise UsageError("--epsilon needs --inverter")
    cp = depth.class_probes(j, args.n, args.poly_degree, epsilon, inv)
    energy = [{"input": x, "n": nx, "energy": q(e)} for x, nx, e in cp.energy_rows]
    result = {
        "n": cp.n,
        "B_n": list(cp.ball),
        "preimages": {y: list(xs) for y, xs in cp.preimages.items()},
        "decider": cp.decider,
        "energy": energy,
        "energy_constant": cp.energy_constant,
        "polynomial_energy_consistent": cp.polynomial_energy_consistent,
        "energy_note": "empirical fit over the listed sample only",
        "one_way": None if cp.one_way is None else {
            "success": q(cp.one_way["success"]),
            "epsilon": q(cp.one_way["epsilon"]),
            "consistent_with_one_way": cp.one_way["consistent_with_one_way"],
        },
    }
    text = [f"B_{cp.n} = {{{', '.join(cp.ball)}}}"]
    text += [f"preimage({y!r}) = {{{', '.join(xs)}}}" for y, xs in cp.preimages.items()]
    text.append(f"decider: {cp.decider}")
    text += [f"energy {r['input']!r}: n(x) = {fmt_float(r['n'])}, 2^s = {r['energy']}" for r in energy]
    text.append(f"fitted constant c (2^s <= n^c + c, empirical): {cp.energy_constant}")
    if cp.one_way is not None:
        ow = result["one_way"]
        text.append(f"one-way trial: success {ow['success']} vs epsilon {ow['epsilon']} -> "
                    f"{'consistent with' if ow['consistent_with_one_way'] else 'NOT'} one-way")
    return report(_echo(args, "prior", "horizon", "n", "inverter", "epsilon"), m, prior_block(args.prior, p),
                  args.horizon, result, _joint_mass(j), cert, text)


def cmd_check(args):
    m = load_machine(args.machine)
    p, cert = parse_prior_spec(args.prior, m, args.horizon)
    results = selftest.run_check(m, p, args.horizon, args.threads, args.tie_break, args.robust_margin)
    rows = [{"name": r.name, "status": r.status, "detail": r.detail} for r in results]
    failed = sum(r.failed for r in results)
    text = [f"{r.status} {r.name}" + (f"  ({r.detail})" if r.detail else "") for r in results]
    text.append(f"{len(results) - failed} of {len(results)} passed or skipped, {failed} failed")
    rep = report(_echo(args, "prior", "horizon", "tie-break", "robust-margin"), m, prior_block(args.prior, p),
                 args.horizon, {"invariants": rows, "failed": failed}, None, dict(cert, horizon=args.horizon), text)
    return rep + (3 if failed else 0,)


# -- parser --------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--tie-break", choices=analysis.TIE_BREAKS, default="undefined")
    common.add_argument("--robust-margin", action="store_true")

    parser = _Parser(prog="sptm", description="Exact analysis of stochastic process Turing machines.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("validate", parents=[common], help="parse and validate a machine file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("zoo", parents=[common], help="list built-in machines or print one")
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_zoo)

    sp = sub.add_parser("forward", parents=[common], help="forward law of one input")
    sp.add_argument("machine")
    sp.add_argument("--input", required=True)
    sp.add_argument("--horizon", type=int, required=True)
    sp.set_defaults(func=cmd_forward)

    def joint_cmd(name, func, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.add_argument("machine")
        sp.add_argument("--prior", default="faircoin")
        sp.add_argument("--horizon", type=int, required=True)
        sp.set_defaults(func=func)
        return sp

    joint_cmd("joint", cmd_joint, "joint law of inputs and outputs")
    joint_cmd("inverse", cmd_inverse, "Bayesian inverse for one output").add_argument("--output", required=True)
    sp = joint_cmd("depth", cmd_depth, "stochastic depth variants of one output")
    sp.add_argument("--output", required=True)
    sp.add_argument("--variants", default=",".join(depth.VARIANTS))
    sp = joint_cmd("pathdepth", cmd_pathdepth, "depth of generating one output from one input")
    sp.add_argument("--input", required=True)
    sp.add_argument("--output", required=True)
    sp = joint_cmd("entropy", cmd_entropy, "backward conditional entropies along trajectories")
    sp.add_argument("--abstraction", choices=engine.ABSTRACTIONS, default="retain")
    joint_cmd("detlimit", cmd_detlimit, "deterministic-limit identity for one output").add_argument(
        "--output", required=True)
    sp = joint_cmd("classes", cmd_classes, "B_n, preimages, decider, energy and one-way probes")
    sp.add_argument("--inverter")
    sp.add_argument("--epsilon")
    sp.add_argument("--n", type=int, default=8)
    sp.add_argument("--poly-degree", type=int, default=2)
    joint_cmd("check", cmd_check, "run the invariant suite and zoo self-tests")
    return parser


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        if getattr(args, "horizon", 0) is not None and getattr(args, "horizon", 0) < 0:
            raise UsageError("--horizon must be non-negative")
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        res = args.func(args)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return 1
    except SPTMError as exc:
        err.write(f"error: {exc}\n")
        return 2
    rep, text = res[0], res[1]
    code = res[2] if len(res) > 2 else 0
    emit(rep, text, args.format, out)
    return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
