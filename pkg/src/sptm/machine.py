"""Prefix probabilistic Turing machines: model, file format and single steps.

A machine has a one-way input tape that is read bit by bit on demand, an
append-only output tape and ``k`` two-way binary work tapes that start out
all zeros.  At every iteration one of ``N`` update functions is chosen; a rule
with selector ``*`` belongs to every update function.

Machine files are line oriented::

    name copy1
    updates 2
    work_tapes 1
    states s halt
    start s
    rule * s 0 * -> halt - S 0
    rule * s 1 * -> halt - S 1
"""

from __future__ import annotations

import enum
import hashlib
import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional

from .errors import (
    ConflictingRulesError,
    IncompleteMachineError,
    MachineSyntaxError,
    MissingStateError,
    UnknownStateError,
)

HALT = "halt"
_MOVES = {"L": -1, "R": 1, "S": 0}
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


class HaltStatus(str, enum.Enum):
    RUNNING = "running"
    HALTED_PROPER = "halted_proper"
    HALTED_ON_PROPER_PREFIX = "halted_on_proper_prefix"
    INPUT_OVERRUN = "input_overrun"

    @property
    def halted(self):
        return self in (HaltStatus.HALTED_PROPER, HaltStatus.HALTED_ON_PROPER_PREFIX)


@dataclass(frozen=True)
class TransitionRule:
    """One line of a transition table.

    ``fn`` is ``None`` for rules shared by all update functions, ``read`` is
    ``None`` for rules that leave the input untouched, and ``None`` entries of
    ``work_reads``/``work_writes``/``out`` mean wildcard/keep/no write.
    """

    fn: Optional[int]
    src: str
    read: Optional[int]
    work_reads: tuple
    dst: str
    work_writes: tuple
    work_moves: tuple
    out: Optional[int]

    def applies_to(self, f):
        return self.fn is None or self.fn == f

    def matches_work(self, symbols):
        return all(p is None or p == s for p, s in zip(self.work_reads, symbols))

    def action(self):
        """What the rule does, independent of which update function owns it."""
        return (self.read is not None, self.dst, self.work_writes, self.work_moves, self.out)


class Tape(NamedTuple):
    """Sparse binary tape: the set of cells holding 1, plus the head position."""

    ones: frozenset
    head: int

    @classmethod
    def blank(cls):
        return cls(frozenset(), 0)

    def read(self):
        return 1 if self.head in self.ones else 0

    def apply(self, write, move):
        ones = self.ones
        if write == 1 and self.head not in ones:
            ones = ones | {self.head}
        elif write == 0 and self.head in ones:
            ones = ones - {self.head}
        return Tape(ones, self.head + _MOVES[move])

    def render(self):
        if not self.ones and self.head == 0:
            return "^"
        lo = min(min(self.ones, default=0), self.head)
        hi = max(max(self.ones, default=0), self.head)
        cells = []
        for i in range(lo, hi + 1):
            sym = "1" if i in self.ones else "0"
            cells.append(f"[{sym}]" if i == self.head else sym)
        return "".join(cells)


@dataclass(frozen=True)
class Configuration:
    """Instantaneous description.  ``step_count`` does not take part in equality."""

    state: str
    input_cursor: int
    work_tapes: tuple
    output: str
    step_count: int = field(default=0, compare=False)


class RunOutcome(NamedTuple):
    status: HaltStatus
    output: str
    steps: int


@dataclass(frozen=True)
class MachineSpec:
    name: str
    num_update_functions: int
    states: tuple
    start: str
    work_tape_count: int
    rules: tuple

    def __post_init__(self):
        _validate(self)

    @cached_property
    def _table(self):
        table = {}
        for f in range(1, self.num_update_functions + 1):
            for rule in self.rules:
                if rule.applies_to(f):
                    table.setdefault((f, rule.src), []).append(rule)
        return {k: tuple(v) for k, v in table.items()}

    @cached_property
    def content_hash(self):
        return hashlib.sha256(serialize_machine(self).encode("utf-8")).hexdigest()

    @property
    def non_halt_states(self):
        return tuple(s for s in self.states if s != HALT)

    def initial_configuration(self):
        tapes = tuple(Tape.blank() for _ in range(self.work_tape_count))
        return Configuration(self.start, 0, tapes, "", 0)

    def resolve(self, f, state, work_symbols, next_bit):
        """Return the rule update function ``f`` fires, ``"overrun"``, or None.

        ``next_bit`` is None when the input is exhausted.
        """
        candidates = [r for r in self._table.get((f, state), ()) if r.matches_work(work_symbols)]
        consuming = [r for r in candidates if r.read is not None]
        if next_bit is None and consuming:
            return "overrun"
        for r in candidates:
            if r.read is None or r.read == next_bit:
                return r
        return None

    @cached_property
    def is_deterministic(self):
        """True when every update function acts identically on every domain point."""
        N = self.num_update_functions
        for state in self.non_halt_states:
            for work in itertools.product((0, 1), repeat=self.work_tape_count):
                for bit in (0, 1, None):
                    acts = []
                    for f in range(1, N + 1):
                        r = self.resolve(f, state, work, bit)
                        acts.append(r.action() if isinstance(r, TransitionRule) else r)
                    if any(a != acts[0] for a in acts[1:]):
                        return False
        return True


def _overlap(a, b):
    if a.src != b.src:
        return False
    if a.read is not None and b.read is not None and a.read != b.read:
        return False
    return all(x is None or y is None or x == y for x, y in zip(a.work_reads, b.work_reads))


def _validate(m):
    if HALT not in m.states:
        raise MissingStateError("no 'halt' state declared")
    if len(set(m.states)) != len(m.states):
        raise MissingStateError("duplicate state names")
    if m.start not in m.states:
        raise UnknownStateError(f"start state {m.start!r} is not declared")
    if m.start == HALT:
        raise MissingStateError("start state must differ from halt")
    if m.num_update_functions < 2:
        raise MissingStateError("at least two update functions are required")
    if m.work_tape_count < 1:
        raise MissingStateError("at least one work tape is required")
    known = set(m.states)
    for r in m.rules:
        for s in (r.src, r.dst):
            if s not in known:
                raise UnknownStateError(f"rule references unknown state {s!r}")
        if r.src == HALT:
            raise MissingStateError("rules may not leave the halt state")
        if r.fn is not None and not 1 <= r.fn <= m.num_update_functions:
            raise UnknownStateError(f"update function {r.fn} out of range 1..{m.num_update_functions}")
        if len(r.work_reads) != m.work_tape_count:
            raise MissingStateError("rule arity does not match work_tapes")
    for f in range(1, m.num_update_functions + 1):
        rules = [r for r in m.rules if r.applies_to(f)]
        for a, b in itertools.combinations(rules, 2):
            if _overlap(a, b):
                raise ConflictingRulesError(
                    f"update function {f}: rules {format_rule(a, m.work_tape_count)!r} and "
                    f"{format_rule(b, m.work_tape_count)!r} apply to the same domain point"
                )


# -- parsing -----------------------------------------------------------------

def _tokens(line):
    return [(mo.group(0), mo.start() + 1) for mo in re.finditer(r"\S+", line)]


def _bit(tok, col, lineno, allow_dash, what):
    text = tok
    if text in ("0", "1"):
        return int(text)
    if allow_dash and text == allow_dash:
        return None
    raise MachineSyntaxError(f"bad {what} {text!r}", lineno, col)


def parse_machine(text):
    """Parse and validate a machine description.

    Raises MachineSyntaxError (with line/column) for malformed text and a
    MachineValidationError subclass for structural problems.
    """
    header = {}
    rule_lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        key, col = toks[0]
        if key == "rule":
            rule_lines.append((lineno, toks))
            continue
        if key not in ("name", "updates", "work_tapes", "states", "start"):
            raise MachineSyntaxError(f"unknown directive {key!r}", lineno, col)
        if key in header:
            raise MachineSyntaxError(f"duplicate directive {key!r}", lineno, col)
        args = toks[1:]
        if key == "states":
            if not args:
                raise MachineSyntaxError("empty state list", lineno, col)
            for tok, c in args:
                if not _IDENT.match(tok):
                    raise MachineSyntaxError(f"bad state name {tok!r}", lineno, c)
            header[key] = tuple(t for t, _ in args)
            continue
        if len(args) != 1:
            raise MachineSyntaxError(f"{key!r} takes exactly one argument", lineno, col)
        tok, c = args[0]
        if key in ("updates", "work_tapes"):
            if not tok.isdigit():
                raise MachineSyntaxError(f"{key!r} needs a positive integer, got {tok!r}", lineno, c)
            header[key] = int(tok)
        else:
            if not _IDENT.match(tok):
                raise MachineSyntaxError(f"bad identifier {tok!r}", lineno, c)
            header[key] = tok

    for required in ("name", "states"):
        if required not in header:
            raise MachineSyntaxError(f"missing {required!r} directive")
    if "start" not in header:
        raise MissingStateError("missing 'start' directive")
    k = header.get("work_tapes", 1)
    N = header.get("updates", 2)
    rules = tuple(_parse_rule(toks, lineno, k, N) for lineno, toks in rule_lines)
    return MachineSpec(
        name=header["name"],
        num_update_functions=N,
        states=header["states"],
        start=header["start"],
        work_tape_count=k,
        rules=rules,
    )


def _parse_rule(toks, lineno, k, N):
    expected = 7 + 3 * k
    if len(toks) != expected:
        col = toks[min(len(toks), expected) - 1][1]
        raise MachineSyntaxError(
            f"rule needs {expected} tokens for {k} work tape(s), got {len(toks)}", lineno, col
        )
    pos = 1
    fn_tok, c = toks[pos]
    if fn_tok == "*":
        fn = None
    elif fn_tok.isdigit() and 1 <= int(fn_tok) <= N:
        fn = int(fn_tok)
    else:
        raise MachineSyntaxError(f"bad update selector {fn_tok!r}", lineno, c)
    src = toks[2][0]
    read = _bit(*toks[3], lineno, "-", "input read")
    pos = 4
    reads = tuple(_bit(*toks[pos + i], lineno, "*", "work read") for i in range(k))
    pos += k
    if toks[pos][0] != "->":
        raise MachineSyntaxError(f"expected '->', got {toks[pos][0]!r}", lineno, toks[pos][1])
    pos += 1
    dst = toks[pos][0]
    pos += 1
    writes = tuple(_bit(*toks[pos + i], lineno, "-", "work write") for i in range(k))
    pos += k
    moves = []
    for i in range(k):
        tok, c = toks[pos + i]
        if tok not in _MOVES:
            raise MachineSyntaxError(f"bad move {tok!r}", lineno, c)
        moves.append(tok)
    pos += k
    out = _bit(*toks[pos], lineno, "-", "output write")
    return TransitionRule(fn, src, read, reads, dst, writes, tuple(moves), out)


def format_rule(r, k=None):
    def sym(v, dash):
        return dash if v is None else str(v)

    parts = ["rule", "*" if r.fn is None else str(r.fn), r.src, sym(r.read, "-")]
    parts += [sym(v, "*") for v in r.work_reads]
    parts += ["->", r.dst]
    parts += [sym(v, "-") for v in r.work_writes]
    parts += list(r.work_moves)
    parts.append(sym(r.out, "-"))
    return " ".join(parts)


def serialize_machine(m):
    lines = [
        f"name {m.name}",
        f"updates {m.num_update_functions}",
        f"work_tapes {m.work_tape_count}",
        "states " + " ".join(m.states),
        f"start {m.start}",
    ]
    lines += [format_rule(r) for r in m.rules]
    return "\n".join(lines) + "\n"


# -- execution ---------------------------------------------------------------

def classify_halt(m, c, input):
    if c.state != HALT:
        return HaltStatus.RUNNING
    if c.input_cursor == len(input):
        return HaltStatus.HALTED_PROPER
    return HaltStatus.HALTED_ON_PROPER_PREFIX


def step(m, c, input, f):
    """Apply update function ``f`` once.  Halted configurations are absorbing."""
    if not 1 <= f <= m.num_update_functions:
        raise ValueError(f"update function index {f} out of range")
    if c.state == HALT:
        return c, classify_halt(m, c, input)
    symbols = tuple(t.read() for t in c.work_tapes)
    next_bit = int(input[c.input_cursor]) if c.input_cursor < len(input) else None
    rule = m.resolve(f, c.state, symbols, next_bit)
    if rule == "overrun":
        return c, HaltStatus.INPUT_OVERRUN
    if rule is None:
        raise IncompleteMachineError(
            f"machine {m.name!r}: no rule for update function {f} in state {c.state!r} "
            f"with work symbols {symbols} and next input bit {next_bit}"
        )
    tapes = tuple(
        t.apply(w, mv) for t, w, mv in zip(c.work_tapes, rule.work_writes, rule.work_moves)
    )
    cursor = c.input_cursor + (rule.read is not None)
    output = c.output if rule.out is None else c.output + str(rule.out)
    nxt = Configuration(rule.dst, cursor, tapes, output, c.step_count + 1)
    return nxt, classify_halt(m, nxt, input)


def run_pure(m, f, input, horizon):
    """Run with update function ``f`` only, for at most ``horizon`` steps."""
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    c = m.initial_configuration()
    status = HaltStatus.RUNNING
    for _ in range(horizon):
        c, status = step(m, c, input, f)
        if status != HaltStatus.RUNNING:
            break
    return RunOutcome(status, c.output, c.step_count)
