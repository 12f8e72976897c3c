"""Hypothesis strategy producing small, complete random machines."""

from hypothesis import strategies as st

from sptm import parse_machine


@st.composite
def machine_texts(draw, max_states=3, max_updates=3):
    n = draw(st.integers(1, max_states))
    N = draw(st.integers(2, max_updates))
    states = [f"q{i}" for i in range(n)]
    targets = states + ["halt"]
    lines = [
        "name rand",
        f"updates {N}",
        "work_tapes 1",
        "states " + " ".join(states) + " halt",
        "start q0",
    ]
    for f in range(1, N + 1):
        for s in states:
            # one no-read rule, a consuming pair, or a pair split on the work symbol
            mode = draw(st.sampled_from(["noread", "consume", "work"]))
            keys = {"noread": [("-", "*")], "consume": [("0", "*"), ("1", "*")],
                    "work": [("-", "0"), ("-", "1")]}[mode]
            for inp, wr in keys:
                dst = draw(st.sampled_from(targets))
                ww = draw(st.sampled_from("01-"))
                mv = draw(st.sampled_from("LRS"))
                out = draw(st.sampled_from("01--"))
                lines.append(f"rule {f} {s} {inp} {wr} -> {dst} {ww} {mv} {out}")
    return "\n".join(lines) + "\n"


def machines(**kw):
    return machine_texts(**kw).map(parse_machine)
