"""Expression corpora and CLI helpers shared by the CLI tests and the acceptance suite."""

import contextlib
import io
import json
from pathlib import Path

import jsonschema
import numpy as np

from gasub import GasubError, Signature
from gasub.cli import main
from gasub.expr import evaluate_text

GOLDEN = Path(__file__).parent / "golden" / "cli_cases.json"

MULTIVECTOR_SCHEMA = {
    "type": "object",
    "required": ["signature", "terms"],
    "additionalProperties": False,
    "properties": {
        "signature": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 3, "maxItems": 3},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["basis", "coeff"],
                "additionalProperties": False,
                "properties": {
                    "basis": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                    "coeff": {"type": "number"},
                },
            },
        },
    },
}

# (text, byte offset the error should point at)
INVALID = [
    ("", 0),
    ("   ", 3),
    ("e1 +", 4),
    ("+ e1", 0),
    ("e1 * * e2", 5),
    ("(e1 ^ e2", 8),
    ("e1 ^ e2)", 7),
    ("meet(e1)", 0),
    ("meet(e1, e2, e3)", 0),
    ("lmeet(e1)", 0),
    ("pseudo(e1)", 0),
    ("grade(e1, 1.5)", 10),
    ("grade(e1, e2)", 10),
    ("frobnicate(e1)", 0),
    ("e0", 0),
    ("e1 $ e2", 3),
    ("meet e1", 5),
    ("rev(,e1)", 4),
    ("join(e1,)", 8),
    ("1e999", 0),
    ("x", 0),
    # a no-break space is whitespace but two bytes long
    ("\u00a0e1 +", 6),
    ("é + e1", 0),
    ("e1 + é", 5),
    ("()", 1),
    ("meet(e1, e2) e3", 13),
]


def run_cli(argv):
    """``(exit code, stdout, stderr)`` of the CLI run in-process."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(argv)
        except SystemExit as exc:
            code = exc.code
    return code, out.getvalue(), err.getvalue()


def check_json(text):
    """Parse CLI JSON output and validate it against the multivector schema."""
    obj = json.loads(text)
    jsonschema.validate(obj, MULTIVECTOR_SCHEMA)
    for t in obj["terms"]:
        if t["basis"] != sorted(set(t["basis"])):
            raise ValueError(f"basis {t['basis']} is not strictly ascending")
    return obj


def golden_cases():
    return json.loads(GOLDEN.read_text())


def _vector(rng, n):
    parts = []
    for i in rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False):
        c = float(np.round(rng.uniform(-3, 3), int(rng.integers(0, 4))))
        parts.append(f"{c!r}*e{i + 1}" if c != 1 else f"e{i + 1}")
    return "(" + " + ".join(parts) + ")"


def _blade_text(rng, n):
    k = int(rng.integers(1, n + 1))
    return "^".join(_vector(rng, n) for _ in range(k))


def _term(rng, n, depth):
    roll = rng.random()
    if depth == 0 or roll < 0.3:
        if rng.random() < 0.3:
            return repr(float(np.round(rng.uniform(-5, 5), 3)))
        return f"e{int(rng.integers(1, n + 1))}"
    if roll < 0.55:
        op = ["*", "^", "|", "+", "-"][int(rng.integers(5))]
        return f"({_term(rng, n, depth - 1)} {op} {_term(rng, n, depth - 1)})"
    if roll < 0.65:
        return f"-{_term(rng, n, depth - 1)}"
    if roll < 0.75:
        return f"{['rev', 'isblade'][int(rng.integers(2))]}({_term(rng, n, depth - 1)})"
    if roll < 0.8:
        return f"grade({_term(rng, n, depth - 1)}, {int(rng.integers(0, n + 1))})"
    fn = ["meet", "join", "delta", "lmeet", "ljoin", "inv"][int(rng.integers(6))]
    if fn == "inv":
        return f"inv({_blade_text(rng, n)})"
    return f"{fn}({_blade_text(rng, n)}, {_blade_text(rng, n)})"


def round_trip_corpus(count=200, seed=4242):
    """``count`` valid ``(signature, text)`` pairs drawn from a fixed seed."""
    rng = np.random.default_rng(seed)
    sigs = [Signature(3), Signature(2, 1), Signature(1, 1, 1), Signature(4), Signature(2, 0, 2)]
    out = []
    while len(out) < count:
        sig = sigs[len(out) % len(sigs)]
        text = _term(rng, sig.n, 3)
        try:
            evaluate_text(text, sig)
        except GasubError:
            continue
        out.append((sig, text))
    return out
