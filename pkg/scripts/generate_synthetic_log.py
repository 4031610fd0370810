#!/usr/bin/env python3
"""Generate the bundled synthetic diagnosis log (data/synthetic_steps.jsonl).

100 labeled requests mixing on-strategy steps (single and combined),
expansion deviations and zero-derivation deviations in the roughly 85:15
split reported for the original evaluation dataset. Each line carries a
"label" field with the class its construction guarantees; the batch
replayer ignores it, the acceptance suite compares against it.

Construction recipes:
  correct      - (states[i], states[j]) from a model solution, i < j < last
  deviation-1  - input rewritten with the square expanded (bracket lost)
  deviation-3  - input rewritten to "P - c = 0" (unexpected zero derivation)

Run:  python3 scripts/generate_synthetic_log.py [--verify-only]
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from steptrace.expr import Const, EqSet, Equation, Rational, negated, sum_of  # noqa: E402
from steptrace.algebra import nf_full  # noqa: E402
from steptrace.batch import classify_key  # noqa: E402
from steptrace.diagnosis import diagnose_from_task  # noqa: E402
from steptrace.strategy import model_solution, select_strategy  # noqa: E402
from steptrace.syntax import parse_eqset, render  # noqa: E402

OUT = Path(__file__).resolve().parent.parent / "data" / "synthetic_steps.jsonl"
SEED = 20120417
N_CORRECT, N_DEV1, N_DEV3 = 85, 8, 7


def sqrt_tasks(rng: random.Random, count: int) -> list[EqSet]:
    """(±x + p)^2 = q^2 with p != 0 (so expansion genuinely loses a bracket)."""
    tasks = []
    while len(tasks) < count:
        sign = rng.choice(["x", "-x"])
        p = rng.choice([n for n in range(-9, 10) if n != 0])
        q = rng.randint(1, 9)
        tasks.append(parse_eqset(f"({sign}{p:+d})^2 = {q * q}"))
    return tasks


def zero_rewrite(state: EqSet) -> EqSet:
    """Each equation A = c becomes A - c = 0 (written zero derivation)."""
    out = []
    for eq in state.equations:
        out.append(Equation(sum_of([eq.lhs, negated(eq.rhs)]), Const(Rational(0))))
    return EqSet(tuple(out))


def main(verify_only: bool) -> int:
    rng = random.Random(SEED)
    lines: list[dict] = []

    # on-strategy pairs over a mixed corpus
    pool = []
    for task in sqrt_tasks(rng, 40):
        pool.append(task)
    for _ in range(40):
        a = rng.choice([n for n in range(-6, 7) if n != 0])
        b = rng.randint(-6, 6)
        c = rng.randint(-6, 6)
        if b * b - 4 * a * c < 0:
            continue
        sa = "x^2" if a == 1 else ("-x^2" if a == -1 else f"{a}*x^2")
        sb = "" if b == 0 else (f"{b:+d}*x" if abs(b) != 1 else ("+x" if b == 1 else "-x"))
        sc = "" if c == 0 else f"{c:+d}"
        pool.append(parse_eqset(f"{sa}{sb}{sc} = 0"))

    pairs: list[tuple[EqSet, EqSet, EqSet]] = []
    while len(pairs) < N_CORRECT:
        task = rng.choice(pool)
        _, st = select_strategy(task)
        states = model_solution(task, st).states
        if len(states) < 3:
            continue
        last = len(states) - 1
        i = rng.randrange(0, last - 1)
        j = rng.randrange(i + 1, min(i + 4, last - 1) + 1)
        if j >= last:
            continue
        pairs.append((task, states[i], states[j]))
    for task, prev, inp in pairs:
        lines.append(
            {"task": render(task), "prev": render(prev), "input": render(inp), "label": "correct"}
        )

    # expansion deviations: the bracket structure is lost
    for task in sqrt_tasks(rng, N_DEV1):
        lines.append(
            {
                "task": render(task),
                "prev": render(task),
                "input": render(nf_full(task)),
                "label": "deviation-1",
            }
        )

    # zero-derivation deviations: same state, unexpectedly derived to zero
    for task in sqrt_tasks(rng, N_DEV3):
        _, st = select_strategy(task)
        states = model_solution(task, st).states
        j = rng.randrange(0, 2)
        lines.append(
            {
                "task": render(task),
                "prev": render(task),
                "input": render(zero_rewrite(states[j])),
                "label": "deviation-3",
            }
        )

    rng.shuffle(lines)

    # verify every construction label against the diagnosis engine
    mismatches = 0
    for line in lines:
        diagnosis = diagnose_from_task(
            parse_eqset(line["task"]), parse_eqset(line["prev"]), parse_eqset(line["input"])
        )
        got = classify_key(diagnosis)
        if got != line["label"]:
            mismatches += 1
            print(f"label mismatch: {line} -> {got}", file=sys.stderr)
    if mismatches:
        return 1

    if not verify_only:
        OUT.parent.mkdir(parents=True, exist_ok=True)
        with OUT.open("w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(json.dumps(line) + "\n")
        print(f"wrote {len(lines)} lines to {OUT}")
    else:
        print(f"verified {len(lines)} lines (not written)")
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--verify-only", action="store_true")
    sys.exit(main(ap.parse_args().verify_only))
