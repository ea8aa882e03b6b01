"""Independent oracles used by the unit and acceptance tests.

Everything here recomputes expected values by a different method than the
library under test: regex scans instead of the script engine, quadratic
definition-chasing instead of the selection algorithm, and plain length
arithmetic instead of the rewriter.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

TACTIC_WORDS = ("let", "assume", "exact", "apply", "rewrite", "claim", "aby")

_THEOREM_RE = re.compile(r"^Theorem\b.*?^Qed\.", re.S | re.M)
_TACTIC_RE = re.compile(r"\b(%s)\b" % "|".join(TACTIC_WORDS))


def count_candidate_sites(text: str) -> int:
    """Count tactic keywords inside theorem bodies with a plain regex scan.

    This deliberately knows nothing about the script grammar beyond the
    keyword list: every occurrence of a tactic word between a Theorem
    header and its Qed is one candidate site. Bullets and Qed are not
    keywords so they never count.
    """
    total = 0
    for block in _THEOREM_RE.findall(text):
        body = block.split(".", 1)[1]
        total += len(_TACTIC_RE.findall(body))
    return total


def count_candidate_sites_per_theorem(text: str) -> dict[str, int]:
    out: dict[str, int] = {}
    for block in _THEOREM_RE.findall(text):
        header, body = block.split(".", 1)
        name = header.split(":", 1)[0].split()[1]
        out[name] = len(_TACTIC_RE.findall(body))
    return out


@dataclass(frozen=True)
class FakeSpan:
    start: int
    end: int

    def contains(self, other: "FakeSpan") -> bool:
        return self.start <= other.start and other.end <= self.end


@dataclass
class FakeCandidate:
    """Just enough of a candidate for selection tests."""

    problem_id: str
    span: FakeSpan
    theorem: str = "t"
    seq: int = 0
    kind: str = "exact"
    goal_id: int = 0
    bundle: object = None
    aby_globals: tuple = ()
    aby_hyps: tuple = ()


def brute_select(
    candidates: Sequence,
    solved: set[str],
    pin: Sequence[str] = (),
    exclude: Sequence[str] = (),
) -> list:
    """Definition-chasing selection oracle, quadratic on purpose.

    A candidate is eligible when it is solved or pinned and not excluded.
    It is selected when no other eligible candidate's span strictly
    contains its span. Equal spans keep only the earliest in input order.
    """
    pin_s, excl_s = set(pin), set(exclude)
    eligible = [
        c
        for c in candidates
        if (c.problem_id in solved or c.problem_id in pin_s)
        and c.problem_id not in excl_s
    ]
    picked = []
    seen_spans = set()
    for c in eligible:
        strictly_above = [
            o
            for o in eligible
            if o is not c
            and o.span.contains(c.span)
            and (o.span.start, o.span.end) != (c.span.start, c.span.end)
        ]
        if strictly_above:
            continue
        key = (c.span.start, c.span.end)
        if key in seen_spans:
            continue
        seen_spans.add(key)
        picked.append(c)
    return picked


def random_laminar_forest(rng: random.Random, max_nodes: int = 10) -> list[FakeCandidate]:
    """Random family of intervals where any two either nest or are disjoint."""
    n = rng.randint(1, max_nodes)
    spans: list[FakeSpan] = []
    budget = [n]

    def grow(lo: int, hi: int) -> None:
        """Emit one span inside [lo, hi), then recurse into disjoint parts."""
        if budget[0] <= 0 or hi - lo < 2:
            return
        a = rng.randint(lo, hi - 2)
        b = rng.randint(a + 1, hi)
        spans.append(FakeSpan(a, b))
        budget[0] -= 1
        if rng.random() < 0.7:
            grow(a, b)
        if rng.random() < 0.7:
            grow(b, hi)
        if rng.random() < 0.3:
            grow(lo, a)

    while budget[0] > 0:
        # restart strictly inside the smallest span seen so far, or at the top
        if spans:
            innermost = min(spans, key=lambda s: s.end - s.start)
            if innermost.end - innermost.start < 2:
                break
            grow(innermost.start, innermost.end)
            if budget[0] == n:
                break
        else:
            grow(0, 1000)
    return [
        FakeCandidate(problem_id=f"c{i}", span=sp, seq=i)
        for i, sp in enumerate(spans)
    ]


def expected_rewrite_length(text: str, replacements: Sequence[tuple[int, int, str]]) -> int:
    """Length arithmetic for span replacement, no string surgery involved."""
    n = len(text.encode("utf-8"))
    for start, end, repl in replacements:
        n += len(repl.encode("utf-8")) - (end - start)
    return n
