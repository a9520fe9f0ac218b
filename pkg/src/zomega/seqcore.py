"""Words, eventually periodic points, and the block-segmentation predicate.

A word is a finite tuple of ints.  A :class:`RegularPoint` is an eventually
periodic element of Z^omega in canonical (minimal head, minimal period) form,
so structural equality coincides with pointwise equality.  A
:class:`LazyPoint` wraps a deterministic coordinate oracle for points that
are computable but not eventually periodic.

Textual notation for regular points is ``head;period`` with comma-separated
integers, e.g. ``5;0`` and ``;1,2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

Word = tuple[int, ...]


def is_segmented(w: Word, m: int) -> bool:
    """True iff ``len(w)`` is a multiple of ``2**m`` and every consecutive
    block of length ``2**m`` is constant."""
    if m < 0:
        raise ValueError("segmentation level must be nonnegative")
    block = 1 << m
    if len(w) % block:
        return False
    for start in range(0, len(w), block):
        chunk = w[start : start + block]
        if any(v != chunk[0] for v in chunk):
            return False
    return True


def _minimal_period(period: Word) -> Word:
    n = len(period)
    for d in range(1, n + 1):
        if n % d == 0 and period == period[: d] * (n // d):
            return period[:d]
    return period


def _canonical(head: Word, period: Word) -> tuple[Word, Word]:
    period = _minimal_period(period)
    head = tuple(head)
    # absorb head entries that already match the cycle
    while head and head[-1] == period[-1]:
        head = head[:-1]
        period = (period[-1],) + period[:-1]
    return head, _minimal_period(period)


@dataclass(frozen=True)
class RegularPoint:
    """Eventually periodic point of Z^omega, canonicalized on construction."""

    head: Word
    period: Word

    def __post_init__(self) -> None:
        if not self.period:
            raise ValueError("period must be nonempty")
        h, p = _canonical(tuple(self.head), tuple(self.period))
        object.__setattr__(self, "head", h)
        object.__setattr__(self, "period", p)

    def __getitem__(self, n: int) -> int:
        if n < 0:
            raise IndexError("coordinate index must be nonnegative")
        if n < len(self.head):
            return self.head[n]
        return self.period[(n - len(self.head)) % len(self.period)]

    def prefix(self, n: int) -> Word:
        return tuple(self[i] for i in range(n))

    def __str__(self) -> str:
        return format_point(self)


ZERO = RegularPoint((), (0,))


class LazyPoint:
    """Deterministic coordinate oracle ``n -> int``.

    Values are memoized, so repeated queries agree by construction.  An
    optional eventual-periodicity witness ``(onset, period_word)`` may be
    attached; it is metadata plus a checkable claim, never a shortcut the
    oracle silently trusts (see :func:`validate_witness`).
    """

    def __init__(
        self,
        fn: Callable[[int], int],
        witness: Optional[tuple[int, Word]] = None,
    ) -> None:
        if witness is not None and not witness[1]:
            raise ValueError("periodicity witness needs a nonempty period")
        self._fn = fn
        self.witness = witness
        self._memo: dict[int, int] = {}

    def __getitem__(self, n: int) -> int:
        if n < 0:
            raise IndexError("coordinate index must be nonnegative")
        v = self._memo.get(n)
        if v is None:
            v = self._fn(n)
            self._memo[n] = v
        return v

    def prefix(self, n: int) -> Word:
        return tuple(self[i] for i in range(n))


Point = Union[RegularPoint, LazyPoint]


def point_eval(p: Point, n: int) -> int:
    return p[n]


def validate_witness(p: LazyPoint, extra_periods: int = 2) -> bool:
    """Recompute the oracle across ``extra_periods`` further periods and
    check it against the attached witness."""
    if p.witness is None:
        raise ValueError("point carries no periodicity witness")
    onset, period = p.witness
    span = len(period) * (1 + extra_periods)
    return all(p[onset + i] == period[i % len(period)] for i in range(span))


def point_add(p: RegularPoint, q: RegularPoint) -> RegularPoint:
    h = max(len(p.head), len(q.head))
    lcm = math.lcm(len(p.period), len(q.period))
    head = tuple(p[i] + q[i] for i in range(h))
    period = tuple(p[h + i] + q[h + i] for i in range(lcm))
    return RegularPoint(head, period)


def point_neg(p: RegularPoint) -> RegularPoint:
    return RegularPoint(tuple(-v for v in p.head), tuple(-v for v in p.period))


def point_sub(p: RegularPoint, q: RegularPoint) -> RegularPoint:
    return point_add(p, point_neg(q))


def points_equal_upto(p: Point, q: Point, n: int) -> bool:
    return all(p[i] == q[i] for i in range(n))


def format_word(w: Word) -> str:
    return ",".join(str(v) for v in w)


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(part) for part in text.split(","))


def format_point(p: RegularPoint) -> str:
    return f"{format_word(p.head)};{format_word(p.period)}"


def parse_point(text: str) -> RegularPoint:
    if ";" not in text:
        raise ValueError(f"bad point notation {text!r}, expected 'head;period'")
    head, period = text.split(";", 1)
    return RegularPoint(parse_word(head), parse_word(period))
