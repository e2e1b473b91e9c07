"""The spread relation between finite sets and the spreading property of families.

A set t is a spread of s when some injection sigma maps s onto t with
sigma(i) >= i for every i.  For sets written in increasing enumeration this is
equivalent to positionwise dominance (t_i >= s_i), which is the O(n)
criterion used everywhere; the injection formulation is kept as an
independent oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .core import ExplicitFamily, FinSet, finset, format_set


@dataclass(frozen=True)
class SpreadWitness:
    """An injection from source onto target with sigma(i) >= i pointwise."""

    source: FinSet
    target: FinSet
    mapping: tuple  # pairs (i, sigma(i)) sorted by i

    def as_dict(self):
        return dict(self.mapping)


def is_spread_of(s: FinSet, t: FinSet) -> bool:
    """True iff t is a spread of s (positionwise dominance of the sorted enumerations)."""
    return len(s) == len(t) and all(b >= a for a, b in zip(s, t))


def spread_witness(s: FinSet, t: FinSet) -> Optional[SpreadWitness]:
    """The positional witness sigma(s_i) = t_i, or None when t is not a spread of s."""
    if not is_spread_of(s, t):
        return None
    return SpreadWitness(s, t, tuple(zip(s, t)))


def spread_witness_bruteforce(s: FinSet, t: FinSet) -> Optional[SpreadWitness]:
    """Injection search oracle, independent of the dominance shortcut.

    Finds an injection of s onto t with sigma(i) >= i by augmenting-path
    matching on the compatibility graph.
    """
    if len(s) != len(t):
        return None
    n = len(s)
    match_t = [None] * n  # index into s matched to each t position

    def try_assign(i, seen):
        for j in range(n):
            if t[j] >= s[i] and j not in seen:
                seen.add(j)
                if match_t[j] is None or try_assign(match_t[j], seen):
                    match_t[j] = i
                    return True
        return False

    for i in range(n):
        if not try_assign(i, set()):
            return None
    pairs = sorted((s[match_t[j]], t[j]) for j in range(n))
    return SpreadWitness(s, t, tuple(pairs))


def canonical_spread_witness(s: FinSet, t: FinSet) -> SpreadWitness:
    """The witness that fixes s & t pointwise and matches the increasing
    enumerations of s-minus-t and t-minus-s; rejects non-spread pairs."""
    if not is_spread_of(s, t):
        raise ValueError("%s is not a spread of %s" % (format_set(t), format_set(s)))
    common = set(s) & set(t)
    rest_s = [i for i in s if i not in common]
    rest_t = [i for i in t if i not in common]
    mapping = {i: i for i in common}
    for a, b in zip(rest_s, rest_t):
        mapping[a] = b
    assert all(v >= k for k, v in mapping.items())
    return SpreadWitness(s, t, tuple(sorted(mapping.items())))


def spreads_within(t: FinSet, window: int, base: int = 0) -> Iterator[FinSet]:
    """All spreads of t whose elements stay inside [base, window)."""
    n = len(t)
    if n == 0:
        yield ()
        return

    def rec(pos, lo, acc):
        if pos == n:
            yield tuple(acc)
            return
        for v in range(max(lo, t[pos]), window - (n - pos - 1)):
            acc.append(v)
            yield from rec(pos + 1, v + 1, acc)
            acc.pop()

    yield from rec(0, max(base, t[0]), [])


def _one_step_bumps(t: FinSet, window: int) -> Iterator[FinSet]:
    # bump a single element by +1, keeping the set strictly increasing
    for i in range(len(t)):
        nxt = t[i] + 1
        if nxt >= window:
            continue
        if i + 1 < len(t) and nxt == t[i + 1]:
            continue
        yield t[:i] + (nxt,) + t[i + 1:]


def is_spreading(family: ExplicitFamily, headroom: Optional[int] = None) -> bool:
    """True iff every in-window spread of every member below the headroom
    line is again a member.

    Members at or above the headroom line are exempt as spread sources (their
    spreads may escape the window) but still count as targets.  The default
    headroom is the window itself.
    """
    h = family.window if headroom is None else headroom
    if h > family.window:
        raise ValueError("headroom %d exceeds window %d" % (h, family.window))
    for t in family.members:
        if t and t[-1] >= h:
            continue
        for u in spreads_within(t, family.window, family.base):
            if u not in family:
                return False
    return True


def spreading_violation(family: ExplicitFamily, headroom: Optional[int] = None):
    """A witnessing (member, missing spread) pair, or None."""
    h = family.window if headroom is None else headroom
    if h > family.window:
        raise ValueError("headroom %d exceeds window %d" % (h, family.window))
    for t in family.members:
        if t and t[-1] >= h:
            continue
        for u in spreads_within(t, family.window, family.base):
            if u not in family:
                return (t, u)
    return None


def spreading_closure(family: ExplicitFamily) -> ExplicitFamily:
    """Smallest superfamily closed under in-window spreads; idempotent.

    Saturates single +1 bumps, which generate the dominance order inside the
    window.
    """
    acc = set(family.members)
    frontier = list(acc)
    while frontier:
        nxt = []
        for t in frontier:
            for u in _one_step_bumps(t, family.window):
                if u not in acc:
                    acc.add(u)
                    nxt.append(u)
        frontier = nxt
    return ExplicitFamily(acc, family.window, family.base)
