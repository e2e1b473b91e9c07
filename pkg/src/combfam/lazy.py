"""Finitely described infinite compact families on the naturals.

A lazy family exposes a membership oracle together with two pieces of
structural data that make the point-removal (Cantor-Bendixson style)
machinery computable:

* a *stabilization threshold* per finite set s: beyond it, membership of
  s + {n} depends on n only through its residue class (modulus 1 for
  everything except block families), and

* a *tail classifier* per residue class: whether the rank of s + {n} is
  eventually constant in n, or grows without bound (eventually monotone).

Every constructor certifies its own thresholds; undecidable compositions
must raise rather than guess.
"""

from __future__ import annotations

import itertools
import re
from math import gcd
from typing import Iterator, Optional, Tuple

from .core import ExplicitFamily, FinSet, finset, format_set


# ---------------------------------------------------------------------------
# ordinals below omega*omega


class OrdinalW2:
    """The ordinal w*q + r, ordered lexicographically on (q, r)."""

    __slots__ = ("q", "r")

    def __init__(self, q: int, r: int):
        if q < 0 or r < 0:
            raise ValueError("ordinal parts must be natural numbers")
        self.q = q
        self.r = r

    def key(self):
        return (self.q, self.r)

    def __eq__(self, other):
        return isinstance(other, OrdinalW2) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return self.key() < other.key()

    def __le__(self, other):
        return self.key() <= other.key()

    def __gt__(self, other):
        return self.key() > other.key()

    def __ge__(self, other):
        return self.key() >= other.key()

    def succ(self) -> "OrdinalW2":
        return OrdinalW2(self.q, self.r + 1)

    def plus(self, other: "OrdinalW2") -> "OrdinalW2":
        """Ordinal addition restricted to this fragment."""
        if other.q > 0:
            return OrdinalW2(self.q + other.q, other.r)
        return OrdinalW2(self.q, self.r + other.r)

    def minus_stage(self, stage: "OrdinalW2") -> "OrdinalW2":
        """Left subtraction: the unique d with stage + d = self (requires self >= stage)."""
        if self < stage:
            raise ValueError("cannot subtract %s from %s" % (stage, self))
        if self.q > stage.q:
            return OrdinalW2(self.q - stage.q, self.r)
        return OrdinalW2(0, self.r - stage.r)

    def is_finite(self) -> bool:
        return self.q == 0

    def __repr__(self):
        return "OrdinalW2(%d, %d)" % (self.q, self.r)

    def __str__(self):
        return format_ordinal(self)


ORD_ZERO = OrdinalW2(0, 0)
OMEGA = OrdinalW2(1, 0)
DEFAULT_RANK_BUDGET = OrdinalW2(2, 0)


def format_ordinal(o: OrdinalW2) -> str:
    if o.q == 0:
        return str(o.r)
    head = "w" if o.q == 1 else "w*%d" % o.q
    return head if o.r == 0 else "%s+%d" % (head, o.r)


_ORD_RE = re.compile(r"^(?:(w)(?:\*(\d+))?)?(?:(?<=\w)\+)?(\d+)?$")


def parse_ordinal(text: str) -> OrdinalW2:
    t = text.strip()
    if re.fullmatch(r"\d+", t):
        return OrdinalW2(0, int(t))
    m = re.fullmatch(r"w(?:\*(\d+))?(?:\+(\d+))?", t)
    if not m:
        raise ValueError("bad ordinal literal %r (expected e.g. 3, w, w+1, w*2+5)" % (text,))
    q = int(m.group(1)) if m.group(1) else 1
    r = int(m.group(2)) if m.group(2) else 0
    return OrdinalW2(q, r)


class AtLeast:
    """Budget-exhausted rank answer: the true value is >= bound."""

    __slots__ = ("bound",)

    def __init__(self, bound: OrdinalW2):
        self.bound = bound

    def __eq__(self, other):
        return isinstance(other, AtLeast) and self.bound == other.bound

    def __repr__(self):
        return "AtLeast(%s)" % (self.bound,)

    def __str__(self):
        return ">= %s" % (self.bound,)


# ---------------------------------------------------------------------------
# extension sets


def _reduce_residues(modulus: int, residues: Tuple[int, ...]):
    # smallest period d | modulus such that the residue set is d-periodic
    rset = set(residues)
    for d in range(1, modulus + 1):
        if modulus % d:
            continue
        if all(((rho + d) % modulus in rset) == (rho in rset) for rho in range(modulus)):
            return d, tuple(sorted({rho % d for rho in rset}))
    return modulus, tuple(sorted(rset))


class ExtensionSet:
    """A set of naturals given by finitely many exceptional points plus an
    optional eventually-periodic tail ``{n >= T : n mod m in R}``.

    The constructor accepts finitely many excluded tail points and produces
    the canonical form: minimal modulus, minimal threshold, no exclusions,
    exceptional points all below the threshold.
    """

    __slots__ = ("exceptional", "tail_threshold", "tail_modulus", "tail_residues")

    def __init__(self, exceptional=(), tail_threshold=None, tail_modulus=1,
                 tail_residues=(0,), excluded=()):
        exc = set(finset(exceptional))
        if tail_threshold is not None and not tail_residues:
            tail_threshold = None
        if tail_threshold is None:
            # excluded points trim the tail only; without one they are moot
            self.exceptional = finset(exc)
            self.tail_threshold = None
            self.tail_modulus = 1
            self.tail_residues = ()
            return
        m = tail_modulus
        rset = set(tail_residues)
        t = tail_threshold
        relevant = [x for x in excluded if x >= t and x % m in rset]
        if relevant:
            # push the threshold past the excluded points, demoting the
            # skipped stretch of the tail to exceptional points
            cut = max(relevant) + 1
            for n in range(t, cut):
                if n % m in rset and n not in relevant:
                    exc.add(n)
            t = cut
        exc = {n for n in exc if n < t or n % m not in rset}
        m, residues = _reduce_residues(m, tuple(rset))
        rset = set(residues)
        # pull the threshold down over points already consistent with the tail
        while t > 0:
            prev = t - 1
            in_tail_pattern = prev % m in rset
            if in_tail_pattern and prev in exc:
                exc.discard(prev)
                t = prev
            elif not in_tail_pattern and prev not in exc:
                t = prev
            else:
                break
        self.exceptional = finset(exc)
        self.tail_threshold = t
        self.tail_modulus = m
        self.tail_residues = residues

    @property
    def excluded(self) -> FinSet:
        # canonical form never stores tail exclusions
        return ()

    @property
    def is_infinite(self) -> bool:
        return self.tail_threshold is not None

    def __contains__(self, n: int) -> bool:
        if n in self.exceptional:
            return True
        return (self.tail_threshold is not None and n >= self.tail_threshold
                and n % self.tail_modulus in self.tail_residues)

    def elements_below(self, limit: int) -> FinSet:
        return finset(n for n in range(limit) if n in self)

    def key(self):
        return (self.exceptional, self.tail_threshold, self.tail_modulus,
                self.tail_residues)

    def __eq__(self, other):
        return isinstance(other, ExtensionSet) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.tail_threshold is None:
            return "ExtensionSet(%s)" % (format_set(self.exceptional),)
        if self.tail_modulus == 1:
            tail = "tail>=%d" % self.tail_threshold
        else:
            tail = "tail>=%d mod %d in %s" % (
                self.tail_threshold, self.tail_modulus,
                format_set(self.tail_residues))
        return "ExtensionSet(%s, %s)" % (format_set(self.exceptional), tail)


# ---------------------------------------------------------------------------
# lazy families


class RankTail:
    """Eventual behavior of rank(s + {n}) along one residue class.

    ``unbounded`` means the ranks are finite, eventually monotone
    nondecreasing past ``threshold`` and grow without bound; otherwise the
    rank is one fixed value for every n >= threshold in the class.
    """

    __slots__ = ("unbounded", "threshold")

    def __init__(self, unbounded: bool, threshold: int):
        self.unbounded = unbounded
        self.threshold = threshold

    @classmethod
    def constant(cls, threshold: int) -> "RankTail":
        return cls(False, threshold)

    @classmethod
    def grows(cls, threshold: int) -> "RankTail":
        return cls(True, threshold)


class UnsupportedDescriptorError(ValueError):
    """Raised when an oracle cannot certify its tail classification."""


class LazyFamily:
    """Oracle-backed infinite family; subclasses fill in the hooks.

    Subclass contract:

    * ``membership(s)`` is total over finite sets.
    * ``_ext_stab(s)`` returns (T, m): for n >= T, membership of s + {n}
      depends only on n mod m.  The engine additionally lifts T above
      max(s).
    * ``_rank_tail(s, rho)`` classifies the eventual rank of s + {n} along
      the residue class rho; it is consulted only for classes whose points
      are eventually members.
    * ``max_size(j)`` bounds member sizes given the minimum element j
      (monotone in j); this is the compactness certificate.
    """

    base = 0
    hereditary = True
    prefix_closed = True

    def __init__(self):
        self._memo_ext = {}

    # -- hooks -------------------------------------------------------------
    def membership(self, s: FinSet) -> bool:
        raise NotImplementedError

    def _ext_stab(self, s: FinSet) -> Tuple[int, int]:
        raise NotImplementedError

    def _rank_tail(self, s: FinSet, rho: int) -> RankTail:
        raise NotImplementedError

    def max_size(self, j: int) -> int:
        raise NotImplementedError

    @property
    def descriptor(self) -> str:
        return self._descriptor

    # -- shared machinery ---------------------------------------------------
    def _stab(self, s: FinSet) -> Tuple[int, int]:
        t, m = self._ext_stab(s)
        floor = (s[-1] + 1) if s else 0
        return max(t, floor), m

    def _rep(self, t: int, m: int, rho: int) -> int:
        return t + ((rho - t) % m)

    def extension_set(self, s: FinSet) -> ExtensionSet:
        """Exactly {n not in s : s + {n} is a member}; rejects non-members."""
        s = finset(s)
        if s in self._memo_ext:
            return self._memo_ext[s]
        if not self.membership(s):
            raise ValueError("%s is not a member" % (format_set(s),))
        t, m = self._stab(s)
        exceptional = [n for n in range(t)
                       if n not in s and self.membership(finset(s + (n,)))]
        residues = [rho for rho in range(m)
                    if self.membership(finset(s + (self._rep(t, m, rho),)))]
        if residues:
            out = ExtensionSet(exceptional, t, m, tuple(residues))
        else:
            out = ExtensionSet(exceptional)
        self._memo_ext[s] = out
        return out

    def _tail_residues(self, s: FinSet):
        """Residue classes of the extension set that contain a tail."""
        t, m = self._stab(s)
        return t, m, tuple(rho for rho in range(m)
                           if self.membership(finset(s + (self._rep(t, m, rho),))))

    # -- truncation ----------------------------------------------------------
    def truncate(self, window: int) -> ExplicitFamily:
        """The members contained in [base, window) as an explicit family."""
        members = []
        if self.membership(()):
            members.append(())
        if self.hereditary or self.prefix_closed:
            # members are reached through member prefixes, so prune on them
            def grow(prefix):
                lo = prefix[-1] + 1 if prefix else self.base
                for n in range(lo, window):
                    cand = prefix + (n,)
                    if len(cand) > self.max_size(cand[0]):
                        continue
                    if self.membership(cand):
                        members.append(cand)
                        grow(cand)
            grow(())
        else:
            universe = range(self.base, window)
            if len(universe) > 22:
                raise ValueError("window too large for unpruned truncation")
            for k in range(1, len(universe) + 1):
                for cand in itertools.combinations(universe, k):
                    if self.membership(cand):
                        members.append(cand)
        return ExplicitFamily(members, window, self.base)

    # -- point removal -------------------------------------------------------
    def derivative(self) -> "LazyFamily":
        """The family of members with infinitely many one-point extensions.

        For every certified constructor this is exactly the family of
        non-isolated points.
        """
        return FirstDerivative(self)

    # -- ranks ---------------------------------------------------------------
    def cb_rank(self, s: FinSet, budget: OrdinalW2 = DEFAULT_RANK_BUDGET):
        """The last point-removal stage containing s (see module docstring)."""
        s = finset(s)
        if not self.membership(s):
            raise ValueError("%s is not a member" % (format_set(s),))
        return _rank_value(self, s, budget)

    def family_rank(self, budget: OrdinalW2 = DEFAULT_RANK_BUDGET):
        """Rank of the whole family: one past the rank of the empty set."""
        if not self.membership(()):
            raise ValueError("family does not contain the empty set")
        r = _rank_value(self, (), budget)
        if isinstance(r, AtLeast):
            return r
        return r.succ()


def _rank_value(fam: LazyFamily, s: FinSet, budget: OrdinalW2):
    """Exact rank of a member.

    Only tail behavior can contribute to the rank (finitely many exceptional
    extensions never make a limit), so the recursion follows one
    representative per residue class, past both the membership and the rank
    stabilization thresholds.
    """
    t, m, tails = fam._tail_residues(s)
    if not tails:
        return ORD_ZERO
    best = ORD_ZERO
    unbounded = False
    for rho in tails:
        rt = fam._rank_tail(s, rho)
        if rt.unbounded:
            unbounded = True
            continue
        rep = fam._rep(max(t, rt.threshold), m, rho)
        sub = _rank_value(fam, finset(s + (rep,)), budget)
        if isinstance(sub, AtLeast):
            return sub
        best = max(best, sub.succ())
    if unbounded:
        if budget < OMEGA:
            return AtLeast(budget)
        extra = _rank_above_limit(fam, s, 1, budget)
        if isinstance(extra, AtLeast):
            return extra
        best = max(best, OMEGA.plus(extra))
    if best > budget:
        return AtLeast(budget)
    return best


def _rank_above_limit(fam: LazyFamily, s: FinSet, q: int, budget: OrdinalW2):
    """Rank of s inside the q-th limit stage.

    A residue class survives the limit stage only when its eventual rank is a
    constant >= w*q; unbounded-but-finite growth dies at the limit.
    """
    stage = OrdinalW2(q, 0)
    t, m, tails = fam._tail_residues(s)
    survivors = []
    for rho in tails:
        rt = fam._rank_tail(s, rho)
        if rt.unbounded:
            continue
        rep = fam._rep(max(t, rt.threshold), m, rho)
        v = _rank_value(fam, finset(s + (rep,)), budget)
        if isinstance(v, AtLeast):
            return v
        if v >= stage:
            survivors.append(v.minus_stage(stage))
    if not survivors:
        return ORD_ZERO
    return max(v.succ() for v in survivors)


class FirstDerivative(LazyFamily):
    """Wrapper family of all non-isolated points of the underlying family."""

    def __init__(self, under: LazyFamily):
        super().__init__()
        self.under = under
        self.base = under.base
        self.hereditary = under.hereditary
        self.prefix_closed = under.prefix_closed
        self._memo_mem = {}
        if isinstance(under, FirstDerivative):
            self._depth = under._depth + 1
            core = under._core
        else:
            self._depth = 1
            core = under
        self._core = core
        self._descriptor = "derive %d (%s)" % (self._depth, core.descriptor)

    def membership(self, s: FinSet) -> bool:
        s = finset(s)
        if s in self._memo_mem:
            return self._memo_mem[s]
        ok = self.under.membership(s) and self.under.extension_set(s).is_infinite
        self._memo_mem[s] = ok
        return ok

    def max_size(self, j: int) -> int:
        return self.under.max_size(j)

    def _stage_start(self, s: FinSet, rho: int, t: int, m: int) -> Optional[int]:
        """First point of the residue class from which membership here is
        eventually constant; None when the class holds no members at all."""
        rt = self.under._rank_tail(s, rho)
        start = self.under._rep(max(t, rt.threshold), m, rho)
        if not rt.unbounded:
            return start
        # ranks grow monotonically past the threshold: walk to the first
        # extension that is itself a limit point
        n = start
        for _ in range(10000):
            cand = finset(s + (n,))
            if self.under.membership(cand) and self.under.extension_set(cand).is_infinite:
                return n
            n += m
        raise UnsupportedDescriptorError(
            "tail classification did not stabilize for %s" % (self.descriptor,))

    def _ext_stab(self, s: FinSet) -> Tuple[int, int]:
        t, m = self.under._stab(s)
        worst = t
        for rho in range(m):
            if not self.under.membership(finset(s + (self.under._rep(t, m, rho),))):
                continue
            start = self._stage_start(s, rho, t, m)
            if start is not None:
                worst = max(worst, start)
        return worst, m

    def _rank_tail(self, s: FinSet, rho: int) -> RankTail:
        rt = self.under._rank_tail(s, rho)
        if not rt.unbounded:
            return rt
        t, m = self.under._stab(s)
        start = self._stage_start(s, rho, t, m)
        return RankTail.grows(max(rt.threshold, start))


def derivative_chain(fam: LazyFamily, stages: int) -> LazyFamily:
    """Iterated derivative; stage 0 is the family itself."""
    out = fam
    for _ in range(stages):
        out = out.derivative()
    return out
