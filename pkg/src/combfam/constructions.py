"""Constructors for the concrete families the library computes with.

Every constructor yields a :class:`~combfam.lazy.LazyFamily` whose
stabilization thresholds and rank-tail classifications are certified in
closed form.  Families built here serialize to a canonical prefix descriptor
(``schreier``, ``cube 2``, ``remove {2 3} (cube 2)``, ...) that round-trips
bit-exactly through :func:`parse_descriptor`.
"""

from __future__ import annotations

import itertools
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from .core import (ExplicitFamily, FinSet, Permutation, finset, format_set,
                   format_permutation, parse_permutation, parse_set)
from .lazy import LazyFamily, RankTail, UnsupportedDescriptorError


class SchreierFamily(LazyFamily):
    """Sets whose size is at most one more than their least element."""

    base = 0
    hereditary = True
    prefix_closed = True

    def __init__(self):
        super().__init__()
        self._descriptor = "schreier"

    def membership(self, s):
        return not s or len(s) <= s[0] + 1

    def max_size(self, j):
        return j + 1

    def _ext_stab(self, s):
        return (s[-1] + 1 if s else 0), 1

    def _rank_tail(self, s, rho):
        if not s:
            return RankTail.grows(0)
        return RankTail.constant(s[-1] + 1)


class CubeFamily(LazyFamily):
    """All finite sets of size at most n (ground starting at ``base``)."""

    hereditary = True
    prefix_closed = True

    def __init__(self, n: int, base: int = 0):
        super().__init__()
        if n < 0:
            raise ValueError("size bound must be a natural number")
        self.n = n
        self.base = base
        self._descriptor = "cube %d" % n if base == 0 else "cube %d base %d" % (n, base)

    def membership(self, s):
        return len(s) <= self.n and (not s or s[0] >= self.base)

    def max_size(self, j):
        return self.n

    def _ext_stab(self, s):
        return (s[-1] + 1 if s else self.base), 1

    def _rank_tail(self, s, rho):
        return RankTail.constant((s[-1] + 1) if s else self.base)


class BlockSchreierFamily(LazyFamily):
    """Disjoint copies of the Schreier condition, one per block.

    The ground set is m infinite blocks; the pair (block q, offset r) is
    encoded as the natural q + m*r.  A member lives inside a single block and
    satisfies the Schreier size condition on its offsets.
    """

    base = 0
    hereditary = True
    prefix_closed = True

    def __init__(self, m: int):
        super().__init__()
        if m < 1:
            raise ValueError("need at least one block")
        self.m = m
        self._descriptor = "block-schreier %d" % m

    def encode(self, block: int, offset: int) -> int:
        if not (0 <= block < self.m):
            raise ValueError("block out of range")
        return block + self.m * offset

    def decode(self, n: int) -> Tuple[int, int]:
        return n % self.m, n // self.m

    def membership(self, s):
        if not s:
            return True
        blocks = {n % self.m for n in s}
        if len(blocks) > 1:
            return False
        offsets = [n // self.m for n in s]
        return len(offsets) <= min(offsets) + 1

    def max_size(self, j):
        return j // self.m + 1

    def _ext_stab(self, s):
        if not s:
            return 0, self.m
        top = max(n // self.m for n in s)
        return self.m * (top + 1), self.m

    def _rank_tail(self, s, rho):
        if not s:
            return RankTail.grows(0)
        top = max(n // self.m for n in s)
        return RankTail.constant(self.m * (top + 1))


class RemoveSetsFamily(LazyFamily):
    """An underlying family minus finitely many named members.

    Removal must not orphan a subset of a surviving member, so each removed
    set is required to have no surviving one-point extension.
    """

    def __init__(self, under: LazyFamily, removed: Iterable[FinSet]):
        super().__init__()
        rem = sorted({finset(r) for r in removed}, key=lambda s: (len(s), s))
        rem = [r for r in rem if under.membership(r)]
        self.under = under
        self.removed = frozenset(rem)
        self.base = under.base
        self.prefix_closed = under.prefix_closed
        self.hereditary = under.hereditary
        self._bound = max([0] + [r[-1] + 1 for r in rem if r])
        if under.hereditary:
            for r in rem:
                ext = under.extension_set(r)
                if ext.is_infinite:
                    raise ValueError(
                        "removing %s breaks heredity: it has surviving supersets"
                        % (format_set(r),))
                for n in ext.exceptional:
                    if finset(r + (n,)) not in self.removed:
                        raise ValueError(
                            "removing %s breaks heredity: %s survives"
                            % (format_set(r), format_set(finset(r + (n,)))))
        self._descriptor = "remove %s (%s)" % (
            " ".join(format_set(r) for r in rem), under.descriptor)

    def membership(self, s):
        return s not in self.removed and self.under.membership(s)

    def max_size(self, j):
        return self.under.max_size(j)

    def _ext_stab(self, s):
        t, m = self.under._stab(s)
        return max(t, self._bound), m

    def _rank_tail(self, s, rho):
        rt = self.under._rank_tail(s, rho)
        cls = RankTail.grows if rt.unbounded else RankTail.constant
        return cls(max(rt.threshold, self._bound))


class RestrictGroundFamily(LazyFamily):
    """Members avoiding a fixed finite set of excluded indices."""

    def __init__(self, under: LazyFamily, excluded: FinSet):
        super().__init__()
        self.under = under
        self.excluded = finset(excluded)
        self.base = under.base
        self.hereditary = under.hereditary
        self.prefix_closed = under.prefix_closed
        self._bound = (self.excluded[-1] + 1) if self.excluded else 0
        self._descriptor = "restrict !%s (%s)" % (
            "{" + " ".join(str(i) for i in self.excluded) + "}", under.descriptor)

    def membership(self, s):
        return not (set(s) & set(self.excluded)) and self.under.membership(s)

    def max_size(self, j):
        return self.under.max_size(j)

    def _ext_stab(self, s):
        t, m = self.under._stab(s)
        return max(t, self._bound), m

    def _rank_tail(self, s, rho):
        rt = self.under._rank_tail(s, rho)
        cls = RankTail.grows if rt.unbounded else RankTail.constant
        return cls(max(rt.threshold, self._bound))


class PermutedFamily(LazyFamily):
    """Pointwise image of a family under a finitely supported permutation."""

    def __init__(self, under: LazyFamily, pi: Permutation):
        super().__init__()
        self.under = under
        self.pi = pi
        self.inv = pi.inverse()
        self.base = under.base if all(pi(j) == j for j in range(under.base)) else 0
        self.hereditary = under.hereditary
        # images of prefixes are not prefixes, so keep the honest answer
        self.prefix_closed = under.prefix_closed and pi.is_identity()
        self._descriptor = "permute %s (%s)" % (format_permutation(pi),
                                                under.descriptor)

    def membership(self, s):
        return self.under.membership(self.inv.image(s))

    def max_size(self, j):
        return self.under.max_size(max(j, self.pi.window))

    def _ext_stab(self, s):
        t, m = self.under._stab(self.inv.image(s))
        return max(t, self.pi.window), m

    def _rank_tail(self, s, rho):
        rt = self.under._rank_tail(self.inv.image(s), rho)
        cls = RankTail.grows if rt.unbounded else RankTail.constant
        return cls(max(rt.threshold, self.pi.window))

    def truncate(self, window: int) -> ExplicitFamily:
        if window >= self.pi.window:
            inner = self.under.truncate(window)
            members = [self.pi.image(s) for s in inner.members]
            return ExplicitFamily(members, window, self.base)
        return super().truncate(window)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class UnionFamily(LazyFamily):
    """Union of two lazy families."""

    def __init__(self, left: LazyFamily, right: LazyFamily):
        super().__init__()
        self.left = left
        self.right = right
        self.base = min(left.base, right.base)
        self.hereditary = left.hereditary and right.hereditary
        self.prefix_closed = left.prefix_closed and right.prefix_closed
        self._descriptor = "union (%s) (%s)" % (left.descriptor, right.descriptor)

    def membership(self, s):
        return self.left.membership(s) or self.right.membership(s)

    def max_size(self, j):
        return max(self.left.max_size(j), self.right.max_size(j))

    def _ext_stab(self, s):
        t1, m1 = self.left._stab(s)
        t2, m2 = self.right._stab(s)
        return max(t1, t2), _lcm(m1, m2)

    def _rank_tail(self, s, rho):
        # ranks in a union of compact families are the max of the side ranks,
        # so the class grows iff some eventually-present side grows
        t, m = self._stab(s)
        out_t = t
        unbounded = False
        for fam in (self.left, self.right):
            rep = self._rep(max(t, fam._stab(s)[0]), m, rho)
            if not fam.membership(finset(s + (rep,))):
                continue
            rt = fam._rank_tail(s, rho % fam._stab(s)[1])
            out_t = max(out_t, rt.threshold)
            unbounded = unbounded or rt.unbounded
        return RankTail(unbounded, out_t)


class FiniteLazyFamily(LazyFamily):
    """An explicit family wrapped behind the lazy interface."""

    def __init__(self, family: ExplicitFamily):
        super().__init__()
        from .core import is_hereditary
        self.family = family
        self.base = family.base
        self.hereditary = is_hereditary(family)
        self.prefix_closed = all(m[:k] in family._set
                                 for m in family.members for k in range(len(m)))
        self._descriptor = "finite %d %d [%s]" % (
            family.base, family.window,
            " ".join(format_set(m) for m in family.members))

    def membership(self, s):
        return s in self.family

    def max_size(self, j):
        return max([0] + [len(m) for m in self.family.members])

    def _ext_stab(self, s):
        return self.family.window, 1

    def _rank_tail(self, s, rho):
        return RankTail.constant(self.family.window)


class InitialPairAvoidingFamily(LazyFamily):
    """Schreier members whose first two elements are never consecutive.

    Not hereditary and not spreading, but closed under initial segments,
    which is what the truncation and norm paths rely on.
    """

    base = 0
    hereditary = False
    prefix_closed = True

    def __init__(self):
        super().__init__()
        self._descriptor = "ex-initial-pairs"

    def membership(self, s):
        if s and len(s) > s[0] + 1:
            return False
        return not (len(s) >= 2 and s[1] == s[0] + 1)

    def max_size(self, j):
        return j + 1

    def _ext_stab(self, s):
        return (s[-1] + 2 if s else 0), 1

    def _rank_tail(self, s, rho):
        if not s:
            return RankTail.grows(0)
        return RankTail.constant(s[-1] + 2)


class AdjacentPairsRemovedFamily(LazyFamily):
    """Singletons and non-consecutive pairs over the positive naturals."""

    base = 1
    hereditary = True
    prefix_closed = True

    def __init__(self):
        super().__init__()
        self._descriptor = "ex-adjacent-removed"

    def membership(self, s):
        if len(s) > 2 or (s and s[0] < 1):
            return False
        return not (len(s) == 2 and s[1] == s[0] + 1)

    def max_size(self, j):
        return 2

    def _ext_stab(self, s):
        return (s[-1] + 2 if s else 1), 1

    def _rank_tail(self, s, rho):
        return RankTail.constant((s[-1] + 2) if s else 1)


# ---------------------------------------------------------------------------
# public constructors


def schreier() -> LazyFamily:
    return SchreierFamily()


def cube(n: int, base: int = 0) -> LazyFamily:
    return CubeFamily(n, base)


def block_schreier(m: int) -> LazyFamily:
    return BlockSchreierFamily(m)


def remove_sets(under: LazyFamily, removed: Iterable[FinSet]) -> LazyFamily:
    return RemoveSetsFamily(under, removed)


def restrict_ground(under: LazyFamily, excluded: FinSet) -> LazyFamily:
    return RestrictGroundFamily(under, excluded)


def permuted(under: LazyFamily, pi: Permutation) -> LazyFamily:
    return PermutedFamily(under, pi)


def union(left: LazyFamily, right: LazyFamily) -> LazyFamily:
    return UnionFamily(left, right)


def from_explicit(family: ExplicitFamily) -> LazyFamily:
    return FiniteLazyFamily(family)


def remove_pattern_initial_pairs() -> LazyFamily:
    return InitialPairAvoidingFamily()


def adjacent_pairs_removed() -> LazyFamily:
    return AdjacentPairsRemovedFamily()


def _with_name(fam: LazyFamily, name: str) -> LazyFamily:
    fam._descriptor = name
    return fam


def permuted_pair() -> Tuple[LazyFamily, LazyFamily]:
    """Two size-two families differing by one removed pair, carried onto each
    other by the 3-cycle 1>3>2>1 (ground starting at 1)."""
    f = _with_name(RemoveSetsFamily(CubeFamily(2, base=1), [(2, 3)]),
                   "ex-4-perm-pair-f")
    g = _with_name(RemoveSetsFamily(CubeFamily(2, base=1), [(1, 2)]),
                   "ex-4-perm-pair-g")
    return f, g


def homeo_not_pi_pair() -> Tuple[LazyFamily, LazyFamily]:
    """All singletons together with the pairs avoiding 1, versus all sets of
    size at most two (ground starting at 1).

    The two families are homeomorphic via the glide that sends 1 to the pair
    {1,2} and shifts everything else down, but no permutation of the ground
    set carries one onto the other.
    """
    f = _with_name(UnionFamily(CubeFamily(1, base=1),
                               RestrictGroundFamily(CubeFamily(2, base=1), (1,))),
                   "ex-homeo-not-pi-f")
    g = _with_name(CubeFamily(2, base=1), "ex-homeo-not-pi-g")
    return f, g


# ---------------------------------------------------------------------------
# finite trees and chain lifts


class FiniteTree:
    """A finite forest given by a parent table; node i's parent is
    ``parents[i]`` (None for roots)."""

    def __init__(self, parents: Sequence[Optional[int]]):
        n = len(parents)
        self.parents = tuple(parents)
        self.nodes = tuple(range(n))
        heights = [None] * n

        def ht(i, seen):
            if heights[i] is not None:
                return heights[i]
            if i in seen:
                raise ValueError("parent table has a cycle")
            p = self.parents[i]
            h = 0 if p is None else ht(p, seen | {i}) + 1
            heights[i] = h
            return h

        for i in range(n):
            ht(i, frozenset())
        self.heights = tuple(heights)

    def height(self) -> int:
        """Number of levels (one past the largest node height)."""
        return max(self.heights) + 1 if self.heights else 0

    def ancestors(self, i: int) -> FinSet:
        out = []
        p = self.parents[i]
        while p is not None:
            out.append(p)
            p = self.parents[p]
        return finset(out)

    def chains(self):
        """All chains (sets of pairwise comparable nodes), the empty one included."""
        seen = {()}
        for i in self.nodes:
            anc = self.ancestors(i)
            for sub in itertools.chain.from_iterable(
                    itertools.combinations(anc, k) for k in range(len(anc) + 1)):
                seen.add(finset(sub + (i,)))
        return sorted(seen, key=lambda s: (len(s), s))


def tree_lift(tree: FiniteTree, heights_family: ExplicitFamily) -> ExplicitFamily:
    """Chains of the tree whose height sets belong to the given family.

    The height family must be hereditary and its window must cover every
    tree level, so that the lift is hereditary as well.
    """
    from .core import is_hereditary
    if not is_hereditary(heights_family):
        raise ValueError("height family must be hereditary")
    if heights_family.window < tree.height():
        raise ValueError("height family window %d does not cover tree height %d"
                         % (heights_family.window, tree.height()))
    members = []
    for chain in tree.chains():
        hs = finset(tree.heights[i] for i in chain)
        if hs in heights_family:
            members.append(chain)
    return ExplicitFamily(members, max(len(tree.nodes), 1), base=0)


# ---------------------------------------------------------------------------
# maximal-member probes


def maximal_member_avoiding(fam: LazyFamily, point: int, avoid: FinSet,
                            tries: int = 64) -> Optional[FinSet]:
    """A maximal member containing the point and disjoint from ``avoid``.

    Grows the member with fresh tail elements past the avoided region until
    the extension set empties; None when the point is not a member.
    """
    s = finset([point])
    if not fam.membership(s):
        return None
    avoid_set = set(avoid)
    hi = max([point] + list(avoid)) + 1
    for _ in range(tries):
        ext = fam.extension_set(s)
        if not ext.is_infinite and not ext.exceptional:
            return s
        picked = None
        if ext.is_infinite:
            n = max(ext.tail_threshold, hi)
            while n in avoid_set or n in s or n not in ext:
                n += 1
            picked = n
        else:
            for n in ext.exceptional:
                if n not in avoid_set:
                    picked = n
                    break
            if picked is None:
                return None  # every remaining extension is blocked
        s = finset(s + (picked,))
    return None


def singleton_density_check(fam: LazyFamily, points: Iterable[int],
                            avoid_sets: Iterable[FinSet]) -> bool:
    """Every listed singleton extends to a maximal member dodging every
    listed finite obstacle."""
    for p in points:
        for avoid in avoid_sets:
            if p in avoid:
                continue
            if maximal_member_avoiding(fam, p, avoid) is None:
                return False
    return True


# ---------------------------------------------------------------------------
# descriptor language


_CATALOG = {
    "schreier": schreier,
    "ex-initial-pairs": remove_pattern_initial_pairs,
    "ex-adjacent-removed": adjacent_pairs_removed,
    "ex-4-perm-pair-f": lambda: permuted_pair()[0],
    "ex-4-perm-pair-g": lambda: permuted_pair()[1],
    "ex-homeo-not-pi-f": lambda: homeo_not_pi_pair()[0],
    "ex-homeo-not-pi-g": lambda: homeo_not_pi_pair()[1],
}


class _Tokens:
    def __init__(self, text: str):
        self.toks = self._scan(text)
        self.pos = 0

    @staticmethod
    def _scan(text: str) -> List[str]:
        out = []
        i = 0
        while i < len(text):
            c = text[i]
            if c.isspace():
                i += 1
            elif c in "()[]":
                # brackets after 'permute' belong to the permutation literal
                if c == "[":
                    j = text.index("]", i)
                    out.append(text[i:j + 1])
                    i = j + 1
                else:
                    out.append(c)
                    i += 1
            elif c == "{" or (c == "!" and i + 1 < len(text) and text[i + 1] == "{"):
                j = text.index("}", i)
                out.append(text[i:j + 1])
                i = j + 1
            else:
                j = i
                while j < len(text) and not text[j].isspace() and text[j] not in "(){}[]":
                    j += 1
                out.append(text[i:j])
                i = j
        return out

    def peek(self) -> Optional[str]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of descriptor")
        self.pos += 1
        return tok

    def expect(self, tok: str):
        got = self.next()
        if got != tok:
            raise ValueError("expected %r, got %r" % (tok, got))


def parse_descriptor(text: str) -> LazyFamily:
    """Parse the canonical prefix descriptor form; see the module docstring."""
    toks = _Tokens(text)
    fam = _parse(toks)
    if toks.peek() is not None:
        raise ValueError("trailing junk in descriptor: %r" % (toks.peek(),))
    return fam


def _parse_paren(toks: _Tokens) -> LazyFamily:
    toks.expect("(")
    fam = _parse(toks)
    toks.expect(")")
    return fam


def _parse(toks: _Tokens) -> LazyFamily:
    head = toks.next()
    if head in _CATALOG:
        return _CATALOG[head]()
    if head == "cube":
        n = int(toks.next())
        if toks.peek() == "base":
            toks.next()
            return cube(n, int(toks.next()))
        return cube(n)
    if head == "block-schreier":
        return block_schreier(int(toks.next()))
    if head == "remove":
        sets = []
        while toks.peek() is not None and toks.peek().startswith("{"):
            sets.append(parse_set(toks.next()))
        return remove_sets(_parse_paren(toks), sets)
    if head == "restrict":
        lit = toks.next()
        if not lit.startswith("!{"):
            raise ValueError("restrict expects !{...}, got %r" % (lit,))
        excluded = parse_set(lit[1:])
        return restrict_ground(_parse_paren(toks), excluded)
    if head == "permute":
        lit = toks.next()
        pi = parse_permutation(lit)
        return permuted(_parse_paren(toks), pi)
    if head == "union":
        return union(_parse_paren(toks), _parse_paren(toks))
    if head == "derive":
        k = int(toks.next())
        fam = _parse_paren(toks)
        for _ in range(k):
            fam = fam.derivative()
        return fam
    if head == "finite":
        base = int(toks.next())
        window = int(toks.next())
        lit = toks.next()
        if not (lit.startswith("[") and lit.endswith("]")):
            raise ValueError("finite expects a bracketed member list")
        members = [parse_set(part) for part in _split_set_literals(lit[1:-1])]
        return from_explicit(ExplicitFamily(members, window, base))
    raise ValueError("unknown constructor %r" % (head,))


def _split_set_literals(body: str) -> List[str]:
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c.isspace():
            i += 1
        elif c == "-":
            out.append("-")
            i += 1
        elif c == "{":
            j = body.index("}", i)
            out.append(body[i:j + 1])
            i = j + 1
        else:
            raise ValueError("bad member list near %r" % (body[i:],))
    return out
