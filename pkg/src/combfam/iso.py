"""Permutation search between families, automorphisms, the exclusion-set
machinery behind the uniqueness argument, and the exhaustive small census.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from .core import (ExplicitFamily, FinSet, Permutation, apply_permutation,
                   finset, format_permutation, format_set, is_hereditary)
from .lazy import ExtensionSet, LazyFamily
from .spreading import is_spread_of, is_spreading, spreads_within


# ---------------------------------------------------------------------------
# point signatures (permutation invariants used for pruning)


def _derivative_depths(family: ExplicitFamily) -> Dict[FinSet, int]:
    """Window analog of iterated isolated-point removal: a member survives a
    stage when it still has a one-point extension inside the stage."""
    depth = {}
    current = set(family.members)
    stage = 0
    while current:
        nxt = set()
        for s in current:
            for n in range(family.base, family.window):
                if n not in s and finset(s + (n,)) in current:
                    nxt.add(s)
                    break
        for s in current:
            depth[s] = stage
        if nxt == current:  # cannot happen for finite families, guard anyway
            break
        for s in nxt:
            depth[s] = stage + 1
        current = nxt
        stage += 1
    return depth


def point_signature(family: ExplicitFamily, alpha: int,
                    _depths: Optional[Dict[FinSet, int]] = None) -> tuple:
    """Permutation-invariant profile of a point: per-size membership counts,
    the window-derivative depth of its singleton, and the number of in-window
    one-point extensions of its singleton."""
    max_size = max([0] + [len(m) for m in family.members])
    counts = [0] * max_size
    for m in family.members:
        if alpha in m:
            counts[len(m) - 1] += 1
    depths = _derivative_depths(family) if _depths is None else _depths
    single = (alpha,)
    depth = depths.get(single, -1)
    ext = 0
    if single in family:
        ext = sum(1 for n in range(family.base, family.window)
                  if n != alpha and finset((alpha, n)) in family)
    return (tuple(counts), depth, ext)


def signature_table(family: ExplicitFamily) -> Dict[int, tuple]:
    depths = _derivative_depths(family)
    return {alpha: point_signature(family, alpha, depths)
            for alpha in range(family.base, family.window)}


# ---------------------------------------------------------------------------
# permutation search


def find_pi_homeomorphism(fam_f: ExplicitFamily,
                          fam_g: ExplicitFamily) -> Optional[Permutation]:
    """The lexicographically least window permutation carrying the first
    family onto the second, or None.

    Backtracking over point images in increasing order, pruned by signature
    mismatch and by membership of fully assigned images/preimages.
    """
    if fam_f.window != fam_g.window or fam_f.base != fam_g.base:
        raise ValueError("families must share window and base")
    if len(fam_f) != len(fam_g):
        return None
    if sorted(len(m) for m in fam_f.members) != sorted(len(m) for m in fam_g.members):
        return None
    sig_f = signature_table(fam_f)
    sig_g = signature_table(fam_g)
    if sorted(sig_f.values()) != sorted(sig_g.values()):
        return None
    base, window = fam_f.base, fam_f.window
    points = list(range(base, window))
    candidates = {a: [b for b in points if sig_g[b] == sig_f[a]] for a in points}
    members_with = {a: [m for m in fam_f.members if a in m] for a in points}
    g_members_with = {b: [t for t in fam_g.members if b in t] for b in points}
    mapping: Dict[int, int] = {}
    inverse: Dict[int, int] = {}

    def consistent(a: int) -> bool:
        for m in members_with[a]:
            if all(i in mapping for i in m):
                if finset(mapping[i] for i in m) not in fam_g:
                    return False
        b = mapping[a]
        for t in g_members_with[b]:
            if all(j in inverse for j in t):
                if finset(inverse[j] for j in t) not in fam_f:
                    return False
        return True

    def backtrack(idx: int) -> bool:
        if idx == len(points):
            return True
        a = points[idx]
        for b in candidates[a]:
            if b in inverse:
                continue
            mapping[a] = b
            inverse[b] = a
            if consistent(a) and backtrack(idx + 1):
                return True
            del mapping[a]
            del inverse[b]
        return False

    if not backtrack(0):
        return None
    table = list(range(window))
    for a, b in mapping.items():
        table[a] = b
    pi = Permutation(table)
    assert apply_permutation(fam_f, pi) == fam_g
    return pi


def find_pi_bruteforce(fam_f: ExplicitFamily,
                       fam_g: ExplicitFamily) -> Optional[Permutation]:
    """Exhaustive search over all window permutations, lexicographic order."""
    if fam_f.window != fam_g.window or fam_f.base != fam_g.base:
        raise ValueError("families must share window and base")
    base, window = fam_f.base, fam_f.window
    for perm in itertools.permutations(range(base, window)):
        table = list(range(base)) + list(perm)
        pi = Permutation(table)
        try:
            image = apply_permutation(fam_f, pi)
        except ValueError:
            continue
        if image == fam_g:
            return pi
    return None


class AutomorphismOverflowError(RuntimeError):
    def __init__(self, support_count: int, free_points: int, total: int):
        super().__init__("automorphism count %d exceeds the configured bound" % total)
        self.support_count = support_count
        self.free_points = free_points
        self.total = total


def support_automorphisms(family: ExplicitFamily) -> List[Permutation]:
    """Window permutations fixing the family setwise and every point outside
    the member support."""
    support = list(family.support())
    sig = signature_table(family)
    out = []

    def backtrack(idx, mapping, used):
        if idx == len(support):
            table = list(range(family.window))
            for a, b in mapping.items():
                table[a] = b
            pi = Permutation(table)
            if apply_permutation(family, pi) == family:
                out.append(pi)
            return
        a = support[idx]
        for b in support:
            if b in used or sig[b] != sig[a]:
                continue
            mapping[a] = b
            used.add(b)
            ok = True
            for m in family.members:
                if a in m and all(i in mapping for i in m):
                    if finset(mapping[i] for i in m) not in family:
                        ok = False
                        break
            if ok:
                backtrack(idx + 1, mapping, used)
            del mapping[a]
            used.discard(b)

    backtrack(0, {}, set())
    out.sort(key=lambda p: p.table)
    return out


def automorphism_summary(family: ExplicitFamily):
    """(support automorphisms, free points) without enumerating relabelings
    of points that touch no member."""
    support = set(family.support())
    free = [p for p in range(family.base, family.window) if p not in support]
    return support_automorphisms(family), free


def automorphisms(family: ExplicitFamily, cap: int = 20000) -> List[Permutation]:
    """All window permutations fixing the family setwise, in lexicographic
    order; raises :class:`AutomorphismOverflowError` past the cap."""
    sup_autos, free = automorphism_summary(family)
    total = len(sup_autos)
    for k in range(2, len(free) + 1):
        total *= k
    if total > cap:
        raise AutomorphismOverflowError(len(sup_autos), len(free), total)
    out = []
    for pi in sup_autos:
        for perm in itertools.permutations(free):
            table = list(pi.table)
            for src, dst in zip(free, perm):
                table[src] = dst
            out.append(Permutation(table))
    out.sort(key=lambda p: p.table)
    return out


# ---------------------------------------------------------------------------
# exclusion sets and level reconstruction


def excluded_points(family, s: FinSet) -> ExtensionSet:
    """The indices whose addition to s leaves the family.

    For an explicit family the answer lists the in-window exclusions and
    marks everything at or past the window as excluded too (an explicit
    family makes no claim beyond its window).
    """
    s = finset(s)
    if isinstance(family, LazyFamily):
        if not family.membership(s):
            raise ValueError("%s is not a member" % (format_set(s),))
        t, m, present = family._tail_residues(s)
        exceptional = [n for n in range(t)
                       if n not in s and not family.membership(finset(s + (n,)))]
        residues = [rho for rho in range(m) if rho not in present]
        if residues:
            return ExtensionSet(exceptional, t, m, tuple(residues))
        return ExtensionSet(exceptional)
    if s not in family:
        raise ValueError("%s is not a member" % (format_set(s),))
    exceptional = [n for n in range(family.window)
                   if n not in s and finset(s + (n,)) not in family]
    return ExtensionSet(exceptional, family.window, 1, (0,))


def excluded_count_in_window(family: ExplicitFamily, s: FinSet) -> int:
    return len(excluded_points(family, s).elements_below(family.window))


def stratum(family: ExplicitFamily, n: int, k: int,
            headroom: Optional[int] = None) -> ExplicitFamily:
    """Members of size n whose in-window exclusion set has at most k points.

    Requires a hereditary family that is spreading at the given headroom;
    each stratum is then spreading as well.
    """
    _require_hereditary_spreading(family, headroom)
    members = [s for s in family.members
               if len(s) == n and excluded_count_in_window(family, s) <= k]
    return ExplicitFamily(members, family.window, family.base)


def _require_hereditary_spreading(family: ExplicitFamily, headroom: Optional[int]):
    if not is_hereditary(family):
        raise ValueError("operation requires a hereditary family")
    if not is_spreading(family, headroom):
        raise ValueError("operation requires a spreading family")


@dataclass(frozen=True)
class ExclusionComparison:
    """Outcome of comparing exclusion sets along a spread pair."""

    source: FinSet
    target: FinSet
    source_count: int
    target_count: int
    outside_inclusion: bool   # I_t minus s inside I_s minus t
    crossing_bound: bool      # |I_t & s| <= |I_s & t|

    @property
    def ok(self) -> bool:
        return self.target_count <= self.source_count


def spread_exclusion_check(family: ExplicitFamily, s: FinSet, t: FinSet,
                           headroom: Optional[int] = None) -> ExclusionComparison:
    """Exclusion sets cannot grow along a spread: |I_t| <= |I_s| for t a
    spread of s, together with the two set comparisons that prove it."""
    s, t = finset(s), finset(t)
    _require_hereditary_spreading(family, headroom)
    if s not in family or t not in family:
        raise ValueError("both sets must be members")
    if len(s) != len(t):
        raise ValueError("spread pairs have equal sizes")
    if not is_spread_of(s, t):
        raise ValueError("%s is not a spread of %s" % (format_set(t), format_set(s)))
    w = family.window
    i_s = set(excluded_points(family, s).elements_below(w))
    i_t = set(excluded_points(family, t).elements_below(w))
    outside = (i_t - set(s)) <= (i_s - set(t))
    crossing = len(i_t & set(s)) <= len(i_s & set(t))
    return ExclusionComparison(s, t, len(i_s), len(i_t), outside, crossing)


def reconstruct_level(family: ExplicitFamily, n: int,
                      headroom: Optional[int] = None) -> ExplicitFamily:
    """Rebuild the size-(n+1) slice from the size-n members and their
    exclusion counts: add every point outside the initial segment of the
    right length of the complement."""
    _require_hereditary_spreading(family, headroom)
    ground = range(family.base, family.window)
    members = set()
    for s in family.members:
        if len(s) != n:
            continue
        k = excluded_count_in_window(family, s)
        complement = [i for i in ground if i not in s]
        blocked = set(complement[:k])
        for i in complement:
            if i not in blocked:
                members.add(finset(s + (i,)))
    return ExplicitFamily(members, family.window, family.base)


def level_slice(family: ExplicitFamily, size: int) -> ExplicitFamily:
    return ExplicitFamily([s for s in family.members if len(s) == size],
                          family.window, family.base)


# ---------------------------------------------------------------------------
# enumeration and census


def _spread_up_closure(members: set, ground_hi: int, base: int) -> set:
    out = set(members)
    frontier = list(members)
    while frontier:
        nxt = []
        for t in frontier:
            for u in spreads_within(t, ground_hi, base):
                if u not in out:
                    out.add(u)
                    nxt.append(u)
            for k in range(len(t)):
                u = t[:k] + t[k + 1:]
                if u not in out:
                    out.add(u)
                    nxt.append(u)
        frontier = nxt
    return out


def enumerate_hereditary_spreading(members_bound: int, window: int, base: int = 0,
                                   require_singletons: bool = True
                                   ) -> List[ExplicitFamily]:
    """Every hereditary family with members inside [base, members_bound) that
    is closed under spreads within that ground, emitted once each in
    canonical order on the requested window.

    The window must leave headroom past the ground: window >= 2*members_bound
    plus the largest possible member size.
    """
    m = members_bound
    max_member = m - base
    if window < 2 * m + max_member:
        raise ValueError("window %d leaves no headroom for ground [%d, %d)"
                         % (window, base, m))
    ground = tuple(range(base, m))
    seed = {()} | ({(i,) for i in ground} if require_singletons else set())
    if require_singletons:
        seed = _spread_up_closure(seed, m, base)
    candidates = []
    for k in range(len(ground) + 1):
        candidates.extend(itertools.combinations(ground, k))
    seen = set()
    families = []
    frontier = [frozenset(_spread_up_closure(seed, m, base)) if seed else frozenset()]
    seen.add(frontier[0])
    while frontier:
        nxt = []
        for fam in frontier:
            families.append(fam)
            for c in candidates:
                if c in fam:
                    continue
                grown = frozenset(_spread_up_closure(set(fam) | {c}, m, base))
                if grown not in seen:
                    seen.add(grown)
                    nxt.append(grown)
        frontier = nxt
    families.sort(key=lambda f: (len(f), sorted(f, key=lambda s: (len(s), s))))
    return [ExplicitFamily(f, window, base) for f in families]


def _family_serial(family: ExplicitFamily) -> str:
    return " ".join(format_set(m) for m in family.members) or "(empty)"


@dataclass
class CensusReport:
    members_bound: int
    window: int
    base: int
    family_count: int
    pair_count: int
    counterexamples: List[tuple] = field(default_factory=list)
    records: List[dict] = field(default_factory=list)

    def summary(self) -> str:
        return "families: %d, pairs: %d, counterexamples: %d" % (
            self.family_count, self.pair_count, len(self.counterexamples))

    def text(self) -> str:
        lines = [self.summary()]
        for serial_f, serial_g, perm in self.counterexamples:
            lines.append("counterexample: %s | %s | %s" % (serial_f, serial_g, perm))
        return "\n".join(lines) + "\n"

    def machine(self) -> dict:
        return {
            "members_bound": self.members_bound,
            "window": self.window,
            "base": self.base,
            "families": self.family_count,
            "pairs": self.pair_count,
            "counterexamples": [
                {"f": f, "g": g, "permutation": p}
                for f, g, p in self.counterexamples
            ],
            "records": self.records,
        }


def _census_pair(args):
    fam_f, fam_g = args
    pi = find_pi_homeomorphism(fam_f, fam_g)
    if pi is None:
        return None
    return (_family_serial(fam_f), _family_serial(fam_g), format_permutation(pi))


def census(members_bound: int, window: int, base: int = 0,
           require_singletons: bool = True, workers: int = 1) -> CensusReport:
    """Probe the uniqueness statement at window scale: among all enumerated
    hereditary spreading families, no two distinct ones should be carried
    onto each other by a window permutation.  Counterexamples are reported,
    never suppressed."""
    families = enumerate_hereditary_spreading(members_bound, window, base,
                                              require_singletons)
    records = []
    for fam in families:
        sup_autos, free = automorphism_summary(fam)
        sigs = sorted(signature_table(fam).values())
        records.append({
            "family": _family_serial(fam),
            "signatures": [list(map(str, sig)) for sig in sigs],
            "support_automorphisms": len(sup_autos),
            "free_points": len(free),
        })
    pairs = list(itertools.combinations(families, 2))
    found = []
    if workers > 1 and pairs:
        import concurrent.futures
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            for res in pool.map(_census_pair, pairs, chunksize=max(1, len(pairs) // (4 * workers))):
                if res is not None:
                    found.append(res)
    else:
        for pair in pairs:
            res = _census_pair(pair)
            if res is not None:
                found.append(res)
    found.sort()
    return CensusReport(members_bound, window, base, len(families), len(pairs),
                        found, records)


@dataclass
class ReachabilityReport:
    searched: int
    matches: List[str]

    @property
    def found(self) -> bool:
        return bool(self.matches)

    def text(self) -> str:
        lines = ["searched: %d, matches: %d" % (self.searched, len(self.matches))]
        lines.extend("match: %s" % m for m in self.matches)
        return "\n".join(lines) + "\n"


def regular_reachability(family: ExplicitFamily, members_bound: int,
                         window: int) -> ReachabilityReport:
    """Search the enumerated hereditary spreading families for one carried
    onto the given family by a window permutation."""
    for m in family.members:
        if m and m[-1] >= members_bound:
            raise ValueError("family members must live below the ground bound")
    target = family.with_window(window)
    matches = []
    pool = enumerate_hereditary_spreading(members_bound, window, family.base)
    for cand in pool:
        if find_pi_homeomorphism(cand, target) is not None:
            matches.append(_family_serial(cand))
    return ReachabilityReport(len(pool), matches)
