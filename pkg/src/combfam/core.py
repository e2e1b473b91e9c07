"""Finite families of finite subsets of an integer window.

A family is a finite collection of finite sets of natural indices.  Members
are kept in a canonical order (size first, then lexicographic) so that file
output, reports and golden tests are reproducible byte for byte.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Optional

# A finite set of natural indices is represented as a strictly increasing
# tuple of ints.  The empty tuple is the empty set.
FinSet = tuple


def finset(elements: Iterable[int] = ()) -> FinSet:
    """Canonical finite set: sorted tuple of distinct natural numbers."""
    out = tuple(sorted(set(elements)))
    for x in out:
        if not isinstance(x, int) or isinstance(x, bool) or x < 0:
            raise ValueError("set elements must be natural numbers, got %r" % (x,))
    return out


def subsets(s: FinSet) -> Iterator[FinSet]:
    """All subsets of s, smallest first."""
    for k in range(len(s) + 1):
        yield from itertools.combinations(s, k)


def set_key(s: FinSet):
    """Canonical sort key: size, then lexicographic."""
    return (len(s), s)


def format_set(s: FinSet) -> str:
    """Brace literal used on command lines and in reports: ``{2 3}``, ``-`` for the empty set."""
    if not s:
        return "-"
    return "{" + " ".join(str(i) for i in s) + "}"


def parse_set(text: str) -> FinSet:
    """Parse a brace literal; inverse of :func:`format_set`."""
    text = text.strip()
    if text == "-":
        return ()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError("set literal must look like {2 3} or -, got %r" % (text,))
    body = text[1:-1].strip()
    if not body:
        return ()
    try:
        return finset(int(p) for p in body.split())
    except ValueError:
        raise ValueError("bad set literal %r" % (text,))


class ExplicitFamily:
    """An immutable family of finite sets confined to ``[base, window)``.

    ``base`` is the smallest usable index (0 or 1); ``window`` is the
    exclusive upper bound for member elements.  No claim is made about the
    family beyond its window.
    """

    __slots__ = ("window", "base", "members", "_set", "_hereditary")

    def __init__(self, members: Iterable[FinSet], window: int, base: int = 0):
        if base not in (0, 1):
            raise ValueError("base must be 0 or 1, got %r" % (base,))
        if window < 0:
            raise ValueError("window must be a natural number")
        ms = sorted({finset(m) for m in members}, key=set_key)
        for m in ms:
            if m and (m[0] < base or m[-1] >= window):
                raise ValueError(
                    "member %s outside [%d, %d)" % (format_set(m), base, window))
        self.window = window
        self.base = base
        self.members = tuple(ms)
        self._set = frozenset(ms)
        self._hereditary = None

    def __contains__(self, s) -> bool:
        return tuple(s) in self._set

    def __iter__(self) -> Iterator[FinSet]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExplicitFamily):
            return NotImplemented
        return (self.window == other.window and self.base == other.base
                and self._set == other._set)

    def __hash__(self) -> int:
        return hash((self.window, self.base, self._set))

    def __repr__(self) -> str:
        shown = " ".join(format_set(m) for m in self.members[:6])
        if len(self.members) > 6:
            shown += " ..."
        return "ExplicitFamily(base=%d, window=%d, %d members: %s)" % (
            self.base, self.window, len(self.members), shown)

    def with_window(self, window: int) -> "ExplicitFamily":
        """Same members viewed in a different window."""
        return ExplicitFamily(self.members, window, self.base)

    def support(self) -> FinSet:
        """Indices appearing in at least one member."""
        out = set()
        for m in self.members:
            out.update(m)
        return finset(out)


def contains(family: ExplicitFamily, s: FinSet) -> bool:
    return finset(s) in family


def is_hereditary(family: ExplicitFamily) -> bool:
    """True iff every subset of every member is a member."""
    if family._hereditary is None:
        ok = True
        for m in family.members:
            # dropping one element at a time suffices: subsets are reached by chains
            for i in range(len(m)):
                if m[:i] + m[i + 1:] not in family._set:
                    ok = False
                    break
            if not ok:
                break
        family._hereditary = ok
    return family._hereditary


def downward_closure(family: ExplicitFamily) -> ExplicitFamily:
    """Smallest hereditary family containing the given one; idempotent."""
    closed = set()
    for m in family.members:
        closed.update(subsets(m))
    return ExplicitFamily(closed, family.window, family.base)


def maximal_elements(family: ExplicitFamily) -> ExplicitFamily:
    """Members with no proper superset in the family."""
    out = []
    for m in family.members:
        sm = set(m)
        if not any(len(t) > len(m) and sm.issubset(t) for t in family.members):
            out.append(m)
    return ExplicitFamily(out, family.window, family.base)


def trace(family: ExplicitFamily, region: FinSet) -> ExplicitFamily:
    """The members contained in the given index set."""
    r = set(region)
    return ExplicitFamily([m for m in family.members if r.issuperset(m)],
                          family.window, family.base)


class Permutation:
    """Finitely supported bijection of the naturals: an explicit table on
    ``[0, window)``, identity beyond."""

    __slots__ = ("window", "table")

    def __init__(self, table: Iterable[int]):
        t = tuple(table)
        if sorted(t) != list(range(len(t))):
            raise ValueError("table is not a bijection of [0, %d)" % (len(t),))
        self.window = len(t)
        self.table = t

    @classmethod
    def identity(cls, window: int) -> "Permutation":
        return cls(range(window))

    @classmethod
    def from_mapping(cls, mapping, window: Optional[int] = None) -> "Permutation":
        """Build from a {source: target} dict, identity elsewhere."""
        if window is None:
            window = max([0] + [max(k, v) + 1 for k, v in mapping.items()])
        table = list(range(window))
        for k, v in mapping.items():
            table[k] = v
        return cls(table)

    def __call__(self, i: int) -> int:
        return self.table[i] if i < self.window else i

    def image(self, s: FinSet) -> FinSet:
        return finset(self(i) for i in s)

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self*other)(i) = self(other(i))."""
        w = max(self.window, other.window)
        return Permutation(self(other(i)) for i in range(w))

    def inverse(self) -> "Permutation":
        inv = [0] * self.window
        for i, v in enumerate(self.table):
            inv[v] = i
        return Permutation(inv)

    def moved(self):
        """Sorted (source, target) pairs where the permutation is not the identity."""
        return tuple((i, v) for i, v in enumerate(self.table) if i != v)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.table))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.moved() == other.moved()

    def __hash__(self) -> int:
        return hash(self.moved())

    def __repr__(self) -> str:
        return "Permutation(%s)" % (format_permutation(self),)


def format_permutation(pi: Permutation) -> str:
    """Bracket form listing moved points only: ``[1>3 2>1 3>2]``; ``[]`` is the identity."""
    return "[" + " ".join("%d>%d" % (a, b) for a, b in pi.moved()) + "]"


def parse_permutation(text: str, window: Optional[int] = None) -> Permutation:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError("permutation literal must look like [1>3 3>1], got %r" % (text,))
    body = text[1:-1].strip()
    mapping = {}
    for part in body.split():
        if ">" not in part:
            raise ValueError("bad permutation entry %r" % (part,))
        a, b = part.split(">", 1)
        mapping[int(a)] = int(b)
    pi = Permutation.from_mapping(mapping, window)
    return pi


def apply_permutation(family: ExplicitFamily, pi: Permutation) -> ExplicitFamily:
    """The pointwise image family ``{pi[s] : s in F}``.

    The permutation window must cover the family window, and images must stay
    inside ``[base, window)``; otherwise the call is rejected.
    """
    if pi.window < family.window:
        raise ValueError("permutation window %d smaller than family window %d"
                         % (pi.window, family.window))
    images = [pi.image(m) for m in family.members]
    for im in images:
        if im and (im[0] < family.base or im[-1] >= family.window):
            raise ValueError("permutation moves member %s outside [%d, %d)"
                             % (format_set(im), family.base, family.window))
    return ExplicitFamily(images, family.window, family.base)


class FamilyParseError(ValueError):
    """Raised on malformed family files; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__("line %d: %s" % (line, message))
        self.line = line


def family_to_text(family: ExplicitFamily) -> str:
    """Line format: a ``ground <base> <window>`` header, then one member per
    line as space-separated increasing integers (``-`` for the empty set)."""
    lines = ["ground %d %d" % (family.base, family.window)]
    for m in family.members:
        lines.append(" ".join(str(i) for i in m) if m else "-")
    return "\n".join(lines) + "\n"


def family_from_text(text: str) -> ExplicitFamily:
    base = window = None
    members = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if base is None:
            parts = line.split()
            if len(parts) != 3 or parts[0] != "ground":
                raise FamilyParseError("expected header 'ground <base> <window>'", lineno)
            try:
                base, window = int(parts[1]), int(parts[2])
            except ValueError:
                raise FamilyParseError("bad header numbers", lineno)
            continue
        if line == "-":
            members.append(())
            continue
        try:
            members.append(finset(int(p) for p in line.split()))
        except ValueError:
            raise FamilyParseError("bad member line %r" % (line,), lineno)
    if base is None:
        raise FamilyParseError("missing 'ground' header", 1)
    try:
        return ExplicitFamily(members, window, base)
    except ValueError as exc:
        raise FamilyParseError(str(exc), 1)


def read_family(path: str) -> ExplicitFamily:
    with open(path, "r", encoding="ascii") as fh:
        return family_from_text(fh.read())


def write_family(family: ExplicitFamily, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(family_to_text(family))
