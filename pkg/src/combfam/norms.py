"""The combinatorial norm, dual-ball extreme points and signed permutation operators.

All scalar arithmetic is exact: vector entries are rationals and the vertex
oracle decides convex-combination feasibility by exact pivoting, never
floating point.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Tuple

try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _mpq = Fraction

from .core import (ExplicitFamily, FinSet, Permutation, finset, format_set,
                   is_hereditary, maximal_elements)
from .lazy import LazyFamily


class SparseVector:
    """Finitely supported rational vector."""

    __slots__ = ("entries", "support")

    def __init__(self, entries):
        items = {}
        for k, v in (entries.items() if hasattr(entries, "items") else entries):
            v = Fraction(v)
            if v:
                items[int(k)] = v
        self.entries = items
        self.support = finset(items)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries.get(i, Fraction(0))

    def __eq__(self, other):
        return isinstance(other, SparseVector) and self.entries == other.entries

    def __hash__(self):
        return hash(tuple(sorted(self.entries.items())))

    def __add__(self, other: "SparseVector") -> "SparseVector":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, Fraction(0)) + v
        return SparseVector(out)

    def __neg__(self) -> "SparseVector":
        return SparseVector({k: -v for k, v in self.entries.items()})

    def scale(self, c) -> "SparseVector":
        c = Fraction(c)
        return SparseVector({k: c * v for k, v in self.entries.items()})

    def flip_signs(self, flips: Iterable[int]) -> "SparseVector":
        f = set(flips)
        return SparseVector({k: -v if k in f else v for k, v in self.entries.items()})

    def __repr__(self):
        body = ", ".join("%d: %s" % (k, v) for k, v in sorted(self.entries.items()))
        return "SparseVector({%s})" % body


def vector_to_text(x: SparseVector) -> str:
    lines = ["vec"]
    for k in x.support:
        v = x.entries[k]
        lines.append("%d %s" % (k, v.numerator if v.denominator == 1 else v))
    return "\n".join(lines) + "\n"


def vector_from_text(text: str) -> SparseVector:
    entries = {}
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line != "vec":
                raise ValueError("line %d: expected 'vec' header" % lineno)
            header_seen = True
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError("line %d: expected 'index value'" % lineno)
        try:
            entries[int(parts[0])] = Fraction(parts[1])
        except (ValueError, ZeroDivisionError):
            raise ValueError("line %d: bad rational %r" % (lineno, parts[1]))
    if not header_seen:
        raise ValueError("line 1: missing 'vec' header")
    return SparseVector(entries)


def read_vector(path: str) -> SparseVector:
    with open(path, "r", encoding="ascii") as fh:
        return vector_from_text(fh.read())


class SignedFunctional:
    """Sum of signed coordinate functionals over a finite support."""

    __slots__ = ("support", "signs")

    def __init__(self, support: FinSet, signs: Sequence[int]):
        support = finset(support)
        signs = tuple(int(t) for t in signs)
        if len(signs) != len(support) or any(t not in (-1, 1) for t in signs):
            raise ValueError("signs must be +-1, one per support point")
        self.support = support
        self.signs = signs

    def sign_at(self, i: int) -> int:
        try:
            return self.signs[self.support.index(i)]
        except ValueError:
            return 0

    def apply(self, x: SparseVector) -> Fraction:
        return sum((t * x[i] for i, t in zip(self.support, self.signs)),
                   Fraction(0))

    def coordinates(self, window: int) -> Tuple[int, ...]:
        out = [0] * window
        for i, t in zip(self.support, self.signs):
            out[i] = t
        return tuple(out)

    def key(self):
        return (len(self.support), self.support, self.signs)

    def __eq__(self, other):
        return (isinstance(other, SignedFunctional)
                and self.support == other.support and self.signs == other.signs)

    def __hash__(self):
        return hash((self.support, self.signs))

    def __repr__(self):
        return "SignedFunctional(%s)" % (format_functional(self),)


def format_functional(f: SignedFunctional) -> str:
    if not f.support:
        return "0"
    return " ".join("%s%d" % ("+" if t > 0 else "-", i)
                    for i, t in zip(f.support, f.signs))


def functional_apply(f: SignedFunctional, x: SparseVector) -> Fraction:
    return f.apply(x)


def norm(family, x: SparseVector) -> Fraction:
    """sup over members s of the sum of |x| over s; exact.

    For an explicit family the scan over all members is the definition; for a
    hereditary family it agrees with the trace reduction.  A lazy family is
    truncated just past the vector support, which is exact for hereditary (or
    initial-segment-closed) families.
    """
    if isinstance(family, LazyFamily):
        if not (family.hereditary or family.prefix_closed):
            raise ValueError("norm over this lazy family is not certified exact")
        window = (x.support[-1] + 1) if x.support else family.base
        family = family.truncate(window)
    best = Fraction(0)
    for s in family.members:
        total = sum((abs(x[i]) for i in s), Fraction(0))
        if total > best:
            best = total
    return best


def extreme_points(family: ExplicitFamily) -> Tuple[SignedFunctional, ...]:
    """All signed functionals over maximal members, in canonical order.

    This is the vertex set of the dual-ball cross-section for hereditary
    families; non-hereditary input is rejected.
    """
    if not is_hereditary(family):
        raise ValueError("extreme point characterization requires a hereditary family")
    out = []
    for s in maximal_elements(family).members:
        for signs in itertools.product((1, -1), repeat=len(s)):
            out.append(SignedFunctional(s, signs))
    out.sort(key=SignedFunctional.key)
    return tuple(out)


def candidate_functionals(family: ExplicitFamily) -> Tuple[SignedFunctional, ...]:
    """Signed functionals over all members (the norming set)."""
    out = []
    for s in family.members:
        for signs in itertools.product((1, -1), repeat=len(s)):
            out.append(SignedFunctional(s, signs))
    out.sort(key=SignedFunctional.key)
    return tuple(out)


def _convex_feasible(target, columns) -> bool:
    """Exact phase-one simplex: is the target an affine-convex combination of
    the columns?  Bland's rule, rational pivoting."""
    m = len(target) + 1
    k = len(columns)
    if k == 0:
        return False
    rows = []
    for i in range(m):
        rhs = _mpq(target[i]) if i < m - 1 else _mpq(1)
        body = [_mpq(col[i]) if i < m - 1 else _mpq(1) for col in columns]
        if rhs < 0:
            rhs = -rhs
            body = [-v for v in body]
        rows.append((body, rhs))
    # tableau over columns 0..k-1 plus one artificial per row
    tab = [body + [_mpq(1) if j == i else _mpq(0) for j in range(m)] + [rhs]
           for i, (body, rhs) in enumerate(rows)]
    basis = list(range(k, k + m))
    total = k + m

    def objective_row():
        # price out: artificials have cost 1
        cost = [_mpq(0)] * (total + 1)
        for i, b in enumerate(basis):
            if b >= k:
                for j in range(total + 1):
                    cost[j] += tab[i][j]
        return cost

    cost = objective_row()
    for _ in range(10000):
        enter = -1
        for j in range(k):  # artificials never re-enter
            if j not in basis and cost[j] > 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][total] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            break
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [v - f * w for v, w in zip(tab[i], tab[leave])]
        basis[leave] = enter
        cost = objective_row()
    else:  # pragma: no cover - guarded loop
        raise RuntimeError("simplex did not terminate")
    residual = sum((tab[i][total] for i in range(m) if basis[i] >= k), _mpq(0))
    return residual == 0


def is_extreme_brute(family: ExplicitFamily, f: SignedFunctional) -> bool:
    """Vertex test against the polytope spanned by all signed functionals
    over members: true iff f is not a convex combination of the others."""
    if f.support not in family:
        raise ValueError("functional support %s is not a member" % (format_set(f.support),))
    window = family.window
    target = f.coordinates(window)
    columns = [g.coordinates(window) for g in candidate_functionals(family)
               if not (g.support == f.support and g.signs == f.signs)]
    return not _convex_feasible(target, columns)


def norming_check(family: ExplicitFamily, sample: Iterable[SparseVector]) -> bool:
    """For every sampled vector, the norm equals the best absolute value over
    the computed extreme points."""
    ext = extreme_points(family)
    for x in sample:
        peak = max((abs(f.apply(x)) for f in ext), default=Fraction(0))
        if peak != norm(family, x):
            return False
    return True


class SignedPermutationOperator:
    """x -> sum theta_a x(a) e_{pi(a)}; identity signs beyond the listed ones."""

    __slots__ = ("permutation", "signs")

    def __init__(self, permutation: Permutation, signs=None):
        self.permutation = permutation
        signs = dict(signs or {})
        for k, v in signs.items():
            if v not in (-1, 1):
                raise ValueError("signs must be +-1")
            if k >= permutation.window:
                raise ValueError("sign at %d outside the permutation window" % (k,))
        self.signs = {k: v for k, v in signs.items() if v == -1}

    def sign_at(self, i: int) -> int:
        return -1 if i in self.signs else 1

    def apply(self, x: SparseVector) -> SparseVector:
        return SparseVector({self.permutation(i): self.sign_at(i) * v
                             for i, v in x.entries.items()})


def apply_operator(op: SignedPermutationOperator, x: SparseVector) -> SparseVector:
    return op.apply(x)


def is_isometry(op: SignedPermutationOperator, fam_f: ExplicitFamily,
                fam_g: ExplicitFamily):
    """Whether the operator maps one combinatorial space isometrically onto
    the other; returns (answer, witness).

    The exact criterion is that the permutation carries the first family onto
    the second.  When it fails, any set in the symmetric difference of the
    image and the target witnesses a norm gap on its indicator vector, and
    the canonically least one is returned.
    """
    if fam_f.window != fam_g.window or fam_f.base != fam_g.base:
        raise ValueError("families must share window and base")
    if not (is_hereditary(fam_f) and is_hereditary(fam_g)):
        raise ValueError("isometry test requires hereditary families")
    image = {op.permutation.image(s) for s in fam_f.members}
    diff = image.symmetric_difference(fam_g._set)
    if not diff:
        return True, None
    witness = min(diff, key=lambda s: (len(s), s))
    return False, witness


def indicator(s: FinSet) -> SparseVector:
    return SparseVector({i: 1 for i in s})
