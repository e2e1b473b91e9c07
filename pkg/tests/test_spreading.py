import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combfam import (ExplicitFamily, canonical_spread_witness, downward_closure,
                     finset, is_hereditary, is_spread_of, is_spreading, schreier,
                     spread_witness, spread_witness_bruteforce, spreading_closure,
                     spreads_within)
from combfam.iso import enumerate_hereditary_spreading

small_set = st.frozensets(st.integers(min_value=0, max_value=9), max_size=5)


class TestSpreadRelation:
    def test_examples(self):
        assert is_spread_of((0, 1), (0, 2))
        assert is_spread_of((2, 3), (2, 3))
        assert not is_spread_of((1, 2), (0, 5))

    def test_size_mismatch(self):
        assert not is_spread_of((0,), (0, 1))

    @given(small_set, small_set)
    @settings(max_examples=300)
    def test_dominance_matches_injection_oracle(self, a, b):
        s, t = finset(a), finset(b)
        assert is_spread_of(s, t) == (spread_witness_bruteforce(s, t) is not None)

    def test_dominance_matches_oracle_exhaustive_small(self):
        sets = [finset(c) for k in range(4)
                for c in itertools.combinations(range(6), k)]
        for s in sets:
            for t in sets:
                assert is_spread_of(s, t) == (
                    spread_witness_bruteforce(s, t) is not None), (s, t)

    @given(small_set, small_set, small_set)
    @settings(max_examples=200)
    def test_reflexive_transitive(self, a, b, c):
        s, t, u = finset(a), finset(b), finset(c)
        assert is_spread_of(s, s)
        if is_spread_of(s, t) and is_spread_of(t, u):
            assert is_spread_of(s, u)

    def test_witness_is_valid(self):
        w = spread_witness((0, 1), (0, 2))
        m = w.as_dict()
        assert set(m.values()) == {0, 2}
        assert all(v >= k for k, v in m.items())


class TestCanonicalWitness:
    def test_worked_example(self):
        w = canonical_spread_witness((1, 2, 3), (2, 3, 5))
        assert w.as_dict() == {2: 2, 3: 3, 1: 5}

    def test_identity_on_equal_sets(self):
        w = canonical_spread_witness((0, 4), (0, 4))
        assert w.as_dict() == {0: 0, 4: 4}

    def test_disjoint_pair(self):
        w = canonical_spread_witness((0, 1), (2, 3))
        assert w.as_dict() == {0: 2, 1: 3}

    def test_rejects_non_spread(self):
        with pytest.raises(ValueError):
            canonical_spread_witness((1, 2), (0, 5))

    @given(small_set, small_set)
    @settings(max_examples=300)
    def test_fixes_intersection_image_exact(self, a, b):
        s, t = finset(a), finset(b)
        if not is_spread_of(s, t):
            return
        w = canonical_spread_witness(s, t)
        m = w.as_dict()
        assert finset(m.values()) == t
        for i in set(s) & set(t):
            assert m[i] == i
        assert all(v >= k for k, v in m.items())


class TestIsSpreading:
    def test_singletons_family(self):
        f = ExplicitFamily([()] + [(i,) for i in range(5)], 5)
        assert is_spreading(f)

    def test_missing_spread(self):
        f = ExplicitFamily([(), (0,), (1,), (0, 1)], 3)
        assert not is_spreading(f)

    def test_schreier_truncation_with_headroom(self):
        t = schreier().truncate(6)
        assert is_spreading(t, headroom=3)
        assert is_spreading(t)  # full truncation is spread-closed in-window

    def test_headroom_exceeding_window_rejected(self):
        f = ExplicitFamily([()], 3)
        with pytest.raises(ValueError):
            is_spreading(f, headroom=4)


class TestSpreadingClosure:
    def test_fixed_point(self):
        f = ExplicitFamily([()] + [(i,) for i in range(4)], 4)
        assert spreading_closure(f) == f

    def test_singleton_fill(self):
        f = ExplicitFamily([(0,)], 3)
        assert spreading_closure(f) == ExplicitFamily([(0,), (1,), (2,)], 3)

    def test_pair_fill(self):
        f = ExplicitFamily([(0, 1)], 4)
        assert spreading_closure(f) == ExplicitFamily(
            list(itertools.combinations(range(4), 2)), 4)

    def test_matches_direct_spread_enumeration(self):
        f = ExplicitFamily([(0, 2), (1,)], 5)
        closed = set(f.members)
        for t in f.members:
            closed.update(spreads_within(t, 5))
        # saturate the direct enumeration to a fixed point
        changed = True
        while changed:
            changed = False
            for t in list(closed):
                for u in spreads_within(t, 5):
                    if u not in closed:
                        closed.add(u)
                        changed = True
        assert spreading_closure(f) == ExplicitFamily(closed, 5)

    def test_idempotent(self):
        f = ExplicitFamily([(0, 1), (2,)], 5)
        c = spreading_closure(f)
        assert spreading_closure(c) == c


class TestClosureLemma:
    """Downward closures of spreading families stay spreading."""

    def test_on_enumerated_families(self):
        for m, window in [(2, 8), (3, 9), (4, 12)]:
            for fam in enumerate_hereditary_spreading(m, window):
                ground_view = fam.with_window(m)
                assert is_spreading(ground_view)
                closed = downward_closure(ground_view)
                assert is_spreading(closed)

    def test_on_non_hereditary_spread_closed_families(self):
        # start from each 2-subset of [0, m), spread-close, then check the
        # downward closure is spreading within the same ground
        m = 5
        for gen in itertools.combinations(range(m), 2):
            f = spreading_closure(ExplicitFamily([gen], m))
            assert is_spreading(f)
            assert is_spreading(downward_closure(f))

    def test_with_window_headroom(self):
        # members below m, spreads allowed through the full window
        m, window = 3, 9
        for k in (1, 2, 3):
            for gen in itertools.combinations(range(m), k):
                f = spreading_closure(ExplicitFamily([gen], window))
                assert is_spreading(f)
                assert is_spreading(downward_closure(f))
