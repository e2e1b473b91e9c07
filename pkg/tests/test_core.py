import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combfam import (ExplicitFamily, FamilyParseError, Permutation,
                     apply_permutation, downward_closure, family_from_text,
                     family_to_text, finset, format_permutation, format_set,
                     is_hereditary, maximal_elements, parse_permutation,
                     parse_set, subsets, trace)

small_sets = st.frozensets(st.integers(min_value=0, max_value=5), max_size=4)
small_families = st.builds(
    lambda ms: ExplicitFamily([finset(m) for m in ms], window=6),
    st.frozensets(small_sets, max_size=8))


def fam(*members, window=6, base=0):
    return ExplicitFamily([finset(m) for m in members], window, base)


class TestFinSet:
    def test_finset_sorts_and_dedupes(self):
        assert finset([3, 1, 3, 0]) == (0, 1, 3)
        assert finset() == ()

    def test_finset_rejects_negatives(self):
        with pytest.raises(ValueError):
            finset([-1])

    def test_set_literals(self):
        assert parse_set("{2 3}") == (2, 3)
        assert parse_set("-") == ()
        assert format_set((2, 3)) == "{2 3}"
        assert format_set(()) == "-"
        with pytest.raises(ValueError):
            parse_set("2 3")


class TestContains:
    def test_member_lookup(self):
        f = fam((), (0,), (1,), (0, 1))
        assert (0, 1) in f
        assert (0, 2) not in f

    def test_missing_pair(self):
        f = fam((), (0,), (1,))
        assert (0, 1) not in f

    def test_size_bound(self):
        f = downward_closure(fam((0, 1), (0, 2), (1, 2), window=3))
        assert (0, 1, 2) not in f


class TestHereditary:
    def test_square_is_hereditary(self):
        assert is_hereditary(fam((), (0,), (1,), (0, 1)))

    def test_missing_subset(self):
        assert not is_hereditary(fam((0, 1)))

    def test_closure_examples(self):
        assert downward_closure(fam((0, 1))) == fam((), (0,), (1,), (0, 1))
        assert downward_closure(fam((1, 3), (2,))) == fam((), (1,), (2,), (3,), (1, 3))

    @given(small_families)
    @settings(max_examples=60)
    def test_closure_idempotent_and_hereditary(self, f):
        c = downward_closure(f)
        assert is_hereditary(c)
        assert downward_closure(c) == c

    @given(small_families, small_families)
    @settings(max_examples=40)
    def test_closure_monotone(self, f, g):
        both = ExplicitFamily(f.members + g.members, 6)
        cf_, cb = downward_closure(f), downward_closure(both)
        assert set(cf_.members) <= set(cb.members)


class TestMaximal:
    def test_basic(self):
        assert maximal_elements(fam((), (0,), (1,), (0, 1))) == fam((0, 1))

    def test_antichain_fixed(self):
        anti = fam((0, 1), (2, 3))
        assert maximal_elements(anti) == anti

    def test_hereditary_round_trip(self):
        from combfam import schreier
        t = schreier().truncate(4)
        assert maximal_elements(t) == ExplicitFamily(
            [(0,), (1, 2), (1, 3), (2, 3)], 4)
        assert downward_closure(maximal_elements(t)) == t

    @given(small_families)
    @settings(max_examples=60)
    def test_closure_of_maximal_recovers_hereditary(self, f):
        c = downward_closure(f)
        assert downward_closure(maximal_elements(c)) == c


class TestTrace:
    def test_full_region(self):
        f = downward_closure(fam((0, 1), (2,)))
        assert trace(f, (0, 1, 2, 3, 4, 5)) == f

    def test_empty_region(self):
        f = fam((), (0,))
        assert trace(f, ()) == fam(())

    def test_filter(self):
        f = downward_closure(fam((0, 1), (0, 2), (1, 2), window=3))
        assert trace(f, (0, 2)) == ExplicitFamily([(), (0,), (2,), (0, 2)], 3)


class TestPermutation:
    def test_identity_beyond_window(self):
        pi = Permutation.from_mapping({0: 2, 2: 0})
        assert pi(7) == 7
        assert pi.image((0, 1)) == (1, 2)

    def test_compose_inverse(self):
        pi = Permutation.from_mapping({0: 1, 1: 2, 2: 0})
        assert pi.compose(pi.inverse()) == Permutation.identity(3)

    def test_bad_table(self):
        with pytest.raises(ValueError):
            Permutation([0, 0, 1])

    def test_format_round_trip(self):
        pi = Permutation.from_mapping({1: 3, 2: 1, 3: 2})
        assert format_permutation(pi) == "[1>3 2>1 3>2]"
        assert parse_permutation("[1>3 2>1 3>2]") == pi

    def test_apply_identity(self):
        f = downward_closure(fam((0, 1)))
        assert apply_permutation(f, Permutation.identity(6)) == f

    def test_apply_symmetric(self):
        f = fam((1,), (2,))
        assert apply_permutation(f, Permutation.from_mapping({1: 2, 2: 1}, 6)) == f

    def test_apply_moves_pair(self):
        f = fam((0, 1), window=3)
        pi = Permutation.from_mapping({0: 2, 2: 0}, 3)
        assert apply_permutation(f, pi) == fam((1, 2), window=3)

    def test_window_mismatch_rejected(self):
        f = fam((0, 1), window=6)
        with pytest.raises(ValueError):
            apply_permutation(f, Permutation.identity(3))

    @given(small_families, st.permutations(list(range(6))))
    @settings(max_examples=60)
    def test_permutation_invariants(self, f, table):
        pi = Permutation(table)
        g = apply_permutation(f, pi)
        assert len(g) == len(f)
        assert sorted(len(m) for m in g.members) == sorted(len(m) for m in f.members)
        assert is_hereditary(g) == is_hereditary(f)
        assert apply_permutation(g, pi.inverse()) == f
        assert maximal_elements(g) == apply_permutation(maximal_elements(f), pi)


class TestFamilyFile:
    def test_round_trip(self):
        f = downward_closure(fam((0, 2), (1,), window=4))
        assert family_from_text(family_to_text(f)) == f

    def test_read_any_order_and_comments(self):
        text = "# comment\nground 0 4\n1 2\n-\n0\n"
        f = family_from_text(text)
        assert f.members == ((), (0,), (1, 2))

    def test_parse_error_carries_line(self):
        with pytest.raises(FamilyParseError) as err:
            family_from_text("ground 0 4\n0 x\n")
        assert err.value.line == 2

    def test_missing_header(self):
        with pytest.raises(FamilyParseError):
            family_from_text("0 1\n")

    def test_base_one(self):
        f = ExplicitFamily([(), (1,), (1, 2)], 4, base=1)
        assert family_from_text(family_to_text(f)) == f
        with pytest.raises(ValueError):
            ExplicitFamily([(0,)], 4, base=1)
