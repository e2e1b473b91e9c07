import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combfam import (ExplicitFamily, Permutation, SignedFunctional,
                     SignedPermutationOperator, SparseVector, apply_operator,
                     apply_permutation, candidate_functionals, cube,
                     downward_closure, extreme_points, finset,
                     format_functional, functional_apply, indicator,
                     is_extreme_brute, is_isometry, norm, norming_check,
                     permuted_pair, schreier, vector_from_text, vector_to_text)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
vectors = st.builds(
    lambda d: SparseVector(d),
    st.dictionaries(st.integers(min_value=0, max_value=5), rationals, max_size=5))


def closure_of(*members, window=6, base=0):
    return downward_closure(ExplicitFamily([finset(m) for m in members], window, base))


HEREDITARY_SAMPLES = [
    closure_of((0,), (1,), (2,), (3,), (4,), (5,)),
    closure_of((0, 1), (2, 3), (4,)),
    closure_of((0, 1, 2), (3, 4, 5)),
    closure_of((1, 2), (1, 3), (2, 3), (0,)),
    schreier().truncate(6),
    cube(2).truncate(6),
]


class TestVectors:
    def test_zero_entries_dropped(self):
        x = SparseVector({0: 0, 1: 2})
        assert x.support == (1,)

    def test_file_round_trip(self):
        x = SparseVector({0: Fraction(1, 2), 3: -2})
        assert vector_from_text(vector_to_text(x)) == x

    def test_parse_errors(self):
        with pytest.raises(ValueError):
            vector_from_text("0 1\n")
        with pytest.raises(ValueError):
            vector_from_text("vec\n0 one\n")


class TestNorm:
    def test_singleton_family_is_sup_norm(self):
        f = cube(1).truncate(3)
        assert norm(f, SparseVector({0: 3, 1: -4, 2: 1})) == 4

    def test_full_powerset_is_l1(self):
        f = closure_of((0, 1, 2), window=3)
        assert norm(f, SparseVector({0: 1, 1: 1, 2: 1})) == 3

    def test_schreier_flat_vector(self):
        x = SparseVector({0: 1, 1: 1, 2: 1, 3: 1})
        assert norm(schreier(), x) == 2

    def test_zero_vector(self):
        assert norm(cube(2).truncate(4), SparseVector({})) == 0
        assert norm(schreier(), SparseVector({})) == 0

    def test_non_hereditary_full_scan(self):
        f = ExplicitFamily([(0, 1)], 2)  # not hereditary
        assert norm(f, SparseVector({0: 1, 1: 2})) == 3
        assert norm(f, SparseVector({0: 1})) == 1

    @given(vectors, vectors, st.sampled_from(HEREDITARY_SAMPLES))
    @settings(max_examples=120)
    def test_norm_axioms_exact(self, x, y, fam):
        c = Fraction(-3, 2)
        assert norm(fam, x.scale(c)) == abs(c) * norm(fam, x)
        assert norm(fam, x + y) <= norm(fam, x) + norm(fam, y)

    @given(vectors, st.sampled_from(HEREDITARY_SAMPLES),
           st.frozensets(st.integers(0, 5)))
    @settings(max_examples=120)
    def test_unconditionality(self, x, fam, flips):
        assert norm(fam, x.flip_signs(flips)) == norm(fam, x)

    @given(vectors)
    @settings(max_examples=60)
    def test_monotone_in_the_family(self, x):
        small = closure_of((0, 1), (2, 3))
        big = closure_of((0, 1, 2), (2, 3), (4,))
        assert set(small.members) <= set(big.members)
        assert norm(small, x) <= norm(big, x)

    @given(vectors, st.sampled_from(HEREDITARY_SAMPLES))
    @settings(max_examples=80)
    def test_trace_reduction(self, x, fam):
        from combfam import trace
        assert norm(trace(fam, x.support), x) == norm(fam, x)


class TestFunctionals:
    def test_apply_examples(self):
        assert functional_apply(SignedFunctional((0,), (1,)),
                                SparseVector({0: 5})) == 5
        assert functional_apply(SignedFunctional((0, 1), (1, -1)),
                                SparseVector({0: 2, 1: 3})) == -1
        assert functional_apply(SignedFunctional((3,), (1,)),
                                SparseVector({0: 2})) == 0

    def test_format(self):
        assert format_functional(SignedFunctional((0, 2), (1, -1))) == "+0 -2"
        assert format_functional(SignedFunctional((), ())) == "0"

    def test_bad_signs(self):
        with pytest.raises(ValueError):
            SignedFunctional((0,), (2,))


class TestExtremePoints:
    def test_singleton_family(self):
        assert len(extreme_points(cube(1).truncate(3))) == 6

    def test_pairs_window_3(self):
        assert len(extreme_points(cube(2).truncate(3))) == 12

    def test_two_singletons(self):
        assert len(extreme_points(cube(1).truncate(2))) == 4

    def test_count_formula(self):
        for fam in HEREDITARY_SAMPLES:
            from combfam import maximal_elements
            expected = sum(2 ** len(s) for s in maximal_elements(fam).members)
            assert len(extreme_points(fam)) == expected

    def test_rejects_non_hereditary(self):
        with pytest.raises(ValueError):
            extreme_points(ExplicitFamily([(0, 1)], 2))


class TestBruteVertexOracle:
    def test_cross_polytope_vertex(self):
        f = cube(1).truncate(2)
        assert is_extreme_brute(f, SignedFunctional((0,), (1,)))

    def test_non_maximal_support_decomposes(self):
        f = cube(2).truncate(3)
        assert not is_extreme_brute(f, SignedFunctional((0,), (1,)))

    def test_lone_member(self):
        f = ExplicitFamily([(), (0,)], 2)
        assert is_extreme_brute(f, SignedFunctional((0,), (1,)))

    def test_requires_member_support(self):
        with pytest.raises(ValueError):
            is_extreme_brute(cube(1).truncate(2), SignedFunctional((0, 1), (1, 1)))

    def test_oracle_agrees_with_enumeration(self):
        for fam in HEREDITARY_SAMPLES:
            if fam.window > 4:
                continue
            expected = set(extreme_points(fam))
            got = {f for f in candidate_functionals(fam)
                   if is_extreme_brute(fam, f)}
            assert got == expected


class TestNormingCheck:
    def test_examples(self):
        f = cube(2).truncate(3)
        assert norming_check(f, [SparseVector({0: 1, 1: 1, 2: 1})])
        g = closure_of((0, 1), window=2)
        assert norming_check(g, [SparseVector({0: 1, 1: -2})])

    @given(st.lists(vectors, max_size=4), st.sampled_from(HEREDITARY_SAMPLES))
    @settings(max_examples=60)
    def test_norming_holds_on_samples(self, xs, fam):
        assert norming_check(fam, xs)


class TestOperators:
    def test_identity(self):
        op = SignedPermutationOperator(Permutation.identity(3))
        x = SparseVector({0: 2, 2: -1})
        assert apply_operator(op, x) == x

    def test_sign_flip(self):
        op = SignedPermutationOperator(Permutation.identity(1), {0: -1})
        assert apply_operator(op, SparseVector({0: 2})) == SparseVector({0: -2})

    def test_swap(self):
        op = SignedPermutationOperator(Permutation.from_mapping({0: 1, 1: 0}))
        assert apply_operator(op, SparseVector({0: 2, 1: 3})) == \
            SparseVector({0: 3, 1: 2})

    def test_bad_sign_window(self):
        with pytest.raises(ValueError):
            SignedPermutationOperator(Permutation.identity(2), {5: -1})


class TestIsometry:
    def test_identity_on_equal_families(self):
        f = cube(2).truncate(4)
        op = SignedPermutationOperator(Permutation.identity(4))
        assert is_isometry(op, f, f) == (True, None)

    def test_missing_pair_witness(self):
        g = cube(2).truncate(3)
        f = ExplicitFamily([m for m in g.members if m != (1, 2)], 3)
        op = SignedPermutationOperator(Permutation.identity(3))
        ok, witness = is_isometry(op, f, g)
        assert not ok and witness == (1, 2)
        assert norm(f, indicator(witness)) == 1
        assert norm(g, indicator(witness)) == 2

    def test_quoted_permuted_pair(self):
        f, g = permuted_pair()
        tf, tg = f.truncate(6), g.truncate(6)
        pi = Permutation.from_mapping({1: 3, 2: 1, 3: 2}, 6)
        op = SignedPermutationOperator(pi)
        assert is_isometry(op, tf, tg) == (True, None)

    def test_window_mismatch_rejected(self):
        op = SignedPermutationOperator(Permutation.identity(4))
        with pytest.raises(ValueError):
            is_isometry(op, cube(1).truncate(3), cube(1).truncate(4))

    def test_norm_separation_on_hereditary_pairs(self):
        rng = random.Random(7)
        for _ in range(40):
            gens_f = [tuple(sorted(rng.sample(range(5), rng.randint(1, 3))))
                      for _ in range(3)]
            gens_g = [tuple(sorted(rng.sample(range(5), rng.randint(1, 3))))
                      for _ in range(3)]
            f = closure_of(*gens_f, window=5)
            g = closure_of(*gens_g, window=5)
            if f == g:
                continue
            diff = set(f.members) ^ set(g.members)
            assert any(norm(f, indicator(s)) != norm(g, indicator(s))
                       for s in diff)

    def test_exhaustive_indicator_agreement(self):
        # the exact criterion agrees with norm comparison over all signed
        # indicator vectors of window subsets
        rng = random.Random(11)
        window = 5
        for _ in range(25):
            f = closure_of(*[tuple(sorted(rng.sample(range(window), rng.randint(1, 3))))
                             for _ in range(3)], window=window)
            g = closure_of(*[tuple(sorted(rng.sample(range(window), rng.randint(1, 3))))
                             for _ in range(3)], window=window)
            table = rng.sample(range(window), window)
            op = SignedPermutationOperator(
                Permutation(table),
                {i: -1 for i in range(window) if rng.random() < 0.5})
            ok, _ = is_isometry(op, f, g)
            exhaustive = all(
                norm(g, apply_operator(op, indicator(s))) == norm(f, indicator(s))
                for k in range(window + 1)
                for s in itertools.combinations(range(window), k))
            assert ok == exhaustive
