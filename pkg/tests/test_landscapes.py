import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynmono.core import BitString, RandomSource, dominates
from dynmono.landscapes import (MONOTONE_KINDS, Landscape, format_landscape, make_evaluator, parse_landscape,
                                poea_select)

B = BitString.from_str


def cube(n):
    return [BitString(v, n) for v in range(2**n)]


def strictly_dominates(a, b):
    return a != b and dominates(a, b)


def weighted_sum(x: BitString, weight_of_position):
    return sum(weight_of_position[i] * bit for i, bit in enumerate(x.bits))


def adbv_weights(parent: BitString, favour_zeros=True):
    """Explicit 2^rank weights: the favoured group on top, BinVal order inside each group."""
    n = parent.n
    favoured = [i for i in range(n) if parent[i] == (0 if favour_zeros else 1)]
    rest = [i for i in range(n) if i not in favoured]
    order = favoured + rest  # descending weight
    return {pos: 2 ** (n - 1 - rank) for rank, pos in enumerate(order)}


class TestExamples:
    def test_adbv_prefers_flipped_zero(self):
        ev = make_evaluator(Landscape("adbv"), B("10"))
        assert ev.eval(B("01")) > ev.eval(B("10"))

    def test_fdbv_rejects_non_dominating(self):
        ev = make_evaluator(Landscape("fdbv"), B("10"))
        assert ev.eval(B("01")) < ev.eval(B("10"))
        assert not ev.accepts(B("01").value)

    def test_onemax_order(self):
        ev = make_evaluator(Landscape("onemax"), B("00"))
        k = {s: ev.eval(B(s)) for s in ["00", "01", "10", "11"]}
        assert k["00"] < k["01"] == k["10"] < k["11"]

    @pytest.mark.parametrize("n", [2, 9, 100, 500])
    def test_binval_leading_bit_outweighs_the_rest(self, n):
        ev = make_evaluator(Landscape("binval"), BitString(0, n))
        assert ev.eval(B("1" + "0" * (n - 1))) > ev.eval(B("0" + "1" * (n - 1)))

    def test_eval_length_check(self):
        ev = make_evaluator(Landscape("onemax"), B("00"))
        with pytest.raises(ValueError):
            ev.eval(B("000"))

    @pytest.mark.parametrize("cutoff,expected", [(Fraction(9, 2), "0.23572"), (Fraction(7, 2), "0.24664")])
    def test_sdbv_drift_at_four_zeros_by_mask_enumeration(self, cutoff, expected):
        # every flip mask of n=9 with exact probability, acceptance from the evaluator
        n, p = 9, Fraction(1, 9)
        parent = B("000011111")
        ev = make_evaluator(Landscape("sdbv", cutoff=cutoff), parent)
        total = Fraction(0)
        for m in range(2**n):
            k = m.bit_count()
            y = parent.value ^ m
            if ev.accepts(y):
                total += p**k * (1 - p) ** (n - k) * (y.bit_count() - parent.ones())
        assert f"{float(total):.5f}" == expected

    def test_sdbv_regime_at_four_zeros(self):
        parent = B("000011111")
        lo = make_evaluator(Landscape("sdbv", cutoff=Fraction(9, 2)), parent)
        hi = make_evaluator(Landscape("sdbv", cutoff=Fraction(7, 2)), parent)
        assert type(lo).__name__ == "AdversarialEvaluator"
        assert type(hi).__name__ == "FriendlyEvaluator"


class TestWeightedSumIsomorphism:
    @pytest.mark.parametrize("n", range(1, 6))
    @pytest.mark.parametrize("kind,favour_zeros", [("adbv", True), ("fdbv", False)])
    def test_keys_compare_like_weighted_sums(self, n, kind, favour_zeros):
        for parent in cube(n):
            ev = make_evaluator(Landscape(kind), parent)
            w = adbv_weights(parent, favour_zeros)
            pts = cube(n)
            for a, b in itertools.product(pts, repeat=2):
                assert (ev.eval(a) < ev.eval(b)) == (weighted_sum(a, w) < weighted_sum(b, w))

    @pytest.mark.parametrize("n", range(1, 6))
    def test_binval_keys_are_base_two(self, n):
        ev = make_evaluator(Landscape("binval"), BitString(0, n))
        w = {i: 2 ** (n - 1 - i) for i in range(n)}
        for a in cube(n):
            assert ev.eval(a) == weighted_sum(a, w)

    @pytest.mark.parametrize("n", range(2, 5))
    def test_acceptance_independent_of_admissible_weight_choice(self, n):
        # any permutation putting parent zeros on the top weights gives the same accepted set
        for parent in cube(n):
            zero_pos = [i for i in range(n) if parent[i] == 0]
            accepted_by_ev = {y for y in cube(n) if make_evaluator(Landscape("adbv"), parent).accepts(y.value)}
            for perm in itertools.permutations(range(n)):
                if set(perm[: len(zero_pos)]) != set(zero_pos):
                    continue
                w = {pos: 2 ** (n - 1 - r) for r, pos in enumerate(perm)}
                fx = weighted_sum(parent, w)
                assert {y for y in cube(n) if weighted_sum(y, w) >= fx} == accepted_by_ev


class TestMonotoneConsistency:
    @pytest.mark.parametrize("n", range(1, 6))
    @pytest.mark.parametrize("kind", sorted(MONOTONE_KINDS))
    def test_exhaustive(self, n, kind):
        rng = RandomSource(n)
        ls = parse_landscape(kind)
        for parent in cube(n):
            ev = make_evaluator(ls, parent, rng)
            for a, b in itertools.product(cube(n), repeat=2):
                if strictly_dominates(a, b):
                    assert ev.eval(a) > ev.eval(b)

    @given(st.integers(6, 60), st.data())
    @settings(max_examples=60, deadline=None)
    def test_randomized(self, n, data):
        kind = data.draw(st.sampled_from(sorted(MONOTONE_KINDS)))
        rng = RandomSource(data.draw(st.integers(0, 10**6)))
        parent = BitString(data.draw(st.integers(0, 2**n - 1)), n)
        b = data.draw(st.integers(0, 2**n - 1))
        a = b | data.draw(st.integers(1, 2**n - 1))
        ev = make_evaluator(parse_landscape(kind), parent, rng)
        if a != b:
            assert ev.key(a) > ev.key(b)


class TestAcceptanceCharacterizations:
    @pytest.mark.parametrize("n", range(1, 6))
    def test_adbv(self, n):
        for x in cube(n):
            ev = make_evaluator(Landscape("adbv"), x)
            for y in cube(n):
                flips_a_zero = y.value & ~x.value != 0
                want = flips_a_zero or y == x
                assert (ev.eval(y) >= ev.eval(x)) == want == (not strictly_dominates(x, y))
                assert ev.accepts(y.value) == want

    @pytest.mark.parametrize("n", range(1, 6))
    def test_fdbv(self, n):
        for x in cube(n):
            ev = make_evaluator(Landscape("fdbv"), x)
            for y in cube(n):
                assert (ev.eval(y) >= ev.eval(x)) == dominates(y, x) == ev.accepts(y.value)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_sdbv_dispatch(self, n):
        half = Fraction(n, 2)
        for c in [half, half - 1, half - 2]:
            if c < 0:
                continue
            ls = Landscape("sdbv", cutoff=c)
            for x in cube(n):
                ev = make_evaluator(ls, x)
                ref = make_evaluator(Landscape("adbv" if x.zeros() < c else "fdbv"), x)
                for y in cube(n):
                    assert ev.accepts(y.value) == ref.accepts(y.value)
                    assert ev.eval(y) == ref.eval(y)

    def test_cutoff_compared_exactly(self):
        x = B("000011111")
        assert make_evaluator(Landscape("sdbv", cutoff=4), x).accepts(B("000011110").value) is False
        assert make_evaluator(Landscape("sdbv", cutoff=Fraction(9, 2)), x).accepts(B("100011110").value)

    @pytest.mark.parametrize("n", range(1, 6))
    @pytest.mark.parametrize("kind", sorted(MONOTONE_KINDS))
    def test_accepts_matches_key_comparison(self, n, kind):
        ls = parse_landscape(kind)
        for x in cube(n):
            ev = make_evaluator(ls, x, RandomSource(x.value))
            for y in cube(n):
                assert ev.accepts(y.value) == (ev.eval(y) >= ev.eval(x))


class TestDynamicKinds:
    def test_dbv_top_weight_position_uniform(self):
        n, samples = 10, 50_000
        rng = RandomSource(3)
        parent = B("0110100110")
        top = np.bincount([make_evaluator(Landscape("dbv"), parent, rng).order[0] for _ in range(samples)],
                          minlength=n)
        expected = samples / n
        chi2 = ((top - expected) ** 2 / expected).sum()
        # 99.9% quantile of chi2 with 9 degrees of freedom
        assert chi2 < 27.88

    def test_dbv_key_is_permuted_binval(self):
        rng = RandomSource(0)
        n = 6
        ev = make_evaluator(Landscape("dbv"), BitString(0, n), rng)
        w = {int(pos): 2 ** (n - 1 - r) for r, pos in enumerate(ev.order)}
        for a, b in itertools.product(cube(n), repeat=2):
            assert (ev.eval(a) < ev.eval(b)) == (weighted_sum(a, w) < weighted_sum(b, w))

    def test_dbv_fresh_each_generation(self):
        rng = RandomSource(1)
        orders = {tuple(make_evaluator(Landscape("dbv"), B("0000000"), rng).order) for _ in range(20)}
        assert len(orders) > 1

    def test_noisy_linear_weights_in_range(self):
        rng = RandomSource(2)
        n = 7
        seen = set()
        for _ in range(500):
            w = make_evaluator(Landscape("noisy-linear"), BitString(0, n), rng).weights
            assert w.min() >= 1 and w.max() <= n
            seen.update(w.tolist())
        assert seen == set(range(1, n + 1))

    def test_noisy_linear_key_is_weighted_sum(self):
        n = 5
        ev = make_evaluator(Landscape("noisy-linear"), BitString(0, n), RandomSource(9))
        for a in cube(n):
            assert ev.eval(a) == sum(int(w) * b for w, b in zip(ev.weights, a.bits))


class TestPOEA:
    def test_examples(self):
        rng = RandomSource(0)
        assert poea_select(B("10"), B("11"), 1.0, rng) == B("11")
        assert poea_select(B("110"), B("100"), 1.0, rng) == B("110")
        assert poea_select(B("101"), B("010"), 1.0, rng) == B("010")

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            poea_select(B("10"), B("100"), 1.0, RandomSource(0))

    @pytest.mark.parametrize("n", range(1, 6))
    def test_pessimistic_never_keeps_more_ones(self, n):
        rng = RandomSource(0)
        for x, y in itertools.product(cube(n), repeat=2):
            if dominates(x, y) or dominates(y, x):
                continue
            chosen = poea_select(x, y, 1.0, rng)
            assert chosen.ones() == min(x.ones(), y.ones())
            if x.ones() == y.ones():
                assert chosen == y

    @pytest.mark.parametrize("n", range(1, 6))
    def test_optimistic_keeps_more_ones(self, n):
        rng = RandomSource(0)
        for x, y in itertools.product(cube(n), repeat=2):
            if not (dominates(x, y) or dominates(y, x)):
                chosen = poea_select(x, y, 0.0, rng)
                assert chosen.ones() == max(x.ones(), y.ones())
                if x.ones() == y.ones():
                    assert chosen == y

    @pytest.mark.parametrize("q", [0.0, 0.3, 1.0])
    def test_evaluator_reproduces_select(self, q):
        n = 4
        ls = Landscape("poea", q=q)
        for x, y in itertools.product(cube(n), repeat=2):
            seed = x.value * 16 + y.value
            ev = make_evaluator(ls, x, RandomSource(seed))
            want = poea_select(x, y, q, RandomSource(seed))
            got = y if (y == x or ev.accepts(y.value)) else x
            assert got == want

    def test_pessimism_frequency(self):
        rng = RandomSource(5)
        x, y = B("1100"), B("0111")
        samples = 40_000
        kept_fewer = sum(poea_select(x, y, 0.3, rng) == x for _ in range(samples))
        sigma = (0.3 * 0.7 / samples) ** 0.5
        assert abs(kept_fewer / samples - 0.3) < 4 * sigma

    @pytest.mark.parametrize("n", range(1, 6))
    def test_minus_variant_keeps_parent_on_ties(self, n):
        ls = parse_landscape("poea-minus")
        for x, y in itertools.product(cube(n), repeat=2):
            ev = make_evaluator(ls, x, RandomSource(0))
            if x == y:
                assert ev.accepts(y.value)
            elif dominates(y, x):
                assert ev.accepts(y.value)
            elif dominates(x, y):
                assert not ev.accepts(y.value)
            else:
                assert ev.accepts(y.value) == (y.ones() < x.ones())

    def test_not_monotone(self):
        assert not Landscape("poea").monotone
        ev = make_evaluator(Landscape("poea"), B("1100"), RandomSource(0))
        # both incomparable to the parent: the dominating point ranks lower
        assert dominates(B("0111"), B("0011"))
        assert ev.eval(B("0111")) < ev.eval(B("0011"))


class TestSelectors:
    @pytest.mark.parametrize("text", ["onemax", "binval", "dbv", "noisy-linear", "adbv", "fdbv", "sdbv",
                                      "sdbv:cutoff=3.5", "sdbv:cutoff=1/3", "poea", "poea:q=0.5",
                                      "poea-minus"])
    def test_roundtrip(self, text):
        ls = parse_landscape(text)
        assert parse_landscape(format_landscape(ls)) == ls

    def test_parsed_values(self):
        assert parse_landscape("sdbv:cutoff=3.5").cutoff == Fraction(7, 2)
        assert parse_landscape("SDBV").cutoff is None
        assert parse_landscape("poea:q=0.25").q == 0.25
        assert parse_landscape("poea-minus").parent_wins_ties

    @pytest.mark.parametrize("bad", ["bogus", "sdbv:q=1", "poea:cutoff=2", "onemax:x=1", "sdbv:cutoff",
                                     "poea:q=2", "sdbv:cutoff=-1", "poea-minus:q=1"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_landscape(bad)

    def test_cutoff_above_n(self):
        with pytest.raises(ValueError):
            Landscape("sdbv", cutoff=10).resolved_cutoff(9)
