import math
from itertools import islice

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgnlab import fibword as fw

GAMMA = (1 + math.sqrt(5)) / 2

# the two reference tables, frozen from the source material
MAIN_TABLE = [
    ("", "", ""),
    ("a", "a", "a"),
    ("ab", "ab", "ab"),
    ("aba", "aba", "aba"),
    ("abaa", "ab", "ab"),
    ("abaab", "abaab", "abaab"),
    ("abaaba", "ab", "ab"),
    ("abaabab", "aba", "aba"),
]
BAR_TABLE = {
    "x": list(range(14)),
    "iota": [0, 1, 2, 3, 2, 5, 2, 3, 8, 3, 4, 5, 6, 13],
    "alpha": [0, 1, 2, 3, 2, 5, 2, 3, 8, 3, 2, 5, 2, 13],
}


def test_fib_values():
    assert fw.fib(-1) == 0
    assert fw.fib(0) == 1
    assert fw.fib(6) == 13
    assert [fw.fib(i) for i in range(1, 11)] == [1, 2, 3, 5, 8, 13, 21, 34, 55, 89]


def test_fib_binet_crosscheck():
    for i in range(41):
        binet = (GAMMA ** (i + 1) - (-GAMMA) ** (-i - 1)) / math.sqrt(5)
        assert abs(binet - fw.fib(i)) < 1e-6 * max(1, fw.fib(i))


def test_prefixes():
    assert fw.prefix_str(0) == ""
    assert fw.prefix_str(5) == "abaab"
    assert fw.prefix_str(13) == "abaababaabaab"
    # every shorter prefix is a prefix of every longer one
    long = fw.prefix_str(200)
    for n in range(200):
        assert long.startswith(fw.prefix_str(n))


def test_word_recurrence():
    for i in range(1, 15):
        assert fw.w_str(i + 2) == fw.w_str(i + 1) + fw.w_str(i)


def test_bar_table_exact():
    assert [fw.iota_bar(x) for x in BAR_TABLE["x"]] == BAR_TABLE["iota"]
    assert [fw.alpha_bar(x) for x in BAR_TABLE["x"]] == BAR_TABLE["alpha"]


def test_main_table_exact():
    for n, (v, iv, av) in enumerate(MAIN_TABLE):
        p = fw.prefix(n)
        assert str(p) == v
        assert str(fw.iota(p)) == iv
        assert str(fw.alpha(p)) == av


@given(st.integers(min_value=0, max_value=10**4))
def test_bar_map_invariants(x):
    y = fw.iota_bar(x)
    assert y <= x
    assert (y == x) == fw.is_fib(x)
    assert fw.alpha_bar(y) == fw.alpha_bar(x)
    assert fw.is_fib(fw.alpha_bar(x))
    if x >= 2:
        assert fw.alpha_bar(x) >= 2


def test_alpha_bar_table_matches_pointwise():
    tab = fw.alpha_bar_table(3000)
    assert tab == [fw.alpha_bar(x) for x in range(3001)]


def test_iota_by_cases_matches_length_rule():
    for n in range(2000):
        assert fw.iota_by_cases(fw.prefix(n)) == fw.prefix_str(fw.iota_bar(n))


def test_v_iter_examples():
    assert fw.v_iter(3, 13) == [3, 5, 7, 8, 9, 11, 13]
    assert fw.v_iter(2, 5) == [2, 3, 4, 5]
    # frozen from the brute-force membership filter
    assert fw.v_iter(4, 21) == [5, 8, 11, 13, 15, 18, 21]


def test_first_seven_elements_pattern():
    # V_l up to F_{l+3} is the 7-element set built from Fibonacci sums
    for l in range(2, 10):
        F = fw.fib
        expect = [F(l), F(l + 1), F(l + 1) + F(l - 1), F(l + 2),
                  F(l + 2) + F(l - 2), F(l + 2) + F(l), F(l + 3)]
        assert fw.v_iter(l, F(l + 3)) == expect


def test_generator_matches_filter():
    for l in range(3, 9):
        gen = list(islice(fw.vbar_elements(l), 500))
        flt = list(islice(fw.vbar_elements_filter(l), 500))
        assert gen == flt


def test_gap_word_examples():
    assert fw.gap_word(3, 6) == [2, 2, 1, 1, 2, 2]
    assert fw.gap_word(4, 4) == [3, 3, 2, 2]
    assert fw.gap_word(5, 2) == [5, 5]


def test_gap_word_is_fib_word_on_blocks():
    for l in range(3, 9):
        gaps = fw.gap_word(l, 200)
        big, small = fw.fib(l - 1), fw.fib(l - 2)
        expect = []
        n = 0
        while len(expect) < 200:
            g = big if fw.letter(n) == "a" else small
            expect += [g, g]
            n += 1
        assert gaps == expect[:200]


def test_gap_progression_limits():
    # gaps lie in {F_{l-2}, F_{l-1}}; runs of the small gap have length <= 3
    # (no 4-term progression) and runs of the big gap length <= 5
    for l in range(3, 10):
        gaps = fw.gap_word(l, 499)
        big, small = fw.fib(l - 1), fw.fib(l - 2)
        assert set(gaps) <= {big, small}
        run, prev = 1, None
        for g in gaps:
            run = run + 1 if g == prev else 1
            prev = g
            if g == small:
                assert run <= 3
            else:
                assert run <= 5


def test_iota_bijection_between_fib_windows():
    # iota_bar maps V_l between ]F_k, F_{k+1}[ and ]F_{k-3}, F_{k-1}+F_{k-3}[
    # bijectively and preserves order
    for l in range(2, 10):
        for k in range(max(l, 4), l + 7):
            src = [x for x in range(fw.fib(k) + 1, fw.fib(k + 1))
                   if fw.v_contains(l, x)]
            dst = [x for x in range(fw.fib(k - 3) + 1, fw.fib(k - 1) + fw.fib(k - 3))
                   if fw.v_contains(l, x)]
            img = [fw.iota_bar(x) for x in src]
            assert img == dst
            assert img == sorted(img)


def test_consecutive_pair_properties():
    # consecutive x < y in V_l: not both in V_{l+2}, at least one in V_{l+1},
    # and |alpha(y) - alpha(x)| >= y - x
    for l in range(2, 10):
        elems = list(islice(fw.vbar_elements(l), 300))
        for x, y in zip(elems, elems[1:]):
            assert not (fw.v_contains(l + 2, x) and fw.v_contains(l + 2, y))
            assert fw.v_contains(l + 1, x) or fw.v_contains(l + 1, y)
            assert abs(fw.alpha_bar(y) - fw.alpha_bar(x)) >= y - x


def test_middle_membership_equivalence():
    # for l >= 3: y not in V_{l+1}  <=>  y - x != z - y; and then
    # z - x = alpha_bar(y) = F_l
    for l in range(3, 9):
        elems = list(islice(fw.vbar_elements(l), 500))
        for x, y, z in zip(elems, elems[1:], elems[2:]):
            out = not fw.v_contains(l + 1, y)
            assert out == (y - x != z - y)
            if out:
                assert z - x == fw.fib(l) == fw.alpha_bar(y)


def test_pair_skip_equivalence():
    # three equivalent descriptions of consecutive pairs of V_{l+1} that are
    # not consecutive in V_l
    for l in range(3, 8):
        up = list(islice(fw.vbar_elements(l + 1), 200))
        for x, z in zip(up, up[1:]):
            cond_i = not (fw.vbar_successor(l, x) == z)
            mids = [y for y in range(x + 1, z) if fw.v_contains(l, y)]
            cond_ii = len(mids) == 1 and not fw.v_contains(l + 1, mids[0]) \
                and fw.vbar_successor(l, x) == mids[0] if mids else False
            cond_iii = (z - x == fw.fib(l))
            assert cond_i == cond_iii
            if cond_i:
                assert cond_ii


def test_classify_triple_examples():
    assert fw.classify_triple(3, 3, 5, 7) == "ii"
    assert fw.classify_triple(3, 5, 7, 8) == "i"
    assert fw.classify_triple(3, 7, 8, 9) == "ii"
    with pytest.raises(ValueError):
        fw.classify_triple(3, 3, 5, 8)


def test_classify_triple_total():
    # exactly one tag applies to every consecutive triple
    for l in range(2, 9):
        elems = list(islice(fw.vbar_elements(l), 300))
        for x, y, z in zip(elems, elems[1:], elems[2:]):
            tag = fw.classify_triple(l, x, y, z)
            assert tag in {"i", "ii", "iii", "iv", "all-in-next"}


def test_theta_examples():
    assert fw.theta_word("ab") == "aba"
    assert fw.theta_word("ba") == "aab"
    assert fw.theta_word(fw.w_str(4)) == fw.w_str(5) == "abaababa"


def test_theta_sends_words_to_words():
    for i in range(1, 16):
        assert fw.theta_word(fw.w_str(i)) == fw.w_str(i + 1)
    for i in range(2, 16):
        assert fw.theta_word(fw.tilde(i)) == fw.tilde(i + 1)


def test_theta_len_matches_letterwise():
    for n in range(500):
        assert fw.theta_len(n) == len(fw.theta_word(fw.prefix_str(n)))


def test_theta_prefix_of_prefix():
    # theta of a prefix is again a prefix (checked letterwise)
    for n in range(300):
        assert fw.theta_word(fw.prefix_str(n)) == fw.prefix_str(fw.theta_len(n))


def test_theta_level_bijection():
    # theta maps the first 200 elements of V_l onto those of V_{l+1},
    # preserving order, for l = 4..8
    for l in range(4, 9):
        src = list(islice(fw.vbar_elements(l), 200))
        dst = list(islice(fw.vbar_elements(l + 1), 200))
        assert [fw.theta_len(x) for x in src] == dst


def test_theta_level3_counterexample():
    # v = w_6 w_4 minus its last letter: v is in V_3 but theta(v) is not
    v = fw.w_str(6) + fw.w_str(4)[:-1]
    assert v == fw.prefix_str(17)
    assert fw.alpha_bar(17) == fw.fib(3)
    assert fw.alpha_bar(fw.theta_len(17)) == fw.fib(2)


def test_alpha_theta_commute_on_v4():
    for x in range(501):
        if fw.v_contains(4, x):
            assert fw.alpha_bar(fw.theta_len(x)) == fw.theta_len(fw.alpha_bar(x))


def test_tilde_examples():
    assert fw.tilde(2) == "ba"
    assert fw.tilde(3) == "aab"
    # frozen from the letter-swap oracle
    assert fw.tilde(4) == "ababa"
    with pytest.raises(ValueError):
        fw.tilde(1)


def test_palindrome_and_tilde_recurrence():
    for i in range(2, 21):
        core = fw.w_str(i)[:-2]
        assert core == core[::-1]
        assert fw.w_str(i + 1) == fw.w_str(i - 1) + fw.tilde(i)


def test_alpha_of_clipped_words():
    # alpha of w_k minus a letter, w_{k+1} minus a letter, and
    # w_k w_{k-2} minus a letter always lands on ab or aba
    small = {fw.fib(2), fw.fib(3)}
    for k in range(3, 16):
        assert fw.alpha_bar(fw.fib(k) - 1) in small
        assert fw.alpha_bar(fw.fib(k + 1) - 1) in small
        assert fw.alpha_bar(fw.fib(k) + fw.fib(k - 2) - 1) in small


def test_successor_suffix():
    # consecutive u < v in V_l (l >= 4) differ by one of four explicit words
    for l in range(4, 9):
        allowed = set(fw.successor_suffixes(l))
        elems = list(islice(fw.vbar_elements(l), 120))
        for x, y in zip(elems, elems[1:]):
            suffix = "".join(fw.letter(p) for p in range(x, y))
            assert suffix in allowed


def test_theta_len_near_golden_ratio():
    # | |theta(v)| - gamma |v| | <= 2, checked exactly with integer squares:
    # for d = 2a - n >= 0,  a <= gamma n  <=>  d^2 <= 5 n^2
    for n in range(1, 10**4 + 1):
        t = fw.theta_len(n)
        lo = 2 * (t - 2) - n  # t - 2 <= gamma n
        assert lo < 0 or lo * lo <= 5 * n * n
        hi = 2 * (t + 2) - n  # gamma n <= t + 2
        assert hi >= 0 and hi * hi >= 5 * n * n


@settings(max_examples=200)
@given(st.integers(min_value=2, max_value=8), st.integers(min_value=0, max_value=3000))
def test_level_membership_consistency(l, x):
    assert fw.v_contains(l, x) == (fw.alpha_bar(x) >= fw.fib(l))
    if fw.v_contains(l + 1, x):
        assert fw.v_contains(l, x)
