"""Exact combinatorics of the infinite Fibonacci word.

The infinite word w = abaababaabaab... is the limit of w_1 = a, w_2 = ab,
w_{i+2} = w_{i+1} w_i.  A prefix of w is canonically identified with its
length, so most maps here act on non-negative integers:

* ``iota_bar`` / ``alpha_bar`` -- the contraction on lengths and its iterated
  fixed point (always a Fibonacci number),
* ``vbar_elements`` -- the level sets  V_l = {x : alpha_bar(x) >= F_l},
  generated either by a brute membership filter or by the gap structure
  (the gap sequence of V_l is itself a Fibonacci word on two blocks),
* ``theta`` -- the substitution a -> ab, b -> a.

Words are materialised as plain strings only for display and for the
word-level cross-checks; the letter at any position comes from the
Fibonacci-numeration (Zeckendorf) counting rule, so no long prefix is
ever stored.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import count, islice
from typing import Iterator

_FIBS = [0, 1, 1]  # _FIBS[i + 1] == F_i, with F_-1 = 0, F_0 = F_1 = 1


def fib(i: int) -> int:
    """F_i for i >= -1, with F_-1 = 0, F_0 = 1 and F_{i+2} = F_{i+1} + F_i."""
    if i < -1:
        raise ValueError(f"Fibonacci index must be >= -1, got {i}")
    while len(_FIBS) <= i + 1:
        _FIBS.append(_FIBS[-1] + _FIBS[-2])
    return _FIBS[i + 1]


def is_fib(x: int) -> bool:
    if x < 0:
        return False
    i = -1
    while fib(i) < x:
        i += 1
    return fib(i) == x


def fib_index(x: int) -> int:
    """Index i >= 1 with F_i == x (i = -1 for x = 0).  1 maps to index 1."""
    if x == 0:
        return -1
    if x == 1:
        return 1
    i = 2
    while fib(i) < x:
        i += 1
    if fib(i) != x:
        raise ValueError(f"{x} is not a Fibonacci number")
    return i


def fib_interval(x: int) -> int:
    """The index i with F_i < x < F_{i+1}; requires x not Fibonacci."""
    i = 2
    while fib(i + 1) <= x:
        i += 1
    if fib(i) >= x:
        raise ValueError(f"{x} is a Fibonacci number")
    return i


def a_count(n: int) -> int:
    """Number of letters 'a' among the first n letters of the infinite word.

    Equals floor((n+1)(sqrt(5)-1)/2); evaluated with integer square roots.
    """
    if n < 0:
        raise ValueError("length must be >= 0")
    m = n + 1
    return (math.isqrt(5 * m * m) - m) // 2


def letter(p: int) -> str:
    """Letter at 0-indexed position p of the infinite word."""
    return "a" if a_count(p + 1) - a_count(p) == 1 else "b"


def prefix_str(n: int) -> str:
    """The first n letters, as a string (O(n); for display and word tests)."""
    return "".join(letter(p) for p in range(n))


def w_str(i: int) -> str:
    """The finite Fibonacci word w_i (w_1 = a, w_2 = ab, ...)."""
    if i < 1:
        raise ValueError("word index must be >= 1")
    return prefix_str(fib(i))


class PrefixWord:
    """A prefix of the infinite Fibonacci word, stored by its length."""

    __slots__ = ("n",)

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("prefix length must be >= 0")
        self.n = n

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, PrefixWord) and self.n == other.n

    def __lt__(self, other: "PrefixWord") -> bool:
        return self.n < other.n

    def __le__(self, other: "PrefixWord") -> bool:
        return self.n <= other.n

    def __hash__(self) -> int:
        return hash(("PrefixWord", self.n))

    def __repr__(self) -> str:
        return f"PrefixWord({self.n})"

    def __str__(self) -> str:
        return prefix_str(self.n)

    @property
    def text(self) -> str:
        return prefix_str(self.n)

    def letters(self) -> Iterator[str]:
        return (letter(p) for p in range(self.n))

    @property
    def last(self) -> str:
        if self.n == 0:
            raise ValueError("empty word has no last letter")
        return letter(self.n - 1)


def prefix(n: int) -> PrefixWord:
    return PrefixWord(n)


# ---------------------------------------------------------------------------
# the contraction on lengths and its fixed point


def iota_bar(x: int) -> int:
    """x itself if x is Fibonacci, else x - 2 F_{i-2} where F_i < x < F_{i+1}."""
    if x < 0:
        raise ValueError("argument must be >= 0")
    if is_fib(x):
        return x
    i = fib_interval(x)
    return x - 2 * fib(i - 2)


@lru_cache(maxsize=None)
def alpha_bar(x: int) -> int:
    """Eventual fixed point of iterated iota_bar; a Fibonacci number."""
    y = iota_bar(x)
    return x if y == x else alpha_bar(y)


def alpha_bar_table(limit: int) -> list[int]:
    """alpha_bar on 0..limit as a list, filled left to right in O(limit)."""
    tab = [0] * (limit + 1)
    for x in range(limit + 1):
        tab[x] = x if is_fib(x) else tab[iota_bar(x)]
    return tab


def iota(v: PrefixWord) -> PrefixWord:
    return PrefixWord(iota_bar(v.n))


def alpha(v: PrefixWord) -> PrefixWord:
    return PrefixWord(alpha_bar(v.n))


def iota_by_cases(v: PrefixWord) -> str:
    """Word-level computation of iota on a non-Fibonacci prefix.

    For F_k < |v| < F_{k+1} with k >= 4 the image is built from the three
    explicit splittings of v (before / at / after the cut point
    w_k w_{k-2} minus a letter); the caller can compare the result with
    the length rule.  For k = 3 only the length rule applies.
    """
    n = v.n
    if is_fib(n):
        return prefix_str(n)
    k = fib_interval(n)
    if k < 4:
        return prefix_str(iota_bar(n))
    s = prefix_str(n)
    cut = fib(k) + fib(k - 2) - 1  # |w_k| + |w_{k-2}| - 1
    if n < cut:
        tail = s[fib(k):]
        return w_str(k - 3) + tail
    if n == cut:
        return w_str(k - 1)[:-1]
    tail = s[fib(k) + fib(k - 2):]
    return w_str(k - 1) + tail


# ---------------------------------------------------------------------------
# level sets


def v_contains(level: int, x: int) -> bool:
    """Whether the prefix of length x lies in V_level."""
    if level < 1:
        raise ValueError("level must be >= 1")
    return alpha_bar(x) >= fib(level)


def vbar_elements(level: int) -> Iterator[int]:
    """Elements of V_level in increasing order (gap-structure fast path).

    For level >= 3 the consecutive differences form the infinite Fibonacci
    word on the blocks (F_{l-1}, F_{l-1}) and (F_{l-2}, F_{l-2}).
    """
    if level == 1:
        yield from count(1)
        return
    if level == 2:
        yield from count(2)
        return
    big, small = fib(level - 1), fib(level - 2)
    x = fib(level)
    yield x
    for n in count(0):
        g = big if letter(n) == "a" else small
        x += g
        yield x
        x += g
        yield x


def vbar_elements_filter(level: int) -> Iterator[int]:
    """Brute-force membership filter over the integers (test oracle)."""
    return (x for x in count(0) if v_contains(level, x))


def v_iter(level: int, limit: int) -> list[int]:
    """All x <= limit in V_level, ascending."""
    if level < 2:
        raise ValueError("level must be >= 2")
    out = []
    for x in vbar_elements(level):
        if x > limit:
            break
        out.append(x)
    return out


def vbar_successor(level: int, x: int) -> int:
    """Smallest element of V_level strictly greater than x."""
    y = x + 1
    while not v_contains(level, y):
        y += 1
    return y


def vbar_predecessor(level: int, x: int) -> int:
    """Largest element of V_level strictly smaller than x."""
    y = x - 1
    while y >= 0 and not v_contains(level, y):
        y -= 1
    if y < 0:
        raise ValueError(f"{x} has no predecessor in level {level}")
    return y


def gap_word(level: int, n: int) -> list[int]:
    """First n consecutive differences of V_level (level >= 3)."""
    if level < 3:
        raise ValueError("level must be >= 3")
    elems = list(islice(vbar_elements(level), n + 1))
    return [b - a for a, b in zip(elems, elems[1:])]


# ---------------------------------------------------------------------------
# the substitution theta and the swapped words


def theta_word(w: str) -> str:
    """a -> ab, b -> a, letter by letter."""
    return "".join("ab" if ch == "a" else "a" for ch in w)


def theta_len(n: int) -> int:
    """Length of the theta-image of the prefix of length n."""
    return n + a_count(n)


def theta(v):
    """theta on a PrefixWord (by length) or on a plain word (by letters)."""
    if isinstance(v, PrefixWord):
        return PrefixWord(theta_len(v.n))
    return theta_word(v)


def tilde(i: int) -> str:
    """w_i with its last two letters exchanged (defined for i >= 2)."""
    if i < 2:
        raise ValueError("tilde is defined for indices >= 2")
    s = w_str(i)
    return s[:-2] + s[-1] + s[-2]


def successor_suffixes(level: int) -> tuple[str, str, str, str]:
    """The four words that can separate consecutive elements of V_level, level >= 4."""
    return (w_str(level - 2), tilde(level - 2), w_str(level - 1), tilde(level - 1))


# ---------------------------------------------------------------------------
# triple classification


def classify_triple(level: int, x: int, y: int, z: int) -> str:
    """Classify a consecutive triple x < y < z of V_level.

    Returns 'all-in-next' when all three lie in V_{level+1}; otherwise one
    of 'i', 'ii', 'iii', 'iv' according to the pattern of alpha_bar values
    and gaps.  Exactly one case applies; inputs that are not consecutive
    raise ValueError.
    """
    if level < 2:
        raise ValueError("level must be >= 2")
    if not x < y < z:
        raise ValueError("need x < y < z")
    members = [t for t in range(x, z + 1) if v_contains(level, t)]
    if members != [x, y, z]:
        raise ValueError(f"({x},{y},{z}) are not consecutive in level {level}")

    fl, fl1, fl2 = fib(level), fib(level + 1), fib(level + 2)
    a, b, c = alpha_bar(x), alpha_bar(y), alpha_bar(z)
    if min(a, b, c) >= fl1:
        return "all-in-next"

    matches = []
    if a >= fl1 and b == fl and c >= fl1 and z - x == fl:
        matches.append("i")
    if a == fl and b >= fl1 and c == fl and y - x == z - y:
        matches.append("ii")
    if a == fl and b == fl1 and c >= fl2 and y - x == z - y == fib(level - 1):
        matches.append("iii")
    if a >= fl2 and b == fl1 and c == fl and y - x == z - y == fib(level - 1):
        matches.append("iv")
    if len(matches) != 1:
        raise AssertionError(
            f"triple ({x},{y},{z}) at level {level} matched cases {matches}"
        )
    return matches[0]
