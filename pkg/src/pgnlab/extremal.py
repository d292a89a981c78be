"""Integer 2x2 matrix recurrences and the approximation points x(v).

A setup packages a Fibonacci sequence of integer matrices W_{i+2} = W_{i+1}
W_i together with the pivot matrix M = [[m, 1], [-1, 0]].  Words over {a, b}
map to matrices through the monoid morphism phi(a) = W_1, phi(b) = W_0, and
every non-empty prefix v of the infinite Fibonacci word yields an integer
point x(v) = (x0, x1, x2): the first column of phi(v) M(v)^-1 completed by
the integer x2 closest to x1*xi.  The shipped example has m = 3, W_0 =
[[2,1],[1,1]], W_1 = [[7,-2],[4,-1]] and xi = [0; 1, 1, 2, 2, 1, 1, ...]
whose partial quotients continue as the Fibonacci word on the blocks (2,2)
and (1,1).

Everything is exact: xi only ever enters through certified rational
brackets obtained from pairs of continued-fraction convergents, refined
until every rounding or sign decision is unambiguous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import count
from typing import Iterator, Optional

from mpmath import mp

try:  # GMP-backed integers keep the deep recurrences fast; plain int works too
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    mpz = int

from .enclosure import Bracket, bracket_max, log_abs_bracket, log_fraction
from .fibword import (
    alpha_bar,
    fib,
    fib_index,
    is_fib,
    letter,
    v_contains,
    vbar_predecessor,
)


class M2:
    """A 2x2 integer (or rational) matrix; rows (a, b) and (c, d)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    def __mul__(self, o: "M2") -> "M2":
        return M2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __eq__(self, o) -> bool:
        return isinstance(o, M2) and (self.a, self.b, self.c, self.d) == (o.a, o.b, o.c, o.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        return f"M2({self.a}, {self.b}, {self.c}, {self.d})"

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def transpose(self) -> "M2":
        return M2(self.a, self.c, self.b, self.d)

    def inverse_unimodular(self) -> "M2":
        """Inverse, assuming det = +-1."""
        det = self.det()
        if det == 1:
            return M2(self.d, -self.b, -self.c, self.a)
        if det == -1:
            return M2(-self.d, self.b, self.c, -self.a)
        raise ValueError("matrix is not unimodular")

    def norm(self):
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def is_symmetric(self) -> bool:
        return self.b == self.c

    def tuple(self):
        return (self.a, self.b, self.c, self.d)


IDENTITY = M2(1, 0, 0, 1)
J = M2(0, 1, -1, 0)


def sigma(digits) -> M2:
    """Product of the continued-fraction digit matrices [[a,1],[1,0]]."""
    out = IDENTITY
    for a in digits:
        if a < 1:
            raise ValueError("digits must be positive integers")
        out = out * M2(mpz(a), mpz(1), mpz(1), mpz(0))
    return out


def _sigma_tree(digits: list[int]) -> M2:
    """Balanced product of digit matrices (fast for long digit lists)."""
    n = len(digits)
    if n == 0:
        return IDENTITY
    if n <= 8:
        return sigma(digits)
    mid = n // 2
    return _sigma_tree(digits[:mid]) * _sigma_tree(digits[mid:])


SymPoint = tuple  # (x0, x1, x2) identified with [[x0, x1], [x1, x2]]


def det_triple(p: SymPoint, q: SymPoint, r: SymPoint):
    """Exact determinant of the 3x3 matrix with rows p, q, r."""
    return (
        p[0] * (q[1] * r[2] - q[2] * r[1])
        - p[1] * (q[0] * r[2] - q[2] * r[0])
        + p[2] * (q[0] * r[1] - q[1] * r[0])
    )


@dataclass
class GrowthRate:
    rho: float
    error_bound: float
    source_index: int


class ExtremalSetup:
    """Matrix data (m, M, W0, W1) plus certified brackets for xi and xi^2."""

    def __init__(self, m: int, w0: M2, w1: M2, cf_digits=None, fast_bracket: bool = False):
        self.m = m
        self.M = M2(mpz(m), mpz(1), mpz(-1), mpz(0))
        self.Mt = self.M.transpose()
        self.M_inv = self.M.inverse_unimodular()
        self.Mt_inv = self.Mt.inverse_unimodular()
        self.W0 = M2(*(mpz(x) for x in w0.tuple()))
        self.W1 = M2(*(mpz(x) for x in w1.tuple()))
        self._cf_digits = cf_digits
        self._fast_bracket = fast_bracket
        self._W: list[M2] = [self.W0, self.W1]
        self._brackets: dict[int, Bracket] = {}
        self._rho: Optional[GrowthRate] = None
        self._xtilde_memo: dict[int, SymPoint] = {}
        self._x_memo: dict[int, SymPoint] = {}
        self._t: list = []
        self._d: list = []

    # -- the matrix Fibonacci sequence ------------------------------------

    def W(self, i: int) -> M2:
        if i < 0:
            raise ValueError("index must be >= 0")
        while len(self._W) <= i:
            self._W.append(self._W[-1] * self._W[-2])
        return self._W[i]

    def M_i(self, i: int) -> M2:
        return self.M if i % 2 == 0 else self.Mt

    def x_i(self, i: int) -> SymPoint:
        """The symmetric point of W_i M_i^-1 (asserts symmetry)."""
        got = self._x_memo.get(i)
        if got is None:
            inv = self.M_inv if i % 2 == 0 else self.Mt_inv
            b = self.W(i) * inv
            if not b.is_symmetric():
                raise AssertionError(f"W_{i} M_{i}^-1 is not symmetric")
            got = (b.a, b.b, b.d)
            self._x_memo[i] = got
        return got

    @property
    def theta0(self) -> int:
        # trace([[1, xi], [xi, xi^2]] * M) = m + xi - xi = m, exactly
        return self.m

    # -- traces and determinants ------------------------------------------

    def d_seq(self, n: int) -> list:
        """det(W_i) for i = 1..n via multiplicativity."""
        out = self._d
        if not out:
            out += [self.W1.det(), (self.W1 * self.W0).det()]
        while len(out) < n:
            out.append(out[-1] * out[-2])
        return out[:n]

    def t_seq(self, n: int) -> list:
        """trace(W_i) for i = 1..n via the three-term recurrence."""
        out = self._t
        if not out:
            w2 = self.W1 * self.W0
            out += [self.W1.trace(), w2.trace(), (w2 * self.W1).trace()]
        d = self.d_seq(max(n, 3))
        while len(out) < n:
            i = len(out)  # producing t_{i+1}, 1-based
            out.append(out[i - 2] * out[i - 1] - d[i - 2] * out[i - 3])
        return out[:n]

    def t(self, i: int):
        return self.t_seq(i)[i - 1]

    def d(self, i: int):
        return self.d_seq(i)[i - 1]

    # -- continued fraction digits and xi brackets ------------------------

    def cf_digits(self) -> Iterator[int]:
        if self._cf_digits is None:
            raise ValueError("this setup carries no digit stream")
        return self._cf_digits()

    def _convergent_pair(self, k: int) -> M2:
        """sigma of the first k digits: columns are consecutive convergents."""
        digs = []
        it = self.cf_digits()
        for _ in range(k):
            digs.append(next(it))
        return _sigma_tree(digs)

    def _bracket_from_matrix(self, c: M2) -> Bracket:
        # c = [[q_k, q_{k-1}], [p_k, p_{k-1}]]; xi is strictly between
        # p_k / q_k and the mediant (p_k + p_{k-1}) / (q_k + q_{k-1})
        lo = Fraction(c.c, c.a)
        hi = Fraction(c.c + c.d, c.a + c.b)
        if lo > hi:
            lo, hi = hi, lo
        return Bracket(lo, hi)

    def xi_bracket(self, bits: int) -> Bracket:
        """A rational bracket around xi of width at most 2^-bits."""
        if bits < 1:
            raise ValueError("precision must be positive")
        target = Fraction(1, 1 << bits)
        if self._bracket is not None and self._bracket.width <= target:
            return self._bracket
        if self._fast_bracket:
            # sigma(digits prefix of length 2 F_i + 2) equals phi(w_i) sigma(1,1),
            # so convergents double in quality along the W recurrence
            one = sigma((1, 1))
            i = 3
            while True:
                c = self.W(i) * one
                br = self._bracket_from_matrix(c)
                if br.width <= target:
                    break
                i += 1
        else:
            k = 8
            while True:
                br = self._bracket_from_matrix(self._convergent_pair(k))
                if br.width <= target:
                    break
                k *= 2
        self._bracket = br
        return br

    def xi_sq_bracket(self, bits: int) -> Bracket:
        return self.xi_bracket(bits).square()

    def xi_float(self) -> float:
        br = self.xi_bracket(64)
        return float((br.lo + br.hi) / 2)

    # -- growth rate -------------------------------------------------------

    def rho(self) -> float:
        if self._rho is None:
            self._rho = estimate_rho(self, 40)
        return self._rho.rho


def _example_digits() -> Iterator[int]:
    yield 1
    yield 1
    for n in count(0):
        d = 2 if letter(n) == "a" else 1
        yield d
        yield d


@lru_cache(maxsize=1)
def example_setup() -> ExtremalSetup:
    """The shipped setup: m = 3, xi = [0; 1, 1, 2, 2, 1, 1, 2, 2, 2, 2, ...]."""
    w0 = sigma((1, 1))
    w1 = sigma((1, 1)) * sigma((2, 2)) * sigma((1, 1)).inverse_unimodular()
    return ExtremalSetup(3, w0, w1, cf_digits=_example_digits, fast_bracket=True)


# ---------------------------------------------------------------------------
# the morphism phi and the points x(v)


def phi_word(setup: ExtremalSetup, word: str) -> M2:
    """phi on an arbitrary word over {a, b}, letter by letter."""
    out = IDENTITY
    for ch in word:
        out = out * (setup.W1 if ch == "a" else setup.W0)
    return out


def phi_prefix(setup: ExtremalSetup, n: int) -> M2:
    """phi on the prefix of length n, via the greedy Fibonacci splitting.

    prefix(F_i + r) = w_i prefix(r) whenever r < F_{i-1}, so the product
    reduces to O(log n) matrix multiplications.
    """
    out = IDENTITY
    while n > 0:
        if n == 1:
            return out * setup.W1
        i = 1
        while fib(i + 1) <= n:
            i += 1
        out = out * setup.W(i)
        n -= fib(i)
    return out


def m_of(setup: ExtremalSetup, n: int) -> M2:
    """M when the prefix of length n ends in b, its transpose when in a."""
    if n < 1:
        raise ValueError("empty word has no last letter")
    return setup.M if letter(n - 1) == "b" else setup.Mt


def _round_against_bracket(setup: ExtremalSetup, x1: int, bits: int = 128) -> int:
    """The unique integer x2 with |x1 xi - x2| < 1/2, certified."""
    half = Fraction(1, 2)
    while True:
        br = setup.xi_bracket(bits).scale(x1)
        mid = (br.lo + br.hi) / 2
        x2 = math.floor(mid + half)
        if x2 - half < br.lo and br.hi < x2 + half:
            return x2
        bits *= 2
        if bits > 1 << 24:
            raise AssertionError("rounding did not stabilise")


def x_of(setup: ExtremalSetup, n: int) -> SymPoint:
    """The integer point attached to the prefix of length n >= 1."""
    if n < 1:
        raise ValueError("x(v) requires a non-empty prefix")
    minv = setup.M_inv if letter(n - 1) == "b" else setup.Mt_inv
    b = phi_prefix(setup, n) * minv
    x0, x1 = b.a, b.c  # first column
    bits = max(128, 2 * x1.bit_length() + 16)
    return (x0, x1, _round_against_bracket(setup, x1, bits))


def xtilde(setup: ExtremalSetup, n: int) -> SymPoint:
    """The recursively built point for a prefix length n in V_4.

    Fibonacci lengths map to the base points; otherwise, with l the index
    of alpha(v) and u < v < w the consecutive level-l elements ending at w,
    the gap F_i (i in {l-2, l-1}) drives x~(w) = t_i x~(v) -+ d_i x~(u),
    the sign being minus exactly when u and v end in the same letter.
    """
    memo = setup._xtilde_memo
    got = memo.get(n)
    if got is not None:
        return got
    if not v_contains(4, n):
        raise ValueError(f"length {n} is not in V_4")
    if is_fib(n):
        out = setup.x_i(fib_index(n))
    else:
        lvl = fib_index(alpha_bar(n))
        v = vbar_predecessor(lvl, n)
        u = vbar_predecessor(lvl, v)
        i = fib_index(n - v)
        if i not in (lvl - 2, lvl - 1) or n - v != v - u:
            raise AssertionError(f"unexpected gap structure at {n}")
        t_i = setup.t_seq(i)[i - 1]
        d_i = setup.d_seq(i)[i - 1]
        xv = xtilde(setup, v)
        xu = xtilde(setup, u)
        sgn = -1 if letter(u - 1) == letter(v - 1) else 1
        out = tuple(t_i * xv[k] + sgn * d_i * xu[k] for k in range(3))
    memo[n] = out
    return out


# ---------------------------------------------------------------------------
# certified residuals and trajectories


def residuals(setup: ExtremalSetup, n: int, bits: int = 128) -> tuple[Bracket, Bracket, Bracket]:
    """Certified brackets of (x0, x0 xi - x1, x0 xi^2 - x2) for the prefix of length n."""
    x0, x1, x2 = x_of(setup, n)
    need = bits + 2 * max(1, abs(x0)).bit_length() + 8
    b1 = setup.xi_bracket(need).scale(x0).shift(-x1)
    b2 = setup.xi_sq_bracket(need).scale(x0).shift(-x2)
    return (Bracket(Fraction(x0), Fraction(x0)), b1, b2)


def trajectory(setup: ExtremalSetup, x: SymPoint, q1, q2, bits: int = 128) -> tuple[float, float]:
    """Enclosure of L_x(q) = max(log|x0|, q1 + log|x0 xi - x1|, q2 + log|x0 xi^2 - x2|).

    Terms whose residual is exactly zero are omitted from the maximum; for
    x0 != 0 the xi-residuals are never zero, and the bracket is refined
    until their sign is determined.
    """
    x0, x1, x2 = x
    if x == (0, 0, 0):
        raise ValueError("trajectory of the zero point")
    q1 = float(q1) if not isinstance(q1, (int, Fraction)) else q1
    q2 = float(q2) if not isinstance(q2, (int, Fraction)) else q2
    terms = []
    if x0 != 0:
        lg = log_fraction(Fraction(abs(x0)), bits)
        terms.append((lg, lg))
        need = bits + 2 * abs(x0).bit_length() + 8
        while True:
            b1 = setup.xi_bracket(need).scale(x0).shift(-x1)
            b2 = setup.xi_sq_bracket(need).scale(x0).shift(-x2)
            if not (b1.lo <= 0 <= b1.hi) and not (b2.lo <= 0 <= b2.hi):
                break
            need *= 2
        lo, hi = log_abs_bracket(b1, bits + 16)
        terms.append((q1 + lo, q1 + hi))
        lo, hi = log_abs_bracket(b2, bits + 16)
        terms.append((q2 + lo, q2 + hi))
    else:
        if x1 != 0:
            lg = log_fraction(Fraction(abs(x1)), bits)
            terms.append((q1 + lg, q1 + lg))
        if x2 != 0:
            lg = log_fraction(Fraction(abs(x2)), bits)
            terms.append((q2 + lg, q2 + lg))
    lo, hi = bracket_max(terms)
    return (float(lo), float(hi))


# ---------------------------------------------------------------------------
# growth rate of the traces


def estimate_rho(setup: ExtremalSetup, n: int, prec: int = 300) -> GrowthRate:
    """rho with log|t_i| = rho F_i + O(gamma^-i), from the trace sequence.

    Exact traces are used up to a cutoff; beyond it log|t_{i+1}| =
    log|t_i| + log|t_{i-1}| up to a correction smaller than
    exp(-2 rho F_{i-1}), which is far below the working precision, so the
    additive recurrence is exact for all reported digits.  The error bound
    comes from fitting the Cauchy rate |rho_i - rho_{i+1}| <= C gamma^-2i.
    """
    if n < 10:
        raise ValueError("need at least 10 terms")
    cutoff = min(n, 24)
    ts = setup.t_seq(cutoff)
    if any(t == 0 for t in ts[3:]):
        raise ArithmeticError("vanishing trace in the recurrence range")
    with mp.workprec(prec):
        logs = [mp.log(abs(mp.mpf(t))) for t in ts]
        while len(logs) < n:
            logs.append(logs[-1] + logs[-2])
        rhos = [logs[i - 1] / fib(i) for i in range(1, n + 1)]
        gamma = (1 + mp.sqrt(5)) / 2
        tail = range(max(6, n - 12), n - 1)
        c_fit = max(abs(rhos[i + 1] - rhos[i]) * gamma ** (2 * (i + 1)) for i in tail)
        err = c_fit * gamma ** (-2 * n) / (1 - gamma ** -2)
        return GrowthRate(float(rhos[n - 1]), float(err), n)
