"""
Exact recurrences and closed forms for gluing counts.

All arithmetic is on Python integers or :class:`fractions.Fraction`. Every
division that a formula claims to be exact goes through :func:`exact`, which
raises :class:`IntegralityError` if a remainder appears, so each evaluation is
also a check of the formula.

Notation follows the usual one for these counts:

* ``eps_one_face(g, N)`` -- gluings of one ``2N``-gon into genus ``g``;
* ``bicolored_one_face(g, N)`` -- same for a bicolored ``2N``-gon;
* ``eps(g, N, K)`` / ``B(g, N, K)`` -- ``K`` polygons with ``2N`` sides in total;
* ``eps_tilde(n, M)`` -- planar two-face gluings with ``n`` arcs, ``M`` of them
  in face 1.

Recursive sequences are memoised in a :class:`SequenceCache` and filled bottom
up, so large arguments never recurse deeply.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Optional, Union

Number = Union[int, Fraction]


class IntegralityError(ArithmeticError):
    """A division that must be exact left a remainder."""


def exact(value: Number, what: str = "value") -> int:
    """Return ``value`` as an int, or raise if it is not integral."""
    if isinstance(value, int):
        return value
    if value.denominator != 1:
        raise IntegralityError(f"{what} is not an integer: {value}")
    return value.numerator


def divide(num: int, den: int, what: str = "quotient") -> int:
    q, r = divmod(num, den)
    if r:
        raise IntegralityError(f"{what}: {num} is not divisible by {den}")
    return q


def pow4(e: int) -> Fraction:
    """``4**e`` for any integer ``e`` (negative exponents give fractions)."""
    return Fraction(4) ** e


def double_factorial_odd(n: int) -> int:
    """``(2n-1)!!``, the number of perfect matchings of ``2n`` points."""
    out = 1
    for k in range(1, 2 * n, 2):
        out *= k
    return out


def zero_region(g: int, edges: int, faces: int) -> bool:
    """True when no map exists because it would have no vertex."""
    return edges < faces + 2 * g - 1


# one-face counts -------------------------------------------------------------

class SequenceCache:
    """Memo tables for the recursive sequences, filled bottom up.

    Fills take a lock, so one cache may be shared between threads.
    """

    def __init__(self):
        self._lock = threading.RLock()
        self.one_face: dict[tuple[int, int], int] = {}
        self.one_face_bicolored: dict[tuple[int, int], int] = {}
        self.eps0_2: list[int] = [0, 1]
        self.B0_2: list[int] = [0, 0]
        self.eps_tilde: dict[tuple[int, int], int] = {}
        self.eps0_3: list[int] = [0, 0]
        self.eps1_2: list[int] = [0, 0, 0]
        self.D: dict[tuple[int, int], int] = {}

    def clear(self):
        with self._lock:
            self.__init__()

    # Harer-Zagier type recursions ------------------------------------------

    def _fill_one_face(self, table, g_max, n_max, step):
        with self._lock:
            for n in range(n_max + 1):
                for g in range(g_max + 1):
                    if (g, n) in table:
                        continue
                    if n == 0:
                        table[(g, n)] = 1 if g == 0 else 0
                        continue
                    prev = table[(g, n - 1)]
                    prev2 = table[(g - 1, n - 2)] if g >= 1 and n >= 2 else 0
                    table[(g, n)] = step(n, prev, prev2)

    def eps_one_face(self, g: int, n: int) -> int:
        if g < 0 or n < 0:
            raise ValueError(f"invalid arguments g={g}, N={n}")
        if (g, n) not in self.one_face:
            def step(n, prev, prev2):
                num = (2 * n - 1) * (2 * prev + (n - 1) * (2 * n - 3) * prev2)
                return divide(num, n + 1, f"eps_{g}({n}) recursion")
            self._fill_one_face(self.one_face, g, n, step)
        return self.one_face[(g, n)]

    def bicolored_one_face(self, g: int, n: int) -> int:
        if g < 0 or n < 0:
            raise ValueError(f"invalid arguments g={g}, N={n}")
        if (g, n) not in self.one_face_bicolored:
            def step(n, prev, prev2):
                num = 2 * (2 * n - 1) * prev + (n - 2) * (n - 1) ** 2 * prev2
                return divide(num, n + 1, f"B_{g}({n}) recursion")
            self._fill_one_face(self.one_face_bicolored, g, n, step)
        return self.one_face_bicolored[(g, n)]

    # two and three faces ---------------------------------------------------

    def rec_eps0_2(self, n: int) -> int:
        if n < 0:
            raise ValueError("N must be >= 0")
        with self._lock:
            t = self.eps0_2
            e0 = self.eps_one_face
            for m in range(len(t), n + 1):
                s = sum(e0(0, i) * t[m - i - 1] for i in range(m - 1))
                t.append(2 * s + m * (2 * m - 1) * e0(0, m - 1))
            return t[n]

    def rec_B0_2(self, n: int) -> int:
        if n < 0:
            raise ValueError("N must be >= 0")
        with self._lock:
            t = self.B0_2
            b0 = self.bicolored_one_face
            for m in range(len(t), n + 1):
                s = sum(b0(0, i) * t[m - i - 1] for i in range(m - 2))
                t.append(2 * s + divide(m * (m - 1), 2) * b0(0, m - 1))
            return t[n]

    def rec_eps_tilde(self, arcs: int, first: int) -> int:
        """Planar two-face gluings with ``arcs`` arcs and ``first`` of them in face 1."""
        if arcs < 1 or first < 1 or arcs % 2 or arcs < first + 1:
            return 0
        with self._lock:
            for n in range(2, arcs + 1, 2):
                for m in range(1, n):
                    if (n, m) not in self.eps_tilde:
                        self.eps_tilde[(n, m)] = self._eps_tilde_step(n, m)
            return self.eps_tilde[(arcs, first)]

    def _eps_tilde_step(self, n, m):
        if n == 2:
            # a 1-gon glued to a 1-gon
            return 1
        e0 = self.eps_one_face
        s = 0
        for i in range((m - 3) // 2 + 1):
            sub_n, sub_m = n - 2 * i - 2, m - 2 * i - 2
            if sub_n >= sub_m + 1 and sub_m >= 1:
                s += e0(0, i) * self.eps_tilde[(sub_n, sub_m)]
        return 2 * s + (n - m) * e0(0, n // 2 - 1)

    def rec_eps0_3(self, n: int) -> int:
        if n < 0:
            raise ValueError("N must be >= 0")
        with self._lock:
            t = self.eps0_3
            e0 = self.eps_one_face
            e02 = self.rec_eps0_2
            for m in range(len(t), n + 1):
                s = sum(e0(0, i) * t[m - i - 1] + e02(i) * e02(m - i - 1) for i in range(m - 1))
                s1 = sum((i + 1) * (i + 2) * self.rec_eps_tilde(2 * m - 2, i)
                         for i in range(1, 2 * m - 2))
                t.append(2 * s + s1)
            return t[n]

    def rec_eps1_2(self, n: int) -> int:
        if n < 0:
            raise ValueError("N must be >= 0")
        with self._lock:
            t = self.eps1_2
            e0 = self.eps_one_face
            e02 = self.rec_eps0_2
            for m in range(len(t), n + 1):
                s = sum(e0(0, i) * t[m - i - 1] + e02(i) * self.eps_one_face(1, m - i - 1)
                        for i in range(m - 2))
                t.append(2 * s + m * (2 * m - 1) * self.eps_one_face(1, m - 1) + self.rec_eps0_3(m - 1))
            return t[n]

    # auxiliary D_k(N) -------------------------------------------------------

    def D_rec(self, k: int, n: int) -> int:
        """``D_k(N) = p_k(0) C(2N+1, N) + 4 D_k(N-1) + 2(2k-3) D_{k-1}(N-1)``.

        Column ``k = 0`` is seeded from the defining sum; every column starts
        at ``D_k(0) = p_k(0)``.
        """
        if k < 0 or n < 0:
            raise ValueError("k and N must be >= 0")
        with self._lock:
            for kk in range(k + 1):
                for nn in range(n + 1):
                    if (kk, nn) in self.D:
                        continue
                    if kk == 0:
                        val = D_sum(0, nn)
                    elif nn == 0:
                        val = falling(kk, 0)
                    else:
                        val = (falling(kk, 0) * comb(2 * nn + 1, nn) + 4 * self.D[(kk, nn - 1)]
                               + 2 * (2 * kk - 3) * self.D[(kk - 1, nn - 1)])
                    self.D[(kk, nn)] = val
            return self.D[(k, n)]


_cache = SequenceCache()


def default_cache() -> SequenceCache:
    return _cache


def eps_one_face(g: int, n: int) -> int:
    """Gluings of one ``2N``-gon into a surface of genus ``g``.

    >>> [eps_one_face(0, n) for n in range(6)]
    [1, 1, 2, 5, 14, 42]
    """
    return _cache.eps_one_face(g, n)


def bicolored_one_face(g: int, n: int) -> int:
    return _cache.bicolored_one_face(g, n)


def rec_eps0_2(n: int) -> int:
    return _cache.rec_eps0_2(n)


def rec_B0_2(n: int) -> int:
    return _cache.rec_B0_2(n)


def rec_eps_tilde(arcs: int, first: int) -> int:
    return _cache.rec_eps_tilde(arcs, first)


def rec_eps0_3(n: int) -> int:
    return _cache.rec_eps0_3(n)


def rec_eps1_2(n: int) -> int:
    return _cache.rec_eps1_2(n)


def D_rec(k: int, n: int) -> int:
    return _cache.D_rec(k, n)


# closed forms ----------------------------------------------------------------

def closed_eps0_one_face(n: int) -> int:
    return divide(factorial(2 * n), factorial(n) * factorial(n + 1))


def closed_eps1_one_face(n: int) -> int:
    if n < 2:
        return 0
    return divide(factorial(2 * n), 12 * factorial(n) * factorial(n - 2))


def closed_eps0_2(n: int) -> int:
    if n < 0:
        raise ValueError("N must be >= 0")
    return exact(n * pow4(n - 1), "N 4^(N-1)")


def closed_eps1_2(n: int) -> int:
    if n < 0:
        raise ValueError("N must be >= 0")
    return exact(Fraction((13 * n + 3) * n * (n - 1) * (n - 2), 12) * pow4(n - 3), "eps_1(N,2)")


def closed_eps2_2(n: int) -> int:
    if n < 0:
        raise ValueError("N must be >= 0")
    poly = (445 * n * n - 401 * n - 210) * n * (n - 1) * (n - 2) * (n - 3) * (n - 4)
    return exact(Fraction(poly, 180) * pow4(n - 6), "eps_2(N,2)")


def closed_B0_2(n: int) -> int:
    if n < 1:
        raise ValueError("N must be >= 1")
    return exact((n - 1) * pow4(n - 2), "(N-1) 4^(N-2)")


def closed_eps0_3(n: int) -> int:
    if n < 1:
        raise ValueError("N must be >= 1")
    return divide((8 * n + 5) * (n - 1) * n * (n + 1) * comb(2 * n + 1, n), 210, "eps_0(N,3)")


# p_k(i), A(M, m, k), D_k(N) --------------------------------------------------

def falling(k: int, i: int) -> int:
    """``p_k(i) = (i+1)(i)...(i+2-k)``, the falling power of ``i + 1``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    out = 1
    for t in range(k):
        out *= i + 1 - t
    return out


def _a_term(j: int, k: int) -> Fraction:
    return Fraction(factorial(2 * j), 4 ** j * factorial(j) * factorial(j - k))


def _check_A_domain(M, m, k):
    if m > M:
        if M < -1:
            raise ValueError(f"A({M},{m},{k}) undefined for M < -1")
        return False
    if m < 0 or k > m:
        raise ValueError(f"A({M},{m},{k}) needs M >= m >= 0 and k <= m")
    return True


def A_sum(M: int, m: int, k: int) -> Fraction:
    """``sum_{j=m}^{M} (2j)! / (4^j j! (j-k)!)``; zero when ``m > M >= -1``."""
    if not _check_A_domain(M, m, k):
        return Fraction(0)
    return sum((_a_term(j, k) for j in range(m, M + 1)), Fraction(0))


def A_closed(M: int, m: int, k: int) -> Fraction:
    """Telescoped form of :func:`A_sum`."""
    if not _check_A_domain(M, m, k):
        return Fraction(0)
    top = Fraction((M + 1 - k) * factorial(2 * M + 2),
                   4 ** (M + 1) * factorial(M + 1) * factorial(M + 1 - k))
    bottom = Fraction((m - k) * factorial(2 * m), 4 ** m * factorial(m) * factorial(m - k))
    return Fraction(2, 2 * k + 1) * (top - bottom)


def A_closed_lower_minus_one(M: int) -> Fraction:
    """``A(M, 0, -1) = 2 - 2(M+2)(2M+2)! / (4^(M+1) (M+1)! (M+2)!)`` for ``M >= 0``."""
    if M < 0:
        raise ValueError("M must be >= 0")
    return 2 - Fraction(2 * (M + 2) * factorial(2 * M + 2),
                        4 ** (M + 1) * factorial(M + 1) * factorial(M + 2))


def A_closed_diagonal(M: int, k: int) -> Fraction:
    """``A(M, k, k) = 2/(2k+1) p_{k+1}(M) (2M+2)! / (4^(M+1) (M+1)!^2)``.

    The falling power has k+1 factors: ``(M+1)!/(M+1-k)!`` from the
    telescoped form times the leftover ``(M+1-k)``. It vanishes for
    ``-1 <= M < k``, matching the empty sum. Defined for ``M >= -1, k >= 0``.
    """
    if M < -1 or k < 0:
        raise ValueError(f"diagonal form needs M >= -1 and k >= 0, got M={M}, k={k}")
    return Fraction(2, 2 * k + 1) * Fraction(
        falling(k + 1, M) * factorial(2 * M + 2), 4 ** (M + 1) * factorial(M + 1) ** 2)


def D_sum(k: int, n: int) -> int:
    """``sum_i p_k(i) C(2i+1, i) C(2N-2i+1, N-i) / (2i+1)``."""
    if k < 0 or n < 0:
        raise ValueError("k and N must be >= 0")
    total = Fraction(0)
    for i in range(n + 1):
        total += Fraction(falling(k, i) * comb(2 * i + 1, i) * comb(2 * n - 2 * i + 1, n - i), 2 * i + 1)
    return exact(total, f"D_{k}({n})")


def D_closed(k: int, n: int) -> int:
    if n < 0:
        raise ValueError("N must be >= 0")
    half_central = Fraction(comb(2 * n + 2, n + 1), 2)
    if k == 0:
        return comb(2 * n + 2, n)
    if k == 1:
        val = 2 * pow4(n) - half_central
    elif k == 2:
        val = (n + 1) * (pow4(n) - half_central)
    elif k == 3:
        val = n * (n + 1) * (3 * pow4(n - 1) - half_central)
    elif k == 4:
        val = (n - 1) * n * (n + 1) * (10 * pow4(n - 2) - half_central)
    else:
        raise ValueError("closed forms exist only for k <= 4")
    return exact(val, f"D_{k}({n}) closed form")


def D_rec_geometric(k: int, n: int) -> int:
    """``D_k(N) = 2(2k-3) 4^N sum_{i=1}^{N} D_{k-1}(i-1) / 4^i`` for ``k >= 2``."""
    if k < 2 or n < 0:
        raise ValueError("needs k >= 2 and N >= 0")
    s = sum((Fraction(D_rec(k - 1, i - 1), 4 ** i) for i in range(1, n + 1)), Fraction(0))
    return exact(2 * (2 * k - 3) * 4 ** n * s, f"D_{k}({n}) summed recursion")


# identities over eps_tilde -----------------------------------------------------

def identity_suite(n_max: int, tilde: Optional[Callable[[int, int], int]] = None,
                   n_min: int = 1) -> dict:
    """Check the three weighted sums of ``eps_tilde(2N, i)`` for ``n_min <= N <= n_max``.

    ``tilde(arcs, first)`` defaults to :func:`rec_eps_tilde`. Returns a report
    ``{"passed": bool, "rows": [...], "failures": [...]}``.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    tilde = tilde or rec_eps_tilde
    rows, failures = [], []
    for n in range(n_min, n_max + 1):
        vals = [(i, tilde(2 * n, i)) for i in range(1, 2 * n)]
        checks = {
            "sum": (sum(v for _, v in vals), closed_eps0_2(n)),
            "sum_i": (sum(i * v for i, v in vals), n * n * 4 ** (n - 1)),
            "sum_i1_i2": (sum((i + 1) * (i + 2) * v for i, v in vals),
                          exact(pow4(n - 2) * n * (n + 1) * (5 * n + 7))),
        }
        for name, (lhs, rhs) in checks.items():
            row = {"identity": name, "N": n, "lhs": lhs, "rhs": rhs, "ok": lhs == rhs}
            rows.append(row)
            if lhs != rhs:
                failures.append(row)
    return {"passed": not failures, "rows": rows, "failures": failures}
