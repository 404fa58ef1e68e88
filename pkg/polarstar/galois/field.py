"""
Finite fields GF(p^k) over canonical integer encodings.

An element is the integer whose base-p digits, least significant first, are
the coefficients of its polynomial representative modulo the field modulus.
Elements are plain ints in [0, q); every routine in polarstar that orders
vertices by field values relies on this encoding.
"""

import logging
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from polarstar.exceptions import DivisionByZero, InvalidParameters, NotPrimePower

logger = logging.getLogger("polarstar")

MAX_ORDER = 1 << 16
ADD_TABLE_LIMIT = 256


def prime_factors(n: int) -> List[int]:
    """Distinct prime factors of n in increasing order."""
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors.append(n)
    return factors


def prime_power(n: int) -> Optional[Tuple[int, int]]:
    """Return (p, k) with n = p**k, or None."""
    if n < 2:
        return None
    factors = prime_factors(n)
    if len(factors) != 1:
        return None
    p = factors[0]
    k = 0
    while n > 1:
        n //= p
        k += 1
    return p, k


def is_prime_power(n: int) -> bool:
    return prime_power(n) is not None


def prime_powers(lo: int, hi: int) -> List[int]:
    return [n for n in range(max(lo, 2), hi + 1) if is_prime_power(n)]


def _poly_rem(a: List[int], m: Sequence[int], p: int) -> List[int]:
    # m is monic
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return [c % p for c in a[:dm]] + [0] * max(0, dm - len(a))


def _monic(low: int, degree: int, p: int) -> List[int]:
    coeffs = []
    for _ in range(degree):
        coeffs.append(low % p)
        low //= p
    return coeffs + [1]


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree up to half."""
    degree = len(coeffs) - 1
    if degree <= 1:
        return True
    if coeffs[0] % p == 0:
        return False
    for d in range(1, degree // 2 + 1):
        for low in range(p**d):
            if not any(_poly_rem(list(coeffs), _monic(low, d, p), p)):
                return False
    return True


def lowest_irreducible(p: int, k: int) -> Tuple[int, ...]:
    for low in range(p**k):
        candidate = _monic(low, k, p)
        if is_irreducible(candidate, p):
            return tuple(candidate)
    raise InvalidParameters(f"No irreducible polynomial of degree {k} over GF({p})")


class Field:
    """Arithmetic context for GF(q), q = p**k."""

    def __init__(self, q: int):
        if q < 2:
            raise NotPrimePower(f"Field order must be at least 2, got {q}")
        decomposition = prime_power(q)
        if decomposition is None:
            raise NotPrimePower(f"{q} is not a prime power")
        if q > MAX_ORDER:
            raise InvalidParameters(f"Field order {q} exceeds {MAX_ORDER}")
        self.p, self.k = decomposition
        self.q = q
        self.modulus = lowest_irreducible(self.p, self.k) if self.k > 1 else (0, 1)
        logger.debug("GF(%d) uses modulus %s", q, self.modulus)

        self._weights = self.p ** np.arange(self.k, dtype=np.int64)
        self._digits = (
            np.arange(q, dtype=np.int64)[:, None] // self._weights[None, :]
        ) % self.p

        self._add_table = None
        if self.k > 1 and self.p != 2 and q <= ADD_TABLE_LIMIT:
            sums = (self._digits[:, None, :] + self._digits[None, :, :]) % self.p
            self._add_table = sums @ self._weights

        self._root = self._find_primitive_root()
        self._exp, self._log = self._build_log_tables()

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"

    def __len__(self):
        return self.q

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))

    def coeffs(self, a: int) -> Tuple[int, ...]:
        return tuple(int(c) for c in self._digits[a])

    def element(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.k:
            raise InvalidParameters(f"{self} elements have {self.k} coefficients")
        return int(sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs)))

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return int(self._add_table[a, b])
        return int(((self._digits[a] + self._digits[b]) % self.p) @ self._weights)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return int(((-self._digits[a]) % self.p) @ self._weights)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in {self}")
        return int(self._exp[(-self._log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise DivisionByZero(f"0 has no inverse in {self}")
            return 1 if n == 0 else 0
        return int(self._exp[(self._log[a] * n) % (self.q - 1)])

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def squares(self) -> List[int]:
        """Nonzero squares in increasing encoding."""
        return sorted({self.mul(a, a) for a in range(1, self.q)})

    @property
    def primitive_root(self) -> int:
        return self._root

    def order(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 is not in the multiplicative group")
        n = self.q - 1
        for r in prime_factors(self.q - 1):
            while n % r == 0 and self.pow(a, n // r) == 1:
                n //= r
        return n

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def _poly_mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        da, db = self._digits[a], self._digits[b]
        prod = [0] * (2 * self.k - 1)
        for i in range(self.k):
            if da[i]:
                for j in range(self.k):
                    prod[i + j] += int(da[i]) * int(db[j])
        rem = _poly_rem(prod, self.modulus, self.p)
        return self.element(rem)

    def _slow_pow(self, a: int, n: int) -> int:
        result, base = 1, a
        while n:
            if n & 1:
                result = self._poly_mul(result, base)
            base = self._poly_mul(base, base)
            n >>= 1
        return result

    def _find_primitive_root(self) -> int:
        factors = prime_factors(self.q - 1)
        for g in range(1, self.q):
            if all(self._slow_pow(g, (self.q - 1) // r) != 1 for r in factors):
                return g
        raise InvalidParameters(f"{self} has no primitive root")  # unreachable

    def _build_log_tables(self):
        exp = np.zeros(max(self.q - 1, 1), dtype=np.int64)
        log = np.full(self.q, -1, dtype=np.int64)
        x = 1
        for i in range(self.q - 1):
            exp[i] = x
            log[x] = i
            x = self._poly_mul(x, self._root)
        return exp, log


@lru_cache(64)
def field_new(q: int) -> Field:
    """Shared, immutable GF(q) context."""
    return Field(q)
