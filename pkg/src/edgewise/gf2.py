"""Arithmetic over F2[t] and the binary fields GF(2^a).

Polynomials over F2 are encoded as Python ints, bit i holding the coefficient
of t^i.  Field elements of GF(2^a) are polynomials of degree < a reduced by a
fixed irreducible modulus, so every element is an int in [0, 2^a).
"""

from __future__ import annotations

from functools import lru_cache


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    """Carry-less product of two F2 polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, m: int) -> int:
    dm = poly_degree(m)
    da = a.bit_length() - 1
    while da >= dm:
        a ^= m << (da - dm)
        da = a.bit_length() - 1
    return a


def poly_mulmod(a: int, b: int, m: int) -> int:
    return poly_mod(poly_mul(a, b), m)


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: int) -> bool:
    """Rabin's irreducibility test for an F2 polynomial (must be monic)."""
    d = poly_degree(f)
    if d <= 0:
        return False
    if d == 1:
        return True
    t = 2  # the polynomial t
    # t^(2^d) must equal t mod f
    x = t
    for _ in range(d):
        x = poly_mulmod(x, x, f)
    if x != poly_mod(t, f):
        return False
    for q in _prime_factors(d):
        x = t
        for _ in range(d // q):
            x = poly_mulmod(x, x, f)
        if poly_gcd(x ^ t, f) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def irreducible_poly(degree: int) -> int:
    """Smallest (as an integer) monic irreducible F2 polynomial of a degree."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    for cand in range(1 << degree, 1 << (degree + 1)):
        if is_irreducible(cand):
            return cand
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


class GF2Field:
    """GF(2^a) with a fixed deterministic modulus."""

    def __init__(self, degree: int):
        self.degree = degree
        self.size = 1 << degree
        self.modulus = irreducible_poly(degree)

    def mul(self, x: int, y: int) -> int:
        return poly_mulmod(x, y, self.modulus)

    def pow(self, x: int, e: int) -> int:
        out = 1
        base = x
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def powers(self, x: int, count: int) -> list[int]:
        """[x^0, x^1, ..., x^(count-1)], reduced."""
        out = [1]
        cur = 1
        for _ in range(count - 1):
            cur = self.mul(cur, x)
            out.append(cur)
        return out


@lru_cache(maxsize=None)
def field(degree: int) -> GF2Field:
    return GF2Field(degree)
