"""Exact rational arithmetic and multivariate polynomials with the q-grading.

Everything downstream (edge ring forms, cube factors, slice matrices) is built
from the :class:`MultiPoly` type defined here.  Coefficients are exact
rationals; a monomial is a plain tuple of nonnegative exponents of fixed
length ``nvars``.  Every generator has q-degree 2, so the q-degree of a
monomial is twice its total degree.

Monomial order: graded lexicographic with variable index ascending, i.e.
monomials compare by ``(total degree, exponent tuple)``.  This order is fixed
once and for all; slice bases, cached matrices and test fixtures all depend
on it.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

try:
    from gmpy2 import mpq as rational
except ImportError:  # pragma: no cover
    from fractions import Fraction as rational

QQ0 = rational(0)
QQ1 = rational(1)

Monomial = tuple  # exponent tuple, length nvars


class ExactDivisionError(ArithmeticError):
    """Raised when a division that must be exact leaves a remainder."""


def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple(a + b for a, b in zip(m1, m2))


def mono_key(m: Monomial):
    """Sort key realizing the fixed graded lexicographic order."""
    return (sum(m), m)


def monomials_of_degree(nvars: int, degree: int) -> list[Monomial]:
    """All monomials of the given total degree, in the fixed order.

    Empty for negative degree.  Count is C(degree + nvars - 1, nvars - 1).
    """
    if nvars < 1:
        raise ValueError("need at least one variable")
    if degree < 0:
        return []
    out = []
    # stars and bars: choose bar positions; generated directly in
    # lexicographically increasing exponent order.
    for bars in combinations(range(degree + nvars - 1), nvars - 1):
        prev = -1
        exps = []
        for b in bars:
            exps.append(b - prev - 1)
            prev = b
        exps.append(degree + nvars - 1 - prev - 1)
        out.append(tuple(exps))
    out.sort(key=mono_key)
    return out


def capped_monomials(nvars: int, degree: int, caps: dict[int, int]) -> list[Monomial]:
    """Monomials of total degree ``degree`` with per-variable exponent caps.

    ``caps`` maps a variable index to its maximum exponent; uncapped
    variables may appear to any power.  Variables capped at 0 never appear.
    Result follows the fixed graded lexicographic order.
    """
    if degree < 0:
        return []
    out: list[Monomial] = []
    exps = [0] * nvars

    def rec(i: int, remaining: int) -> None:
        if i == nvars - 1:
            cap = caps.get(i)
            if cap is None or remaining <= cap:
                exps[i] = remaining
                out.append(tuple(exps))
                exps[i] = 0
            return
        cap = caps.get(i)
        top = remaining if cap is None else min(cap, remaining)
        for e in range(top + 1):
            exps[i] = e
            rec(i + 1, remaining - e)
        exps[i] = 0

    rec(0, degree)
    out.sort(key=mono_key)
    return out


class MultiPoly:
    """A multivariate polynomial over the rationals with a fixed variable count.

    Terms are stored as ``{exponent tuple: coefficient}`` with no zero
    coefficients.  Instances are immutable by convention; all operations
    return new polynomials.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c) -> "MultiPoly":
        c = rational(c)
        if c == 0:
            return cls(nvars)
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, k: int, coeff=1) -> "MultiPoly":
        m = tuple(1 if i == k else 0 for i in range(nvars))
        return cls(nvars, {m: rational(coeff)})

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def variables(self) -> set[int]:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return used

    def degree_in(self, k: int) -> int:
        if not self.terms:
            return -1
        return max(m[k] for m in self.terms)

    def coeff_of_power(self, k: int, e: int) -> "MultiPoly":
        """The coefficient of ``X_k^e`` as a polynomial in the other variables."""
        terms = {}
        for m, c in self.terms.items():
            if m[k] == e:
                mm = list(m)
                mm[k] = 0
                terms[tuple(mm)] = terms.get(tuple(mm), QQ0) + c
        return MultiPoly(self.nvars, terms)

    def leading_term(self) -> tuple[Monomial, object]:
        """Leading (monomial, coefficient) in the fixed graded lex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=mono_key)
        return m, self.terms[m]

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError("variable-set mismatch: %d vs %d" % (self.nvars, other.nvars))

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, QQ0) + c
            if s == 0:
                terms.pop(m, None)
            else:
                terms[m] = s
        return MultiPoly(self.nvars, terms)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, QQ0) - c
            if s == 0:
                terms.pop(m, None)
            else:
                terms[m] = s
        return MultiPoly(self.nvars, terms)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "MultiPoly":
        c = rational(c)
        if c == 0:
            return MultiPoly(self.nvars)
        return MultiPoly(self.nvars, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = terms.get(m, QQ0) + c1 * c2
                if s == 0:
                    terms.pop(m, None)
                else:
                    terms[m] = s
        return MultiPoly(self.nvars, terms)

    def mul_monomial(self, mono: Monomial, coeff=1) -> "MultiPoly":
        coeff = rational(coeff)
        if coeff == 0:
            return MultiPoly(self.nvars)
        return MultiPoly(
            self.nvars, {mono_mul(m, mono): c * coeff for m, c in self.terms.items()}
        )

    def __pow__(self, e: int) -> "MultiPoly":
        if e < 0:
            raise ValueError("negative power")
        out = MultiPoly.const(self.nvars, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- substitution and division -----------------------------------------

    def substitute(self, k: int, g: "MultiPoly") -> "MultiPoly":
        """Replace the variable ``X_k`` by the polynomial ``g``."""
        self._check(g)
        by_e: dict[int, dict] = {}
        for m, c in self.terms.items():
            mm = list(m)
            e = mm[k]
            mm[k] = 0
            slot = by_e.setdefault(e, {})
            slot[tuple(mm)] = slot.get(tuple(mm), QQ0) + c
        out = MultiPoly(self.nvars)
        gp = MultiPoly.const(self.nvars, 1)
        cur = 0
        for e in sorted(by_e):
            while cur < e:
                gp = gp * g
                cur += 1
            out = out + gp * MultiPoly(self.nvars, by_e[e])
        return out

    def substitute_many(self, mapping: dict) -> "MultiPoly":
        """Simultaneous substitution of several variables."""
        plain: dict = {}
        out = MultiPoly(self.nvars)
        pow_cache: dict = {}
        for m, c in self.terms.items():
            factors = None
            base = None
            for k, g in mapping.items():
                e = m[k]
                if not e:
                    continue
                if base is None:
                    base = list(m)
                base[k] = 0
                gp = pow_cache.get((k, e))
                if gp is None:
                    gp = g**e
                    pow_cache[(k, e)] = gp
                factors = gp if factors is None else factors * gp
            if factors is None:
                plain[m] = plain.get(m, QQ0) + c
            else:
                out = out + factors.mul_monomial(tuple(base), c)
        return out + MultiPoly(self.nvars, plain)

    def divmod_in_var(self, f: "MultiPoly", k: int) -> tuple["MultiPoly", "MultiPoly"]:
        """Division with remainder by ``f`` along the variable ``X_k``.

        ``f`` must have a nonzero rational (constant) leading coefficient in
        ``X_k``.  Returns ``(q, r)`` with ``self = q*f + r`` and
        ``deg_k(r) < deg_k(f)``.
        """
        d = f.degree_in(k)
        if d < 0:
            raise ZeroDivisionError("division by zero polynomial")
        lead = f.coeff_of_power(k, d)
        if lead.degree() != 0:
            raise ExactDivisionError("divisor is not monic in the pivot variable")
        lc = lead.terms[(0,) * self.nvars]
        tail = MultiPoly(
            self.nvars, {m: c for m, c in f.terms.items() if m[k] < d}
        )
        q = MultiPoly(self.nvars)
        r = self
        while True:
            high = {m: c for m, c in r.terms.items() if m[k] >= d}
            if not high:
                return q, r
            part = MultiPoly(self.nvars)
            for m, c in high.items():
                mm = list(m)
                mm[k] -= d
                part = part + MultiPoly(self.nvars, {tuple(mm): c / lc})
            q = q + part
            r = r - part * f

    def remainder_mod(self, f: "MultiPoly", k: int) -> "MultiPoly":
        """Remainder of division by ``f`` with respect to ``X_k``."""
        return self.divmod_in_var(f, k)[1]

    def divide_exact(self, f: "MultiPoly") -> "MultiPoly":
        """Exact quotient ``self / f``; raises if the division is not exact.

        Works for any nonzero divisor via leading-term division in the fixed
        monomial order.  An inexact division signals an internal-consistency
        error at the call sites (chain-map identities guarantee exactness).
        """
        if f.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        fm, fc = f.leading_term()
        q = MultiPoly(self.nvars)
        r = self
        while not r.is_zero():
            rm, rc = r.leading_term()
            diff = tuple(a - b for a, b in zip(rm, fm))
            if any(e < 0 for e in diff):
                raise ExactDivisionError("division is not exact")
            t = MultiPoly(self.nvars, {diff: rc / fc})
            q = q + t
            r = r - t * f
        return q

    # -- rendering ----------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=mono_key, reverse=True):
            c = self.terms[m]
            body = "*".join(
                "X%d" % i if e == 1 else "X%d^%d" % (i, e)
                for i, e in enumerate(m)
                if e
            )
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append("%s*%s" % (c, body))
        s = " + ".join(parts).replace("+ -", "- ")
        return s


def poly_add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p + q


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p * q


def poly_scale(p: MultiPoly, c) -> MultiPoly:
    return p.scale(c)


def linear_combination(
    nvars: int, items: Iterable[tuple[int, object]]
) -> MultiPoly:
    """Build sum of ``coeff * X_k`` from ``(k, coeff)`` pairs."""
    terms: dict = {}
    for k, coeff in items:
        m = tuple(1 if i == k else 0 for i in range(nvars))
        s = terms.get(m, QQ0) + rational(coeff)
        if s == 0:
            terms.pop(m, None)
        else:
            terms[m] = s
    return MultiPoly(nvars, terms)
