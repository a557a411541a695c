"""Exact multivariate polynomial arithmetic over the rationals.

Every computation in this package happens inside one fixed polynomial ring.
The variable registry is closed:

    ``D``     the translation generator (the "partial" of the algebra)
    ``x``     the first bracket variable (lambda)
    ``y``     the second bracket variable (mu)
    ``u, w``  reserved scratch variables used while composing brackets

A :class:`Poly` maps exponent vectors (one slot per registry variable) to
nonzero :class:`~fractions.Fraction` coefficients.  The zero polynomial
stores no terms, coefficients are always in lowest terms with positive
denominator (``Fraction`` guarantees this), and every operation returns a
canonical value.  Two polynomials are mathematically equal if and only if
they compare equal structurally, so ``==`` is an exact identity test and
rendering is byte-stable.

Terms are ordered graded-lexicographically with ``D > x > y > u > w``:
higher total degree first, ties broken by the exponent vector with ``D``
weighted heaviest.  All iteration and string rendering follow that order.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

Rat = Fraction

Scalar = Union[int, Fraction]


class Var(enum.IntEnum):
    """The closed variable registry; the value is the exponent slot."""

    PARTIAL = 0
    LAMBDA = 1
    MU = 2
    AUX1 = 3
    AUX2 = 4

    @property
    def spelling(self) -> str:
        return _SPELLINGS[self]


_SPELLINGS = ("D", "x", "y", "u", "w")
NVARS = 5
_ZERO_EXP = (0, 0, 0, 0, 0)

SPELLING_TO_VAR = {s: Var(i) for i, s in enumerate(_SPELLINGS)}


class MissingVariableError(ValueError):
    """A point evaluation did not assign every variable that occurs."""


def _as_rat(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational scalar, got {type(value).__name__}")


def _order_key(exp: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    return (sum(exp), exp)


class Poly:
    """Immutable multivariate polynomial with exact rational coefficients.

    Supports ``+ - * **`` against other polynomials and against ``int`` or
    ``Fraction`` scalars.  Instances must be treated as values; no method
    mutates its receiver.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], Scalar] | None = None):
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                c = _as_rat(coeff)
                if c:
                    if len(exp) != NVARS or any(e < 0 for e in exp):
                        raise ValueError(f"bad exponent vector {exp!r}")
                    clean[tuple(exp)] = c
        self._terms = clean
        self._hash: int | None = None

    # -- construction --------------------------------------------------

    @classmethod
    def zero(cls) -> Poly:
        return _ZERO

    @classmethod
    def one(cls) -> Poly:
        return _ONE

    @classmethod
    def const(cls, value: Scalar) -> Poly:
        c = _as_rat(value)
        if not c:
            return _ZERO
        return cls({_ZERO_EXP: c})

    @classmethod
    def variable(cls, var: Var) -> Poly:
        exp = [0] * NVARS
        exp[var] = 1
        return cls({tuple(exp): Fraction(1)})

    # -- inspection ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def terms(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        """Yield ``(exponent_vector, coefficient)`` in canonical order."""
        for exp in sorted(self._terms, key=_order_key, reverse=True):
            yield exp, self._terms[exp]

    def constant(self) -> Fraction:
        """Coefficient of the monomial 1."""
        return self._terms.get(_ZERO_EXP, Fraction(0))

    def as_constant(self) -> Fraction:
        """The value of a constant polynomial; error if any variable occurs."""
        if self.variables():
            raise ValueError(f"polynomial {self} is not constant")
        return self.constant()

    def variables(self) -> set[Var]:
        out: set[Var] = set()
        for exp in self._terms:
            for i, e in enumerate(exp):
                if e:
                    out.add(Var(i))
        return out

    def degree_in(self, var: Var) -> int:
        """Largest exponent of ``var``; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(exp[var] for exp in self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(exp) for exp in self._terms)

    # -- ring operations -----------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Poly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> Poly:
        return Poly({exp: -c for exp, c in self._terms.items()})

    def __add__(self, other: Poly | Scalar) -> Poly:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for exp, c in other._terms.items():
            s = out.get(exp, Fraction(0)) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return _wrap(out)

    __radd__ = __add__

    def __sub__(self, other: Poly | Scalar) -> Poly:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Poly | Scalar) -> Poly:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Poly | Scalar) -> Poly:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[tuple[int, ...], Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                exp = tuple(a + b for a, b in zip(ea, eb))
                s = out.get(exp, Fraction(0)) + ca * cb
                if s:
                    out[exp] = s
                else:
                    out.pop(exp, None)
        return _wrap(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = _ONE
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- calculus of substitution ---------------------------------------

    def substitute(self, var: Var, replacement: Poly | Scalar) -> Poly:
        """Substitute ``replacement`` for ``var``, exactly."""
        rep = _coerce(replacement)
        if rep is NotImplemented:
            raise TypeError("replacement must be a Poly or an exact scalar")
        out = _ZERO
        powers: dict[int, Poly] = {0: _ONE}
        for exp, c in self._terms.items():
            e = exp[var]
            if e not in powers:
                powers[e] = rep**e
            rest = list(exp)
            rest[var] = 0
            out = out + Poly({tuple(rest): c}) * powers[e]
        return out

    def coeff_in(self, var: Var, k: int) -> Poly:
        """``k!`` times the coefficient of ``var**k``.

        With the divided-powers convention ``var^(k) = var**k / k!`` this is
        exactly the k-th product extractor, which is why the factorial is
        baked in.
        """
        if k < 0:
            raise ValueError("k must be nonnegative")
        scale = Fraction(math.factorial(k))
        out: dict[tuple[int, ...], Fraction] = {}
        for exp, c in self._terms.items():
            if exp[var] == k:
                rest = list(exp)
                rest[var] = 0
                out[tuple(rest)] = c * scale
        return _wrap(out)

    def evaluate(self, assignment: Mapping[Var, Scalar]) -> Fraction:
        """Evaluate at a rational point covering every occurring variable."""
        point = {Var(v): _as_rat(c) for v, c in assignment.items()}
        missing = sorted(v.spelling for v in self.variables() if v not in point)
        if missing:
            raise MissingVariableError(
                f"assignment missing variables: {', '.join(missing)}"
            )
        total = Fraction(0)
        for exp, c in self._terms.items():
            term = c
            for i, e in enumerate(exp):
                if e:
                    term *= point[Var(i)] ** e
            total += term
        return total

    # -- rendering -------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for exp, coeff in self.terms():
            factors = [
                _SPELLINGS[i] if e == 1 else f"{_SPELLINGS[i]}^{e}"
                for i, e in enumerate(exp)
                if e
            ]
            mag = abs(coeff)
            if factors and mag == 1:
                body = "*".join(factors)
            elif factors:
                body = "*".join([str(mag)] + factors)
            else:
                body = str(mag)
            if not parts:
                parts.append(f"-{body}" if coeff < 0 else body)
            else:
                parts.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self})"


def _wrap(terms: dict[tuple[int, ...], Fraction]) -> Poly:
    p = Poly.__new__(Poly)
    p._terms = terms
    p._hash = None
    return p


def _coerce(value: Poly | Scalar) -> Poly:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly.const(value)
    return NotImplemented


_ZERO = _wrap({})
_ONE = Poly({_ZERO_EXP: Fraction(1)})

#: Generator polynomials, exported for readable formula building.
DEL = Poly.variable(Var.PARTIAL)
LAM = Poly.variable(Var.LAMBDA)
MU = Poly.variable(Var.MU)
AUX1 = Poly.variable(Var.AUX1)
AUX2 = Poly.variable(Var.AUX2)


def divmod_in_var(f: Poly, g: Poly, var: Var) -> tuple[Poly, Poly]:
    """Long division of ``f`` by ``g``, viewing both as univariate in ``var``.

    Requires the leading coefficient of ``g`` in ``var`` to be a nonzero
    rational constant (no other variables), which holds for every divisor
    this package produces.  Returns ``(q, r)`` with ``f == q*g + r`` and
    ``deg_var(r) < deg_var(g)``.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    dg = g.degree_in(var)
    lead_g = g.coeff_in(var, dg) * Fraction(1, math.factorial(dg))
    lead_const = lead_g.as_constant()
    q = Poly.zero()
    r = f
    v = Poly.variable(var)
    while not r.is_zero() and r.degree_in(var) >= dg:
        dr = r.degree_in(var)
        lead_r = r.coeff_in(var, dr) * Fraction(1, math.factorial(dr))
        step = lead_r * (Fraction(1) / lead_const) * v ** (dr - dg)
        q = q + step
        r = r - step * g
    return q, r


# ---------------------------------------------------------------------------
# Deterministic sample schedule for polynomial identity testing.
#
# A nonzero univariate polynomial of degree <= d has at most d roots, so
# vanishing at d+1 distinct rational points certifies vanishing identically.
# The schedule is fixed so that every run tests the same points: 1, -1, then
# for each prime q in order the block q, -q, 1/q, -1/q.
# ---------------------------------------------------------------------------

_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
    31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    73, 79, 83, 89, 97,
)


class ScheduleExhaustedError(RuntimeError):
    """More distinct sample points were requested than the schedule holds."""


def _schedule() -> Iterator[Fraction]:
    yield Fraction(1)
    yield Fraction(-1)
    for q in _PRIMES:
        yield Fraction(q)
        yield Fraction(-q)
        yield Fraction(1, q)
        yield Fraction(-1, q)


def pit_points(count: int, exclude: Iterable[Scalar] = ()) -> list[Fraction]:
    """First ``count`` schedule points, skipping any excluded values."""
    banned = {_as_rat(v) for v in exclude}
    out: list[Fraction] = []
    for point in _schedule():
        if point in banned:
            continue
        out.append(point)
        if len(out) == count:
            return out
    raise ScheduleExhaustedError(
        f"schedule exhausted after {len(out)} of {count} requested points"
    )


def pit_verify(
    family: Callable[[Fraction], Poly | Fraction | int],
    degree_bound: int,
    exclude: Iterable[Scalar] = (),
) -> bool:
    """Decide whether a polynomial family vanishes identically in its parameter.

    ``family(t)`` must be the exact value at parameter ``t`` (a polynomial or
    a plain rational), and the caller guarantees the dependence on ``t`` has
    degree at most ``degree_bound``.  Testing ``degree_bound + 1`` schedule
    points is then a proof, not a heuristic.
    """
    if degree_bound < 0:
        raise ValueError("degree_bound must be nonnegative")
    for point in pit_points(degree_bound + 1, exclude):
        value = family(point)
        zero = value.is_zero() if isinstance(value, Poly) else value == 0
        if not zero:
            return False
    return True
