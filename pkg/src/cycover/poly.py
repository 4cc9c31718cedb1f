"""Exact sparse multivariate polynomial arithmetic.

Coefficients live in an exact domain: the rationals (``fractions.Fraction``,
always lowest terms with positive denominator) or a prime field F_p whose
elements are plain ints reduced to [0, p).  A polynomial belongs to a
:class:`PolyRing`, which fixes an ordered variable tuple and a positive
integer weight per variable; "degree" always means the weighted total
degree with respect to those weights.

Terms are stored sparsely, keyed by exponent tuple, and kept in descending
graded reverse lexicographic order, so equal polynomials have identical
representations and ``text()`` output is canonical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .modular import is_prime as _is_prime
from .seeds import Rng

Coeff = Union[int, Fraction]
Exponents = tuple  # tuple[int, ...]


class DomainMismatchError(ValueError):
    pass


class RingMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Rationals:
    """The field Q with Fraction arithmetic."""

    characteristic = 0

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def of(self, value) -> Fraction:
        return Fraction(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / Fraction(b)

    def pow(self, a, e: int):
        return Fraction(a) ** e

    def is_zero(self, a) -> bool:
        return a == 0

    def random(self, rng: Rng) -> Fraction:
        # Fixed integer range keeps hand-auditable coefficients.
        return Fraction(rng.int_range(-99, 99))

    def random_nonzero(self, rng: Rng) -> Fraction:
        while True:
            value = self.random(rng)
            if value:
                return value

    def to_str(self, a) -> str:
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def __repr__(self) -> str:
        return "QQ"


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a prime p; elements are ints in [0, p)."""

    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    characteristic = property(lambda self: self.p)

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def of(self, value) -> int:
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {value} vanishes mod {self.p}")
            return value.numerator * pow(den, self.p - 2, self.p) % self.p
        return int(value) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def pow(self, a, e: int):
        return pow(a, e, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def random(self, rng: Rng) -> int:
        return rng.below(self.p)

    def random_nonzero(self, rng: Rng) -> int:
        return 1 + rng.below(self.p - 1)

    def to_str(self, a) -> str:
        return str(a % self.p)

    def __repr__(self) -> str:
        return f"GF({self.p})"


Domain = Union[Rationals, PrimeField]

QQ = Rationals()


@dataclass(frozen=True)
class PolyRing:
    """Ordered variables with per-variable positive weights over a domain."""

    variables: tuple
    domain: Domain
    weights: tuple = None

    def __post_init__(self):
        names = tuple(self.variables)
        object.__setattr__(self, "variables", names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        weights = self.weights
        if weights is None:
            weights = (1,) * len(names)
        weights = tuple(int(w) for w in weights)
        if len(weights) != len(names):
            raise ValueError("one weight per variable required")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        object.__setattr__(self, "weights", weights)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def wdeg(self, exps: Exponents) -> int:
        weights = self.weights
        return sum(e * weights[i] for i, e in enumerate(exps) if e)

    def term_key(self, exps: Exponents):
        """Sort key realizing graded reverse lexicographic order.

        Larger key = larger monomial: compare weighted degree first, then
        prefer the monomial whose last differing exponent is smaller.
        """
        return (self.wdeg(exps), tuple(-e for e in reversed(exps)))

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(self.domain.one)

    def const(self, value) -> "Polynomial":
        value = self.domain.of(value)
        if self.domain.is_zero(value):
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: value})

    def gen(self, i: int) -> "Polynomial":
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial(self, {tuple(exps): self.domain.one})

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps: Sequence[int], coeff=None) -> "Polynomial":
        coeff = self.domain.one if coeff is None else self.domain.of(coeff)
        return Polynomial(self, {tuple(int(e) for e in exps): coeff})

    def from_terms(self, terms: Mapping) -> "Polynomial":
        return Polynomial(self, dict(terms))


def ring_over(variables: Iterable[str], domain: Domain = QQ, weights=None) -> PolyRing:
    return PolyRing(tuple(variables), domain, tuple(weights) if weights is not None else None)


class Polynomial:
    """Immutable sparse polynomial; do not mutate ``terms`` after creation."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping):
        domain = ring.domain
        cleaned = {}
        for exps, coeff in terms.items():
            coeff = domain.of(coeff)
            if not domain.is_zero(coeff):
                if len(exps) != ring.nvars:
                    raise ValueError("exponent tuple has wrong arity")
                cleaned[tuple(exps)] = coeff
        ordered = dict(sorted(cleaned.items(), key=lambda kv: ring.term_key(kv[0]), reverse=True))
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", ordered)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self):
        """Weighted total degree; -inf for the zero polynomial."""
        if not self.terms:
            return -math.inf
        return max(self.ring.wdeg(e) for e in self.terms)

    def low_degree(self):
        if not self.terms:
            return math.inf
        return min(self.ring.wdeg(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degrees = {self.ring.wdeg(e) for e in self.terms}
        return len(degrees) <= 1

    def constant_coefficient(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.domain.zero)

    def leading(self):
        """(exponents, coefficient) of the grevlex-largest term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return next(iter(self.terms.items()))

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), self.ring.domain.zero)

    def __len__(self) -> int:
        return len(self.terms)

    # -- ring operations ---------------------------------------------------

    def _check_ring(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise RingMismatchError("polynomials belong to different rings")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        cached = self._hash
        if cached is None:
            cached = hash((self.ring, tuple(self.terms.items())))
            object.__setattr__(self, "_hash", cached)
        return cached

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        domain = self.ring.domain
        result = dict(self.terms)
        for exps, coeff in other.terms.items():
            if exps in result:
                result[exps] = domain.add(result[exps], coeff)
            else:
                result[exps] = coeff
        return Polynomial(self.ring, result)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        domain = self.ring.domain
        result = dict(self.terms)
        for exps, coeff in other.terms.items():
            if exps in result:
                result[exps] = domain.sub(result[exps], coeff)
            else:
                result[exps] = domain.neg(coeff)
        return Polynomial(self.ring, result)

    def __neg__(self) -> "Polynomial":
        domain = self.ring.domain
        return Polynomial(self.ring, {e: domain.neg(c) for e, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        return poly_mul(self, other)

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = poly_mul(result, base)
            e >>= 1
            if e:
                base = poly_mul(base, base)
        return result

    def scale(self, scalar) -> "Polynomial":
        domain = self.ring.domain
        scalar = domain.of(scalar)
        if domain.is_zero(scalar):
            return self.ring.zero()
        return Polynomial(self.ring, {e: domain.mul(c, scalar) for e, c in self.terms.items()})

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        _, lead = self.leading()
        return self.scale(self.ring.domain.inv(lead))

    # -- evaluation and substitution ----------------------------------------

    def __call__(self, point: Sequence):
        return poly_eval(self, point)

    def derivative(self, var_index: int) -> "Polynomial":
        domain = self.ring.domain
        result = {}
        for exps, coeff in self.terms.items():
            e = exps[var_index]
            if e == 0:
                continue
            new = list(exps)
            new[var_index] = e - 1
            key = tuple(new)
            value = domain.mul(coeff, domain.of(e))
            if key in result:
                result[key] = domain.add(result[key], value)
            else:
                result[key] = value
        return Polynomial(self.ring, result)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Evaluate at polynomial arguments (one image per variable)."""
        if len(images) != self.ring.nvars:
            raise ValueError("one image per variable required")
        if not images:
            raise ValueError("substitution needs at least one variable")
        target = images[0].ring
        for image in images:
            if image.ring != target:
                raise RingMismatchError("substitution images in different rings")
        if target.domain != self.ring.domain:
            raise DomainMismatchError("substitution across coefficient domains")
        powers: list = [{0: target.one()} for _ in images]

        def power(i: int, e: int) -> Polynomial:
            cache = powers[i]
            if e not in cache:
                best = max(k for k in cache if k <= e)
                acc = cache[best]
                for k in range(best + 1, e + 1):
                    acc = poly_mul(acc, images[i])
                    cache[k] = acc
            return cache[e]

        total = target.zero()
        for exps, coeff in self.terms.items():
            term = target.const(coeff)
            for i, e in enumerate(exps):
                if e:
                    term = poly_mul(term, power(i, e))
            total = total + term
        return total

    def map_domain(self, new_ring: PolyRing) -> "Polynomial":
        """Reinterpret coefficients in ``new_ring``'s domain (same variables)."""
        if new_ring.nvars != self.ring.nvars:
            raise ValueError("variable count mismatch")
        return Polynomial(new_ring, {e: new_ring.domain.of(c) for e, c in self.terms.items()})

    # -- canonical text -----------------------------------------------------

    def text(self) -> str:
        """Canonical rendering, parseable by the toolkit's grammar."""
        if not self.terms:
            return "0"
        domain = self.ring.domain
        names = self.ring.variables
        rational = isinstance(domain, Rationals)
        pieces = []
        for index, (exps, coeff) in enumerate(self.terms.items()):
            if rational and coeff < 0:
                sign, magnitude = "-", -coeff
            else:
                sign, magnitude = "+", coeff
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(names, exps)
                if e
            )
            mag = domain.to_str(magnitude)
            if not mono:
                body = mag
            elif magnitude == domain.one:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if index == 0:
                if sign == "-":
                    # A bare leading "-x" is not grammatical; fold the sign
                    # into the rational coefficient instead.
                    body = f"{domain.to_str(coeff)}*{mono}" if mono else domain.to_str(coeff)
                pieces.append(body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({self.text()!r})"

    def __iter__(self) -> Iterator:
        return iter(self.terms.items())


# -- module-level operations ------------------------------------------------


def poly_mul(F: Polynomial, G: Polynomial) -> Polynomial:
    """Exact product; raises RingMismatchError across rings."""
    if F.ring != G.ring:
        raise RingMismatchError("polynomials belong to different rings")
    domain = F.ring.domain
    if len(F.terms) > len(G.terms):
        F, G = G, F
    result: dict = {}
    for e1, c1 in F.terms.items():
        for e2, c2 in G.terms.items():
            key = tuple(a + b for a, b in zip(e1, e2))
            value = domain.mul(c1, c2)
            if key in result:
                result[key] = domain.add(result[key], value)
            else:
                result[key] = value
    return Polynomial(F.ring, result)


def poly_mul_truncated(F: Polynomial, G: Polynomial, max_degree: int) -> Polynomial:
    """Product with all terms of weighted degree > max_degree dropped."""
    if F.ring != G.ring:
        raise RingMismatchError("polynomials belong to different rings")
    ring = F.ring
    domain = ring.domain
    f_terms = [(e, c, ring.wdeg(e)) for e, c in F.terms.items()]
    g_terms = [(e, c, ring.wdeg(e)) for e, c in G.terms.items()]
    result: dict = {}
    for e1, c1, d1 in f_terms:
        if d1 > max_degree:
            continue
        allowance = max_degree - d1
        for e2, c2, d2 in g_terms:
            if d2 > allowance:
                continue
            key = tuple(a + b for a, b in zip(e1, e2))
            value = domain.mul(c1, c2)
            if key in result:
                result[key] = domain.add(result[key], value)
            else:
                result[key] = value
    return Polynomial(ring, result)


def truncate_degree(F: Polynomial, max_degree: int) -> Polynomial:
    ring = F.ring
    return Polynomial(ring, {e: c for e, c in F.terms.items() if ring.wdeg(e) <= max_degree})


def poly_eval(F: Polynomial, point: Sequence):
    """Evaluate at a point with coordinates in the coefficient domain."""
    domain = F.ring.domain
    if len(point) != F.ring.nvars:
        raise ValueError("point has wrong arity")
    coords = [domain.of(c) for c in point]
    total = domain.zero
    for exps, coeff in F.terms.items():
        value = coeff
        for i, e in enumerate(exps):
            if e:
                value = domain.mul(value, domain.pow(coords[i], e))
        total = domain.add(total, value)
    return total


def homogeneous_components(F: Polynomial) -> dict:
    """Map weighted degree -> homogeneous part; degrees with zero part absent."""
    ring = F.ring
    buckets: dict = {}
    for exps, coeff in F.terms.items():
        buckets.setdefault(ring.wdeg(exps), {})[exps] = coeff
    return {d: Polynomial(ring, terms) for d, terms in sorted(buckets.items())}


def homogeneous_component(F: Polynomial, degree: int) -> Polynomial:
    ring = F.ring
    return Polynomial(
        ring, {e: c for e, c in F.terms.items() if ring.wdeg(e) == degree}
    )


def translate_origin(F: Polynomial, point: Sequence) -> Polynomial:
    """F(z + point): move ``point`` to the origin of the coordinates."""
    ring = F.ring
    domain = ring.domain
    if len(point) != ring.nvars:
        raise ValueError("point has wrong arity")
    images = []
    for i, coordinate in enumerate(point):
        shift = domain.of(coordinate)
        terms = {tuple(1 if j == i else 0 for j in range(ring.nvars)): domain.one}
        if not domain.is_zero(shift):
            terms[(0,) * ring.nvars] = shift
        images.append(Polynomial(ring, terms))
    return F.substitute(images)


def vanishing_order(F: Polynomial, point: Sequence):
    """Order of vanishing at ``point``: least weighted degree with a nonzero
    homogeneous part after translating the point to the origin.  0 when F
    does not vanish there; ``math.inf`` for the zero polynomial."""
    shifted = translate_origin(F, point)
    return shifted.low_degree()


def _exponents_of_weighted_degree(weights: Sequence[int], degree: int):
    if not weights:
        if degree == 0:
            yield ()
        return
    w = weights[0]
    for e in range(degree // w + 1):
        for rest in _exponents_of_weighted_degree(weights[1:], degree - e * w):
            yield (e,) + rest


def monomials_of_degree(ring: PolyRing, degree: int) -> list:
    """All exponent tuples of the given weighted degree, grevlex-descending."""
    exps = list(_exponents_of_weighted_degree(ring.weights, degree))
    exps.sort(key=ring.term_key, reverse=True)
    return exps


def random_homogeneous(ring: PolyRing, degree: int, seed: int) -> Polynomial:
    """Deterministic random homogeneous polynomial of the given weighted degree.

    Coefficients are uniform over F_p, or uniform over a fixed integer range
    for Q.  Degree 0 always yields a nonzero constant.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    rng = Rng(seed)
    domain = ring.domain
    if degree == 0:
        return ring.const(domain.random_nonzero(rng))
    terms = {}
    for exps in monomials_of_degree(ring, degree):
        coeff = domain.random(rng)
        if not domain.is_zero(coeff):
            terms[exps] = coeff
    return Polynomial(ring, terms)
