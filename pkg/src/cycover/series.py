"""Formal K-th roots and truncated power series.

Two closely related expansions live here:

* multivariate: the homogeneous pieces of (1 + w_1 + ... + w_D)^(1/K) where
  each w_j is homogeneous of degree j, together with their partial sums;
* univariate: truncated series in one parameter t, used to build formal
  arcs on a hypersurface by Newton lifting and to measure vanishing orders
  of functions composed with such arcs.

All arithmetic is exact (rationals or a prime field); truncation order is
explicit everywhere and results never claim precision beyond it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .poly import (
    Domain,
    Polynomial,
    homogeneous_component,
    poly_mul_truncated,
    truncate_degree,
)


class SingularDirectionError(ValueError):
    """Newton lifting refused: the solved variable's partial vanishes at 0."""


# -- binomial expansion coefficients ------------------------------------------


@dataclass(frozen=True)
class GammaTable:
    """Taylor coefficients of (1+s)^(1/K) at s = 0, indices 1..N."""

    root_index: int
    coefficients: tuple

    def __post_init__(self):
        K = self.root_index
        gammas = self.coefficients
        if K < 2:
            raise ValueError("root index must be at least 2")
        if not gammas or gammas[0] != Fraction(1, K):
            raise ValueError("first coefficient must be 1/K")
        for i in range(1, len(gammas)):
            # (i+1) * gamma_{i+1} = (1/K - i) * gamma_i with 1-based indices.
            if Fraction(i + 1) * gammas[i] != (Fraction(1, K) - i) * gammas[i - 1]:
                raise ValueError(f"recurrence violated at index {i + 1}")

    def __getitem__(self, i: int) -> Fraction:
        if i == 0:
            return Fraction(1)
        return self.coefficients[i - 1]

    def __len__(self) -> int:
        return len(self.coefficients)


def gamma_coefficients(K: int, N: int) -> GammaTable:
    """γ_1..γ_N with γ_i = (1/K)(1/K − 1)⋯(1/K − i + 1)/i!."""
    if K < 2:
        raise ValueError("root index must be at least 2")
    if N < 1:
        raise ValueError("need at least one coefficient")
    out = []
    current = Fraction(1, K)
    out.append(current)
    for i in range(1, N):
        current = current * (Fraction(1, K) - i) / (i + 1)
        out.append(current)
    return GammaTable(K, tuple(out))


# -- multivariate truncations of the K-th root --------------------------------


def _sum_with_one(w: Sequence[Polynomial]) -> Polynomial:
    if not w:
        raise ValueError("need at least one graded piece (zero is fine)")
    ring = w[0].ring
    total = ring.one()
    for j, piece in enumerate(w, start=1):
        if piece.ring != ring:
            raise ValueError("graded pieces live in different rings")
        if not piece.is_zero() and (not piece.is_homogeneous() or piece.degree() != j):
            raise ValueError(f"piece {j} must be homogeneous of degree {j} or zero")
        total = total + piece
    return total


def _pow_truncated(F: Polynomial, e: int, bound: int) -> Polynomial:
    result = F.ring.one()
    base = truncate_degree(F, bound)
    while e:
        if e & 1:
            result = poly_mul_truncated(result, base, bound)
        e >>= 1
        if e:
            base = poly_mul_truncated(base, base, bound)
    return result


def phi_polynomials(w: Sequence[Polynomial], K: int, N: int) -> list:
    """Homogeneous pieces Φ_1..Φ_N of (1 + Σ w_j)^(1/K).

    Computed degree by degree: with R_i = 1 + Φ_1 + ... + Φ_i, the degree-i
    piece of R_i^K must match that of 1 + Σ w_j, which forces
    Φ_i = [ (1+Σw) − R_{i−1}^K ]_i / K.  Each returned piece is homogeneous
    of degree exactly i (or zero).
    """
    if K < 2:
        raise ValueError("root index must be at least 2")
    if N < 0:
        raise ValueError("truncation order must be nonnegative")
    g = _sum_with_one(w)
    ring = g.ring
    domain = ring.domain
    inv_K = domain.inv(domain.of(K))
    partial = ring.one()
    phis = []
    for i in range(1, N + 1):
        mismatch = g - _pow_truncated(partial, K, i)
        phi = homogeneous_component(mismatch, i).scale(inv_K)
        phis.append(phi)
        partial = partial + phi
    return phis


def truncated_kth_root(w: Sequence[Polynomial], K: int, k: int) -> Polynomial:
    """Partial sum 1 + Φ_1 + ... + Φ_k; its K-th power matches 1 + Σ w_j
    through weighted degree k."""
    if k < 1:
        raise ValueError("truncation index must be at least 1")
    phis = phi_polynomials(w, K, k)
    total = w[0].ring.one()
    for phi in phis:
        total = total + phi
    return total


def truncate_f(q: Sequence[Polynomial], k: int) -> Polynomial:
    """Partial sum q_1 + ... + q_k of the graded pieces of the hypersurface."""
    if not 1 <= k <= len(q):
        raise ValueError(f"index {k} outside 1..{len(q)}")
    total = q[0]
    for piece in q[1:k]:
        total = total + piece
    return total


# -- univariate truncated series ----------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """c_0 + c_1 t + ... + c_N t^N; nothing is known beyond t^N."""

    domain: Domain
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "coeffs", tuple(self.domain.of(c) for c in self.coeffs)
        )
        if not self.coeffs:
            raise ValueError("a truncated series stores at least c_0")

    @property
    def order_bound(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int):
        return self.coeffs[i] if i < len(self.coeffs) else self.domain.zero

    def is_zero(self) -> bool:
        return all(self.domain.is_zero(c) for c in self.coeffs)

    def order(self) -> Optional[int]:
        """Index of the first nonzero coefficient; None if zero through N."""
        for i, c in enumerate(self.coeffs):
            if not self.domain.is_zero(c):
                return i
        return None

    def _common(self, other: "TruncatedSeries") -> int:
        if self.domain != other.domain:
            raise ValueError("series over different domains")
        return min(self.order_bound, other.order_bound)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = self._common(other)
        add = self.domain.add
        return TruncatedSeries(
            self.domain, tuple(add(self[i], other[i]) for i in range(n + 1))
        )

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = self._common(other)
        sub = self.domain.sub
        return TruncatedSeries(
            self.domain, tuple(sub(self[i], other[i]) for i in range(n + 1))
        )

    def __neg__(self) -> "TruncatedSeries":
        neg = self.domain.neg
        return TruncatedSeries(self.domain, tuple(neg(c) for c in self.coeffs))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = self._common(other)
        domain = self.domain
        out = [domain.zero] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if domain.is_zero(a):
                continue
            for j in range(n + 1 - i):
                b = other[j]
                if not domain.is_zero(b):
                    out[i + j] = domain.add(out[i + j], domain.mul(a, b))
        return TruncatedSeries(domain, tuple(out))

    def scale(self, scalar) -> "TruncatedSeries":
        domain = self.domain
        s = domain.of(scalar)
        return TruncatedSeries(domain, tuple(domain.mul(c, s) for c in self.coeffs))

    def shift(self, e: int) -> "TruncatedSeries":
        """Multiply by t^e, keeping the same order bound."""
        if e < 0:
            raise ValueError("shift must be nonnegative")
        n = self.order_bound
        coeffs = (self.domain.zero,) * min(e, n + 1) + self.coeffs[: max(0, n + 1 - e)]
        return TruncatedSeries(self.domain, coeffs[: n + 1])

    def pow_int(self, e: int) -> "TruncatedSeries":
        if e < 0:
            raise ValueError("negative powers: use inverse() first")
        result = series_constant(self.domain, self.domain.one, self.order_bound)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires c_0 invertible (nonzero)."""
        domain = self.domain
        if domain.is_zero(self[0]):
            raise ZeroDivisionError("series with c_0 = 0 has no inverse")
        n = self.order_bound
        # Newton: v <- v(2 - a v) doubles the number of correct coefficients.
        v = series_constant(domain, domain.inv(self[0]), n)
        two = series_constant(domain, domain.add(domain.one, domain.one), n)
        correct = 1
        while correct <= n:
            v = v * (two - self * v)
            correct *= 2
        return v

    def truncate(self, n: int) -> "TruncatedSeries":
        if n < 0:
            raise ValueError("order bound must be nonnegative")
        return TruncatedSeries(self.domain, self.coeffs[: n + 1] or (self.domain.zero,))


def series_constant(domain: Domain, value, N: int) -> TruncatedSeries:
    return TruncatedSeries(domain, (domain.of(value),) + (domain.zero,) * N)


def series_zero(domain: Domain, N: int) -> TruncatedSeries:
    return series_constant(domain, domain.zero, N)


def series_parameter(domain: Domain, N: int) -> TruncatedSeries:
    """The series t itself."""
    if N < 1:
        raise ValueError("order bound must be at least 1 to hold t")
    coeffs = [domain.zero] * (N + 1)
    coeffs[1] = domain.one
    return TruncatedSeries(domain, tuple(coeffs))


def series_kth_root(c: TruncatedSeries, K: int) -> TruncatedSeries:
    """r with r^K = c through the order bound; requires c_0 = 1 and r_0 = 1.

    Solved degree by degree: writing r = R + r_d t^d with R known below
    degree d, the t^d coefficient of r^K is [R^K]_d + K r_d.
    """
    domain = c.domain
    if c[0] != domain.one:
        raise ValueError("K-th root requires constant term exactly 1")
    if K < 2:
        raise ValueError("root index must be at least 2")
    characteristic = domain.characteristic
    if characteristic and K % characteristic == 0:
        raise ValueError("root index divisible by the characteristic")
    inv_K = domain.inv(domain.of(K))
    n = c.order_bound
    coeffs = [domain.one] + [domain.zero] * n
    for d in range(1, n + 1):
        power = TruncatedSeries(domain, tuple(coeffs)).truncate(d).pow_int(K)
        delta = domain.sub(c[d], power[d])
        coeffs[d] = domain.mul(delta, inv_K)
    return TruncatedSeries(domain, tuple(coeffs))


# -- polynomial composition with series and formal arcs ------------------------


def poly_on_series(F: Polynomial, assignment: Mapping[str, TruncatedSeries]) -> TruncatedSeries:
    """Compose F with one series per variable (keyed by variable name)."""
    ring = F.ring
    domain = ring.domain
    series = []
    for name in ring.variables:
        if name not in assignment:
            raise ValueError(f"no series provided for variable {name}")
        s = assignment[name]
        if s.domain != domain:
            raise ValueError("series domain differs from coefficient domain")
        series.append(s)
    if not series:
        raise ValueError("composition needs at least one variable")
    n = min(s.order_bound for s in series)
    total = series_zero(domain, n)
    power_cache: list = [dict() for _ in series]

    def power(i: int, e: int) -> TruncatedSeries:
        cache = power_cache[i]
        if e not in cache:
            cache[e] = series[i].truncate(n).pow_int(e)
        return cache[e]

    for exps, coeff in F.terms.items():
        term = series_constant(domain, coeff, n)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
        total = total + term
    return total


@dataclass(frozen=True)
class Arc:
    """A formal curve: one series per variable plus certified residual orders.

    ``residual_orders`` maps an equation label to a certified lower bound on
    the t-order of that equation composed with the arc; an accepted arc has
    every residual bound at least order_bound + 1.
    """

    components: Mapping[str, TruncatedSeries]
    residual_orders: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        bounds = {s.order_bound for s in self.components.values()}
        if len(bounds) > 1:
            raise ValueError("arc components have mismatched order bounds")
        if not self.components:
            raise ValueError("an arc needs at least one component")
        object.__setattr__(self, "components", dict(self.components))
        object.__setattr__(self, "residual_orders", dict(self.residual_orders))

    @property
    def order_bound(self) -> int:
        return next(iter(self.components.values())).order_bound

    def component(self, name: str) -> TruncatedSeries:
        return self.components[name]


@dataclass(frozen=True)
class OrderResult:
    """Vanishing order of a function along an arc.

    exact=True: the order is ``value`` (first nonzero t-coefficient seen).
    exact=False, infinite=False: only ``lower`` is certified (the series
    vanished through the truncation bound, so the order is >= lower).
    infinite=True: the function is the exact zero element.
    """

    lower: int
    exact: bool
    infinite: bool = False
    value: Optional[int] = None

    @classmethod
    def exactly(cls, d: int) -> "OrderResult":
        return cls(lower=d, exact=True, value=d)

    @classmethod
    def at_least(cls, bound: int) -> "OrderResult":
        return cls(lower=bound, exact=False)

    @classmethod
    def infinity(cls) -> "OrderResult":
        return cls(lower=0, exact=False, infinite=True)

    def meets(self, threshold: int) -> bool:
        """Whether the order is certainly >= threshold."""
        return self.infinite or self.lower >= threshold

    def describe(self) -> str:
        if self.infinite:
            return "infinite"
        if self.exact:
            return str(self.value)
        return f">= {self.lower}"


def ord_along_arc(D: Polynomial, arc: Arc) -> OrderResult:
    """Vanishing order of D composed with the arc.

    The exact zero polynomial has infinite order.  A nonzero polynomial whose
    composition vanishes through the truncation bound N yields only the
    certified statement "order >= N + 1" — never an exact number.
    """
    if D.is_zero():
        return OrderResult.infinity()
    composed = poly_on_series(D, arc.components)
    order = composed.order()
    if order is None:
        return OrderResult.at_least(composed.order_bound + 1)
    return OrderResult.exactly(order)


def arc_lift(
    F: Polynomial,
    solved_var: int,
    free_values: Mapping[int, TruncatedSeries],
    N: int,
) -> TruncatedSeries:
    """Series s(t) with s(0) = 0 solving F = 0 when variable ``solved_var``
    is s and the remaining variables follow ``free_values``.

    Newton iteration on truncated series: each step solves the linearization
    at the current approximation, doubling the correct order, so the residual
    vanishes through t^N after ~log2(N) steps.  Requires the origin to lie on
    {F = 0} with the solved direction transverse (nonzero partial there).
    """
    ring = F.ring
    domain = ring.domain
    if not 0 <= solved_var < ring.nvars:
        raise ValueError("solved variable index out of range")
    origin = [domain.zero] * ring.nvars
    if F(origin) != domain.zero:
        raise ValueError("the origin does not lie on the hypersurface")
    partial = F.derivative(solved_var)
    if domain.is_zero(partial(origin)):
        raise SingularDirectionError(
            "partial derivative in the solved direction vanishes at the origin"
        )
    names = ring.variables
    assignment = {}
    for i, name in enumerate(names):
        if i == solved_var:
            continue
        if i not in free_values:
            raise ValueError(f"missing series for variable {name}")
        s = free_values[i].truncate(N)
        if not domain.is_zero(s[0]):
            raise ValueError(f"free series for {name} must vanish at t = 0")
        assignment[name] = s

    solved_name = names[solved_var]
    current = series_zero(domain, N)
    # Quadratic convergence: correct through order 2^steps after `steps` steps.
    steps = 0
    while True:
        assignment[solved_name] = current
        residual = poly_on_series(F, assignment)
        if residual.order() is None:
            break
        slope = poly_on_series(partial, assignment)
        current = current - residual * slope.inverse()
        steps += 1
        if steps > N.bit_length() + 3:
            raise ArithmeticError("Newton iteration failed to converge")
    if not domain.is_zero(current[0]):
        raise ArithmeticError("lifted series does not vanish at t = 0")
    return current
