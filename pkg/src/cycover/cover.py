"""Cyclic covers of projective hypersurfaces, made executable.

An instance is a pair of forms: a base form cutting a hypersurface in
projective space, and a branch form whose K-th root is adjoined to produce a
K-sheeted cyclic cover.  This module provides everything needed to study one
point of the cover:

* chart localization (move the point to the origin of an affine chart and
  split the localized forms into graded pieces),
* the regularity sequence attached to the chart (three shapes, depending on
  the branch position and the relative sizes of the degrees),
* hypertangent members (random elements of the linear systems used for
  multiplicity bounds) and their order checks along formal arcs,
* arc construction on the cover through the chart origin, and
* point sampling over a finite field, off and on the branch locus.

Coordinates: ambient variables are x0, x1, ...; chart variables are
z1, z2, ...; the normalized cover coordinate on a chart is y.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Tuple

from .family import CoverFamily, FamilyConstraintError, validate_family
from .modular import (
    det_mod,
    is_kth_power_residue,
    kth_root_mod,
    lagrange_interpolate,
    poly1_eval,
    poly1_roots,
    working_prime,
)
from .poly import (
    Polynomial,
    PolyRing,
    PrimeField,
    QQ,
    homogeneous_component,
    homogeneous_components,
    poly_eval,
    random_homogeneous,
    ring_over,
)
from .regseq import DEFAULT_PAIR_BUDGET, RegularityVerdict, regular_at_origin
from .seeds import (
    PURPOSE_ARC,
    PURPOSE_INSTANCE_F,
    PURPOSE_INSTANCE_G,
    PURPOSE_MEMBER,
    PURPOSE_POINT_OFF,
    PURPOSE_POINT_ON,
    PURPOSE_ROOT_SPLIT,
    Rng,
    derive_seed,
)
from .series import (
    Arc,
    OrderResult,
    TruncatedSeries,
    arc_lift,
    ord_along_arc,
    phi_polynomials,
    poly_on_series,
    series_kth_root,
    series_zero,
    truncate_f,
)

__all__ = [
    "CoverFamily",
    "FamilyConstraintError",
    "validate_family",
    "UnsupportedInstanceError",
    "LocalizationError",
    "SampleBudgetError",
    "CoverInstance",
    "ambient_ring",
    "chart_ring",
    "random_instance",
    "instance_mod_p",
    "ChartLocalization",
    "localize",
    "smooth_at",
    "RegularityCase",
    "regularity_sequence",
    "verify_regularity",
    "HypertangentMember",
    "admissible_hypertangent_levels",
    "hypertangent_member",
    "default_arc_order",
    "arc_through_chart_origin",
    "ArcOrderRecord",
    "MultiplicityReport",
    "hypertangent_multiplicity_check",
    "branch_truncation_check",
    "sample_point_off_branch",
    "sample_point_on_branch",
    "default_prime",
]

OFF_BRANCH_CASE_LOW = "R1a"
OFF_BRANCH_CASE_HIGH = "R1b"
ON_BRANCH_CASE = "R2"

COVER_VARIABLE = "y"


class UnsupportedInstanceError(ValueError):
    """The instance carries data the analysis operations do not handle."""


class LocalizationError(ValueError):
    """The requested chart cannot be built; the message names the obstruction."""


class SampleBudgetError(RuntimeError):
    """A randomized search exhausted its attempt budget."""


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------


def ambient_ring(family: CoverFamily, domain) -> PolyRing:
    """Ring of the weight-1 ambient coordinates x0 .. x_{dimension+1}."""
    return ring_over(
        tuple(f"x{i}" for i in range(family.ambient_variable_count)), domain
    )


def chart_ring(family: CoverFamily, domain) -> PolyRing:
    """Ring of the affine chart coordinates z1 .. z_{dimension+1}."""
    return ring_over(
        tuple(f"z{i}" for i in range(1, family.chart_variable_count + 1)), domain
    )


@dataclass(frozen=True)
class CoverInstance:
    """One cyclic cover: a base form and a branch form over a common ring.

    The cover adjoins a K-th root of ``branch_form`` to the hypersurface cut
    by ``base_form``.  A *generalized* instance instead records the K
    coefficient forms of a general degree-K cover equation; such instances
    are carried for bookkeeping but every analysis operation refuses them.
    """

    family: CoverFamily
    base_form: Polynomial
    branch_form: Optional[Polynomial] = None
    generalized_forms: Optional[Tuple[Polynomial, ...]] = None

    def __post_init__(self):
        fam = self.family
        ring = self.base_form.ring
        if ring.nvars != fam.ambient_variable_count:
            raise ValueError(
                f"base form has {ring.nvars} variables; the family needs "
                f"{fam.ambient_variable_count}"
            )
        if any(w != 1 for w in ring.weights):
            raise ValueError("ambient coordinates must all have weight 1")
        _require_form(self.base_form, fam.base_degree, "base form")
        if (self.branch_form is None) == (self.generalized_forms is None):
            raise ValueError(
                "exactly one of branch_form and generalized_forms is required"
            )
        if self.branch_form is not None:
            if self.branch_form.ring != ring:
                raise ValueError("base and branch forms live in different rings")
            _require_form(self.branch_form, fam.branch_degree, "branch form")
        else:
            forms = tuple(self.generalized_forms)
            object.__setattr__(self, "generalized_forms", forms)
            if len(forms) != fam.cover_degree:
                raise ValueError(
                    f"a generalized instance needs {fam.cover_degree} "
                    f"coefficient forms, got {len(forms)}"
                )
            for i, form in enumerate(forms, start=1):
                if form.ring != ring:
                    raise ValueError("coefficient forms live in different rings")
                if form.is_zero():
                    continue
                _require_form(
                    form, i * fam.branch_weight, f"coefficient form {i}"
                )
            if forms[-1].is_zero():
                raise ValueError(
                    "the last coefficient form must be nonzero (otherwise the "
                    "cover equation is divisible by the cover coordinate)"
                )

    @property
    def ring(self) -> PolyRing:
        return self.base_form.ring

    @property
    def domain(self):
        return self.base_form.ring.domain

    @property
    def is_generalized(self) -> bool:
        return self.generalized_forms is not None

    def require_plain(self, operation: str) -> Polynomial:
        """The branch form, or a refusal naming the calling operation."""
        if self.branch_form is None:
            raise UnsupportedInstanceError(
                f"{operation} handles only plain covers (a single branch "
                f"form); this instance carries generalized coefficient forms"
            )
        return self.branch_form


def _require_form(F: Polynomial, degree: int, label: str):
    if F.is_zero():
        raise ValueError(f"{label} must be nonzero")
    if not F.is_homogeneous() or F.degree() != degree:
        raise ValueError(
            f"{label} must be homogeneous of degree {degree}; "
            f"got degree {F.degree()}"
        )


def default_prime(family: CoverFamily) -> int:
    """The least prime >= 10^6 + 3 that is 1 mod the cover degree."""
    return working_prime(family.cover_degree)


def random_instance(family: CoverFamily, seed: int, domain=QQ) -> CoverInstance:
    """A random plain instance with seed-derived base and branch forms."""
    ring = ambient_ring(family, domain)
    base = _random_form(ring, family.base_degree, seed, PURPOSE_INSTANCE_F)
    branch = _random_form(ring, family.branch_degree, seed, PURPOSE_INSTANCE_G)
    return CoverInstance(family=family, base_form=base, branch_form=branch)


def _random_form(ring: PolyRing, degree: int, seed: int, purpose: int) -> Polynomial:
    for attempt in range(16):
        F = random_homogeneous(ring, degree, derive_seed(seed, trial=attempt, purpose=purpose))
        if not F.is_zero():
            return F
    raise ArithmeticError("random form generation kept producing zero")


def instance_mod_p(instance: CoverInstance, p: int) -> CoverInstance:
    """The same instance with coefficients reduced modulo p."""
    field = PrimeField(p)
    target = ambient_ring(instance.family, field)
    branch = instance.branch_form
    generalized = instance.generalized_forms
    return CoverInstance(
        family=instance.family,
        base_form=instance.base_form.map_domain(target),
        branch_form=None if branch is None else branch.map_domain(target),
        generalized_forms=None
        if generalized is None
        else tuple(f.map_domain(target) for f in generalized),
    )


# ---------------------------------------------------------------------------
# Chart localization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChartLocalization:
    """An instance viewed in an affine chart with the chosen point at the origin.

    point            -- the projective representative, rescaled so the pivot
                        coordinate equals 1
    pivot            -- index of the first nonzero coordinate
    ring             -- chart polynomial ring in z1 .. z_{dimension+1}
    localized_base   -- base form on the chart (vanishes at the origin)
    localized_branch -- branch form on the chart; off the branch locus it is
                        rescaled so its value at the origin is exactly 1
    base_pieces      -- graded pieces of localized_base, degrees 1 .. m
    branch_pieces    -- graded pieces of localized_branch, degrees 0 .. Kl
    on_branch        -- whether the branch form vanishes at the point
    branch_scale     -- original value of the branch form at the point (the
                        scalar divided out off the branch; zero on it)
    root_normalizer  -- a scalar K-th root of branch_scale when one exists in
                        the coefficient domain, else None
    """

    instance: CoverInstance
    point: tuple
    pivot: int
    ring: PolyRing
    localized_base: Polynomial
    localized_branch: Polynomial
    base_pieces: tuple
    branch_pieces: tuple
    on_branch: bool
    branch_scale: object
    root_normalizer: object

    def __post_init__(self):
        fam = self.instance.family
        domain = self.ring.domain
        if len(self.base_pieces) != fam.base_degree:
            raise ValueError("one base piece per degree 1..m is required")
        if len(self.branch_pieces) != fam.branch_degree + 1:
            raise ValueError("one branch piece per degree 0..Kl is required")
        total = self.ring.zero()
        for j, piece in enumerate(self.base_pieces, start=1):
            _require_piece(piece, j)
            total = total + piece
        if total != self.localized_base:
            raise ValueError("base pieces do not reconstruct the localized base form")
        if not domain.is_zero(self.localized_base.constant_coefficient()):
            raise ValueError("the localized base form must vanish at the origin")
        total = self.ring.zero()
        for j, piece in enumerate(self.branch_pieces):
            _require_piece(piece, j)
            total = total + piece
        if total != self.localized_branch:
            raise ValueError(
                "branch pieces do not reconstruct the localized branch form"
            )
        w0 = self.branch_pieces[0].constant_coefficient()
        if self.on_branch and not domain.is_zero(w0):
            raise ValueError("on the branch locus the degree-0 piece must vanish")
        if not self.on_branch and w0 != domain.one:
            raise ValueError("off the branch locus the degree-0 piece must be 1")

    @property
    def family(self) -> CoverFamily:
        return self.instance.family

    @property
    def domain(self):
        return self.ring.domain

    def base_piece(self, j: int) -> Polynomial:
        """The degree-j graded piece of the localized base form (1 <= j <= m)."""
        if not 1 <= j <= len(self.base_pieces):
            raise IndexError(f"base piece index {j} outside 1..{len(self.base_pieces)}")
        return self.base_pieces[j - 1]

    def branch_piece(self, j: int) -> Polynomial:
        """The degree-j graded piece of the localized branch form (0 <= j <= Kl)."""
        if not 0 <= j < len(self.branch_pieces):
            raise IndexError(
                f"branch piece index {j} outside 0..{len(self.branch_pieces) - 1}"
            )
        return self.branch_pieces[j]


def _require_piece(piece: Polynomial, degree: int):
    if piece.is_zero():
        return
    if not piece.is_homogeneous() or piece.degree() != degree:
        raise ValueError(f"graded piece of degree {degree} has degree {piece.degree()}")


def localize(instance: CoverInstance, point: Sequence) -> ChartLocalization:
    """Move ``point`` to the origin of its standard affine chart.

    The pivot is the first nonzero coordinate; the point is rescaled so the
    pivot coordinate is 1, the forms are dehomogenized on the chart and
    translated, and the results are split into graded pieces.  Off the branch
    locus the localized branch form is rescaled to take the value 1 at the
    origin, and a scalar K-th root of the divided-out value is recorded when
    the coefficient domain contains one.
    """
    branch_form = instance.require_plain("chart localization")
    fam = instance.family
    ring = instance.ring
    domain = ring.domain
    coords = tuple(domain.of(c) for c in point)
    if len(coords) != ring.nvars:
        raise LocalizationError(
            f"point has {len(coords)} coordinates; expected {ring.nvars}"
        )
    pivot = next(
        (i for i, c in enumerate(coords) if not domain.is_zero(c)), None
    )
    if pivot is None:
        raise LocalizationError("the zero vector does not define a projective point")
    inv = domain.inv(coords[pivot])
    normalized = tuple(domain.mul(c, inv) for c in coords)
    if not domain.is_zero(poly_eval(instance.base_form, normalized)):
        raise LocalizationError("the point does not lie on the base hypersurface")

    zring = chart_ring(fam, domain)
    images = []
    k = 0
    for j in range(ring.nvars):
        if j == pivot:
            images.append(zring.one())
        else:
            images.append(zring.const(normalized[j]) + zring.gen(k))
            k += 1
    localized_base = instance.base_form.substitute(images)
    localized_branch = branch_form.substitute(images)

    base_parts = homogeneous_components(localized_base)
    if 0 in base_parts:
        raise LocalizationError("the localized base form does not vanish at the origin")
    base_pieces = tuple(
        base_parts.get(j, zring.zero()) for j in range(1, fam.base_degree + 1)
    )

    branch_scale = localized_branch.constant_coefficient()
    on_branch = domain.is_zero(branch_scale)
    root = None
    if not on_branch:
        localized_branch = localized_branch.scale(domain.inv(branch_scale))
        root = _scalar_kth_root(domain, branch_scale, fam.cover_degree)
    branch_parts = homogeneous_components(localized_branch)
    branch_pieces = tuple(
        branch_parts.get(j, zring.zero()) for j in range(fam.branch_degree + 1)
    )
    return ChartLocalization(
        instance=instance,
        point=normalized,
        pivot=pivot,
        ring=zring,
        localized_base=localized_base,
        localized_branch=localized_branch,
        base_pieces=base_pieces,
        branch_pieces=branch_pieces,
        on_branch=on_branch,
        branch_scale=branch_scale,
        root_normalizer=root,
    )


def _integer_kth_root(n: int, k: int) -> Optional[int]:
    """Exact nonnegative k-th root of n >= 0, or None."""
    if n < 0:
        raise ValueError("negative radicand")
    if n in (0, 1):
        return n
    x = 1 << ((n.bit_length() + k - 1) // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x ** k == n else None


def _scalar_kth_root(domain, value, k: int):
    """A k-th root of a nonzero scalar in the domain, or None."""
    if isinstance(domain, PrimeField):
        if (domain.p - 1) % k != 0:
            return None
        return kth_root_mod(value, k, domain.p)
    value = Fraction(value)
    negative = value < 0
    if negative and k % 2 == 0:
        return None
    num = _integer_kth_root(abs(value.numerator), k)
    den = _integer_kth_root(value.denominator, k)
    if num is None or den is None:
        return None
    root = Fraction(num, den)
    return -root if negative else root


# ---------------------------------------------------------------------------
# Smoothness and regularity sequences
# ---------------------------------------------------------------------------


def smooth_at(chart: ChartLocalization) -> bool:
    """Whether the cover is smooth at the chart origin.

    Off the branch locus this needs a nonzero linear piece of the base form;
    on it, additionally the linear pieces of base and branch forms must be
    linearly independent.
    """
    q1 = chart.base_piece(1)
    if q1.is_zero():
        return False
    if not chart.on_branch:
        return True
    w1 = chart.branch_piece(1)
    return not _linearly_dependent(q1, w1)


def _linearly_dependent(a: Polynomial, b: Polynomial) -> bool:
    """Whether two linear forms are proportional (zero counts as dependent)."""
    if a.is_zero() or b.is_zero():
        return True
    domain = a.ring.domain
    exps, coeff = a.leading()
    ratio = domain.div(b.coefficient(exps), coeff)
    return (b - a.scale(ratio)).is_zero()


@dataclass(frozen=True)
class RegularityCase:
    """The sequence whose regularity at the chart origin is to be verified.

    tag is one of R1a / R1b (off the branch locus, base degree at most /
    exceeding the branch degree) and R2 (on the branch locus).  Off the
    branch the sequence has one member per chart dimension (dimension of the
    covering variety); on it the length is base degree + cover degree.
    """

    tag: str
    chart: ChartLocalization
    members: tuple

    def __post_init__(self):
        fam = self.chart.family
        if self.tag in (OFF_BRANCH_CASE_LOW, OFF_BRANCH_CASE_HIGH):
            expected = fam.dimension
        elif self.tag == ON_BRANCH_CASE:
            expected = fam.base_degree + fam.cover_degree
        else:
            raise ValueError(f"unknown case tag {self.tag!r}")
        if len(self.members) != expected:
            raise ValueError(
                f"case {self.tag} requires {expected} members, got {len(self.members)}"
            )
        for member in self.members:
            if member.ring != self.chart.ring:
                raise ValueError("sequence members must live in the chart ring")

    @property
    def ring(self) -> PolyRing:
        return self.chart.ring


def regularity_sequence(chart: ChartLocalization) -> RegularityCase:
    """The regularity sequence attached to a smooth chart point.

    Off the branch locus: the graded base pieces q_1..q_m together with the
    root pieces of the branch form, which ones depending on whether the base
    degree stays within the branch degree (R1a) or exceeds it (R1b).  On the
    branch locus: q_1..q_m together with the first K branch pieces (R2).
    """
    if chart.instance.is_generalized:
        raise UnsupportedInstanceError(
            "regularity sequences handle only plain covers"
        )
    if not smooth_at(chart):
        raise LocalizationError(
            "the chart origin is a singular point of the cover; no regularity "
            "sequence is attached there"
        )
    fam = chart.family
    m = fam.base_degree
    l = fam.branch_weight
    K = fam.cover_degree
    D = fam.branch_degree
    if chart.on_branch:
        members = chart.base_pieces + tuple(
            chart.branch_piece(j) for j in range(1, K + 1)
        )
        return RegularityCase(tag=ON_BRANCH_CASE, chart=chart, members=members)
    root_input = list(chart.branch_pieces[1:])
    if m <= D:
        phis = phi_polynomials(root_input, K, D - 1)
        members = chart.base_pieces + tuple(phis[l : D - 1])
        return RegularityCase(tag=OFF_BRANCH_CASE_LOW, chart=chart, members=members)
    phis = phi_polynomials(root_input, K, D)
    members = chart.base_pieces[: m - 1] + tuple(phis[l:D])
    return RegularityCase(tag=OFF_BRANCH_CASE_HIGH, chart=chart, members=members)


def verify_regularity(
    case: RegularityCase,
    seed: int = 0,
    trials: int = 5,
    budget: int = DEFAULT_PAIR_BUDGET,
) -> RegularityVerdict:
    """Run the origin-regularity verifier on the case's member sequence."""
    return regular_at_origin(
        list(case.members),
        n=case.ring.nvars,
        trials=trials,
        seed=seed,
        budget=budget,
    )


# ---------------------------------------------------------------------------
# Hypertangent members
# ---------------------------------------------------------------------------


def admissible_hypertangent_levels(family: CoverFamily) -> range:
    """Levels at which hypertangent members exist off the branch locus."""
    return range(1, min(family.base_degree - 1, family.branch_degree - 1) + 1)


@dataclass(frozen=True)
class HypertangentMember:
    """A random member of the level-i hypertangent system on a chart.

    The member is plain_part(z) + cover_part(z) * y, built from multipliers
    against the graded truncations of the base form (base_multipliers s_0..
    s_{i-1}) and, once the level reaches the cover degree, against the
    difference between y and the truncated branch root (root_multipliers
    s*_0..s*_{i-K}).  Its vanishing order along any arc on the cover through
    the chart origin should be at least level + 1.
    """

    chart: ChartLocalization
    level: int
    base_multipliers: tuple
    root_multipliers: tuple
    plain_part: Polynomial
    cover_part: Polynomial
    polynomial: Polynomial

    @property
    def threshold(self) -> int:
        return self.level + 1


def _extended_ring(chart: ChartLocalization) -> PolyRing:
    return ring_over(chart.ring.variables + (COVER_VARIABLE,), chart.domain)


def _lift_to_extended(F: Polynomial, extended: PolyRing) -> Polynomial:
    return Polynomial(extended, {exps + (0,): c for exps, c in F.terms.items()})


def hypertangent_member(
    chart: ChartLocalization, level: int, seed: int
) -> HypertangentMember:
    """Draw a random level-``level`` hypertangent member on an off-branch chart.

    Admissible levels run from 1 to min(base degree, branch degree) - 1.
    The multiplier of codegree a is a random homogeneous form of degree a
    (a nonzero constant for a = 0), seeded deterministically.
    """
    if chart.instance.is_generalized:
        raise UnsupportedInstanceError("hypertangent members handle only plain covers")
    if chart.on_branch:
        raise LocalizationError(
            "hypertangent members are defined off the branch locus"
        )
    fam = chart.family
    i = level
    top = min(fam.base_degree - 1, fam.branch_degree - 1)
    if not 1 <= i <= top:
        raise ValueError(f"level {i} outside the admissible range 1..{top}")
    K = fam.cover_degree
    zring = chart.ring

    base_mult = tuple(
        random_homogeneous(
            zring, a, derive_seed(seed, trial=a, point=0, purpose=PURPOSE_MEMBER)
        )
        for a in range(i)
    )
    root_mult = tuple(
        random_homogeneous(
            zring, a, derive_seed(seed, trial=a, point=1, purpose=PURPOSE_MEMBER)
        )
        for a in range(i - K + 1)
    )

    plain = zring.zero()
    for j in range(1, i + 1):
        plain = plain + base_mult[i - j] * truncate_f(chart.base_pieces, j)
    cover = zring.zero()
    if root_mult:
        phis = phi_polynomials(list(chart.branch_pieces[1:]), K, i)
        partial_root = zring.one()
        for d in range(1, K):
            partial_root = partial_root + phis[d - 1]
        for k in range(K, i + 1):
            partial_root = partial_root + phis[k - 1]  # now 1 + Φ_1 + ... + Φ_k
            s = root_mult[i - k]
            plain = plain - s * partial_root
            cover = cover + s

    extended = _extended_ring(chart)
    y = extended.gen(extended.nvars - 1)
    member = _lift_to_extended(plain, extended) + _lift_to_extended(cover, extended) * y
    return HypertangentMember(
        chart=chart,
        level=i,
        base_multipliers=base_mult,
        root_multipliers=root_mult,
        plain_part=plain,
        cover_part=cover,
        polynomial=member,
    )


# ---------------------------------------------------------------------------
# Arcs on the cover through the chart origin
# ---------------------------------------------------------------------------


def default_arc_order(level: int) -> int:
    """Truncation order used for arcs serving checks up to this level."""
    return 2 * level + 2


def _solved_variable(q1: Polynomial) -> int:
    """Index of a chart variable appearing in the linear piece."""
    ring = q1.ring
    domain = ring.domain
    for i in range(ring.nvars):
        exps = tuple(1 if j == i else 0 for j in range(ring.nvars))
        if not domain.is_zero(q1.coefficient(exps)):
            return i
    raise LocalizationError("the linear piece of the base form is zero")


def arc_through_chart_origin(
    chart: ChartLocalization, seed: int, order_bound: int
) -> Arc:
    """A formal arc on the cover through the chart origin.

    The chart components z_*(t) vanish at t = 0 and satisfy the localized
    base form through the truncation order; the cover component y(t)
    satisfies y^K = (localized branch form)(z(t)) through the same order.
    Off the branch locus y(0) = 1 (the normalized sheet), on it y(0) = 0.
    """
    if order_bound < 2:
        raise ValueError("arc order bound must be at least 2")
    q1 = chart.base_piece(1)
    if q1.is_zero():
        raise LocalizationError("arcs need a smooth chart point")
    if chart.on_branch:
        return _arc_on_branch(chart, seed, order_bound)
    return _arc_off_branch(chart, seed, order_bound)


def _random_small_series(domain, rng: Rng, N: int) -> TruncatedSeries:
    """A random series with zero constant term."""
    return TruncatedSeries(
        domain, (domain.zero,) + tuple(domain.random(rng) for _ in range(N))
    )


def _arc_off_branch(chart: ChartLocalization, seed: int, N: int) -> Arc:
    fam = chart.family
    domain = chart.domain
    zring = chart.ring
    solved = _solved_variable(chart.base_piece(1))
    rng = Rng(derive_seed(seed, purpose=PURPOSE_ARC))
    free = {
        i: _random_small_series(domain, rng, N)
        for i in range(zring.nvars)
        if i != solved
    }
    lifted = arc_lift(chart.localized_base, solved, free, N)
    components = {}
    for i, name in enumerate(zring.variables):
        components[name] = lifted if i == solved else free[i]
    composed_branch = poly_on_series(chart.localized_branch, components)
    y = series_kth_root(composed_branch, fam.cover_degree)
    base_residual = poly_on_series(chart.localized_base, components)
    if base_residual.order() is not None:
        raise ArithmeticError("lifted arc leaves a nonzero base residual")
    cover_residual = y.pow_int(fam.cover_degree) - composed_branch
    if cover_residual.order() is not None:
        raise ArithmeticError("cover component leaves a nonzero branch residual")
    components[COVER_VARIABLE] = y
    return Arc(components, {"base": N + 1, "cover": N + 1})


def _random_cover_compatible_series(domain, rng: Rng, K: int, N: int) -> TruncatedSeries:
    """A random series supported on powers of t^K, vanishing at t = 0."""
    coeffs = [domain.zero] * (N + 1)
    for j in range(K, N + 1, K):
        coeffs[j] = domain.random(rng)
    return TruncatedSeries(domain, tuple(coeffs))


def _arc_on_branch(chart: ChartLocalization, seed: int, N: int) -> Arc:
    """On-branch arcs: chart components are series in t^K, so the composed
    branch form has order divisible by K and a K-th root can be split off as
    an exact monomial shift times a unit root.

    The construction works at the inflated internal bound K*N so that the
    cover component is honestly determined through t^N even after the shift.
    """
    fam = chart.family
    K = fam.cover_degree
    domain = chart.domain
    zring = chart.ring
    solved = _solved_variable(chart.base_piece(1))
    internal = K * N
    for attempt in range(64):
        rng = Rng(derive_seed(seed, trial=attempt, purpose=PURPOSE_ARC))
        free = {
            i: _random_cover_compatible_series(domain, rng, K, internal)
            for i in range(zring.nvars)
            if i != solved
        }
        lifted = arc_lift(chart.localized_base, solved, free, internal)
        if any(
            not domain.is_zero(c)
            for j, c in enumerate(lifted.coeffs)
            if j % K != 0
        ):
            raise ArithmeticError(
                "solved component left the cover-compatible subring"
            )
        components = {}
        for i, name in enumerate(zring.variables):
            components[name] = lifted if i == solved else free[i]
        composed_branch = poly_on_series(chart.localized_branch, components)
        e = composed_branch.order()
        if e is None:
            # The branch form vanishes along the arc through K*N, so the
            # cover component vanishes through N.
            y = series_zero(domain, N)
        else:
            if e % K != 0:
                raise ArithmeticError(
                    "composed branch form order is not divisible by the "
                    "cover degree"
                )
            shift = e // K
            unit = TruncatedSeries(domain, composed_branch.coeffs[e:])
            constant = unit[0]
            root_constant = _scalar_kth_root(domain, constant, K)
            if root_constant is None:
                continue  # not a K-th power residue; redraw the arc
            normalized = unit.scale(domain.inv(constant))
            v = series_kth_root(normalized, K).scale(root_constant)
            y = TruncatedSeries(
                domain, (domain.zero,) * shift + v.coeffs[: N + 1 - shift]
            )
        truncated = {name: s.truncate(N) for name, s in components.items()}
        cover_residual = y.pow_int(K) - poly_on_series(
            chart.localized_branch, truncated
        )
        if cover_residual.order() is not None:
            raise ArithmeticError(
                "cover component leaves a nonzero branch residual"
            )
        truncated[COVER_VARIABLE] = y
        return Arc(truncated, {"base": N + 1, "cover": N + 1})
    raise SampleBudgetError(
        "no cover-compatible arc found in 64 attempts (the branch values "
        "kept falling outside the K-th powers)"
    )


# ---------------------------------------------------------------------------
# Order checks along arcs
# ---------------------------------------------------------------------------

CHECK_PASS = "pass"
CHECK_FAIL = "fail"
CHECK_UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class ArcOrderRecord:
    """Outcome of one order measurement along one arc.

    An exact order decides pass/fail against the threshold; a measurement
    that only produced a lower bound (the composition vanished through the
    truncation order) is recorded as unresolved and never counts as a pass.
    The exact zero function passes at every threshold.
    """

    arc_index: int
    order: OrderResult
    threshold: int
    status: str


def _order_status(order: OrderResult, threshold: int) -> str:
    if order.infinite:
        return CHECK_PASS
    if order.exact:
        return CHECK_PASS if order.value >= threshold else CHECK_FAIL
    return CHECK_UNRESOLVED


@dataclass(frozen=True)
class MultiplicityReport:
    """Order measurements of one member along a batch of arcs."""

    label: str
    threshold: int
    records: tuple

    @property
    def pass_count(self) -> int:
        return sum(1 for r in self.records if r.status == CHECK_PASS)

    @property
    def fail_count(self) -> int:
        return sum(1 for r in self.records if r.status == CHECK_FAIL)

    @property
    def unresolved_count(self) -> int:
        return sum(1 for r in self.records if r.status == CHECK_UNRESOLVED)

    @property
    def all_resolved_pass(self) -> bool:
        """No failures, and at least one resolved measurement passed."""
        return self.fail_count == 0 and self.pass_count > 0

    def describe(self) -> str:
        return (
            f"{self.label}: {self.pass_count} pass, {self.fail_count} fail, "
            f"{self.unresolved_count} unresolved (threshold {self.threshold})"
        )


def _order_records(
    member: Polynomial, arcs: Sequence[Arc], threshold: int
) -> tuple:
    records = []
    for idx, arc in enumerate(arcs):
        order = ord_along_arc(member, arc)
        records.append(
            ArcOrderRecord(
                arc_index=idx,
                order=order,
                threshold=threshold,
                status=_order_status(order, threshold),
            )
        )
    return tuple(records)


def hypertangent_multiplicity_check(
    member: HypertangentMember, arcs: Sequence[Arc]
) -> MultiplicityReport:
    """Measure the member's vanishing order along each arc.

    Every arc on the cover through the chart origin should meet the member
    to order at least level + 1.
    """
    threshold = member.threshold
    return MultiplicityReport(
        label=f"hypertangent level {member.level}",
        threshold=threshold,
        records=_order_records(member.polynomial, arcs, threshold),
    )


def branch_truncation_check(
    chart: ChartLocalization, level: int, arcs: Sequence[Arc]
) -> MultiplicityReport:
    """On-branch order check at truncation level k = 1 .. K - 1.

    The function y^K - (sum of branch pieces of degree > k) agrees along any
    arc on the cover with the low truncation of the branch form, so its
    vanishing order at the chart origin must be at least k + 1.
    """
    if not chart.on_branch:
        raise LocalizationError(
            "branch truncation checks are defined on the branch locus"
        )
    fam = chart.family
    K = fam.cover_degree
    if not 1 <= level <= K - 1:
        raise ValueError(f"truncation level {level} outside 1..{K - 1}")
    extended = _extended_ring(chart)
    y = extended.gen(extended.nvars - 1)
    tail = extended.zero()
    for j in range(level + 1, fam.branch_degree + 1):
        tail = tail + _lift_to_extended(chart.branch_piece(j), extended)
    member = y ** K - tail
    threshold = level + 1
    return MultiplicityReport(
        label=f"branch truncation level {level}",
        threshold=threshold,
        records=_order_records(member, arcs, threshold),
    )


# ---------------------------------------------------------------------------
# Point sampling over a finite field
# ---------------------------------------------------------------------------


def _require_sampling_field(instance: CoverInstance) -> PrimeField:
    domain = instance.domain
    if not isinstance(domain, PrimeField):
        raise ValueError("point sampling works over a prime field")
    if (domain.p - 1) % instance.family.cover_degree != 0:
        raise ValueError(
            f"sampling needs a prime = 1 mod the cover degree "
            f"{instance.family.cover_degree}; got {domain.p}"
        )
    return domain


def sample_point_off_branch(
    instance: CoverInstance, seed: int, budget: int = 64
) -> tuple:
    """A random point of the base hypersurface off the branch locus.

    Draws random affine lines, finds the roots of the restricted base form,
    and keeps a root where the branch form is a nonzero K-th power residue
    (so the point lifts to rational points of the cover).  Every returned
    point is re-verified against both conditions.
    """
    branch_form = instance.require_plain("off-branch sampling")
    field = _require_sampling_field(instance)
    p = field.p
    fam = instance.family
    nvars = instance.ring.nvars
    line_ring = ring_over(("s",), field)
    for attempt in range(budget):
        rng = Rng(derive_seed(seed, trial=attempt, purpose=PURPOSE_POINT_OFF))
        anchor = tuple(rng.below(p) for _ in range(nvars))
        direction = tuple(rng.below(p) for _ in range(nvars))
        if all(c == 0 for c in direction):
            continue
        images = [
            line_ring.const(a) + line_ring.const(d) * line_ring.gen(0)
            for a, d in zip(anchor, direction)
        ]
        restricted = instance.base_form.substitute(images)
        if restricted.is_zero():
            continue
        coeffs = [
            restricted.coefficient((j,)) for j in range(restricted.degree() + 1)
        ]
        roots = poly1_roots(
            coeffs, p, seed=derive_seed(seed, trial=attempt, purpose=PURPOSE_ROOT_SPLIT)
        )
        for r in roots:
            candidate = tuple(
                (a + r * d) % p for a, d in zip(anchor, direction)
            )
            if all(c == 0 for c in candidate):
                continue
            if poly_eval(instance.base_form, candidate) != 0:
                raise ArithmeticError("sampled point fails re-verification")
            branch_value = poly_eval(branch_form, candidate)
            if branch_value == 0:
                continue
            if not is_kth_power_residue(branch_value, fam.cover_degree, p):
                continue
            return candidate
    raise SampleBudgetError(
        f"no off-branch point found on {budget} random lines"
    )


def _bivariate_coefficients(F: Polynomial, degree: int) -> list:
    """Coefficient lists in the first variable, indexed by the power of the
    second, padded to the stated degree."""
    out = [[] for _ in range(degree + 1)]
    for (es, er), c in F.terms.items():
        col = out[er]
        while len(col) <= es:
            col.append(0)
        col[es] = c
    return [col or [0] for col in out]


def _sylvester_determinant_at(
    f_cols: list, g_cols: list, m: int, n: int, x: int, p: int
) -> int:
    """Sylvester resultant determinant with the first variable evaluated."""
    f_vals = [poly1_eval(col, x, p) for col in f_cols]
    g_vals = [poly1_eval(col, x, p) for col in g_cols]
    size = m + n
    rows = []
    for shift in range(n):
        row = [0] * size
        for j, v in enumerate(reversed(f_vals)):
            row[shift + j] = v
        rows.append(row)
    for shift in range(m):
        row = [0] * size
        for j, v in enumerate(reversed(g_vals)):
            row[shift + j] = v
        rows.append(row)
    return det_mod(rows, p)


def sample_point_on_branch(
    instance: CoverInstance, seed: int, budget: int = 32
) -> tuple:
    """A random point lying on both the base hypersurface and the branch locus.

    Draws random affine 2-planes, eliminates one plane coordinate through the
    Sylvester resultant of the two restricted forms (evaluated at enough
    points and interpolated), solves for the other coordinate, and
    re-verifies every candidate against both forms.
    """
    branch_form = instance.require_plain("on-branch sampling")
    field = _require_sampling_field(instance)
    p = field.p
    fam = instance.family
    nvars = instance.ring.nvars
    m = fam.base_degree
    n = fam.branch_degree
    plane_ring = ring_over(("s", "r"), field)
    s_gen, r_gen = plane_ring.gens()
    for attempt in range(budget):
        rng = Rng(derive_seed(seed, trial=attempt, purpose=PURPOSE_POINT_ON))
        anchor = tuple(rng.below(p) for _ in range(nvars))
        first = tuple(rng.below(p) for _ in range(nvars))
        second = tuple(rng.below(p) for _ in range(nvars))
        images = [
            plane_ring.const(a) + plane_ring.const(c) * s_gen + plane_ring.const(d) * r_gen
            for a, c, d in zip(anchor, first, second)
        ]
        f_plane = instance.base_form.substitute(images)
        g_plane = branch_form.substitute(images)
        if f_plane.is_zero() or g_plane.is_zero():
            continue
        f_cols = _bivariate_coefficients(f_plane, m)
        g_cols = _bivariate_coefficients(g_plane, n)
        if all(c == 0 for c in f_cols[m]) or all(c == 0 for c in g_cols[n]):
            continue  # degenerate leading coefficient; redraw the plane
        bound = m * n
        xs = list(range(bound + 1))
        ys = [
            _sylvester_determinant_at(f_cols, g_cols, m, n, x, p) for x in xs
        ]
        if all(v == 0 for v in ys):
            continue  # the restricted curves share a component; redraw
        resultant = lagrange_interpolate(xs, ys, p)
        s_roots = poly1_roots(
            resultant, p, seed=derive_seed(seed, trial=attempt, point=1, purpose=PURPOSE_ROOT_SPLIT)
        )
        for s0 in s_roots:
            f_slice = [poly1_eval(col, s0, p) for col in f_cols]
            r_roots = poly1_roots(
                f_slice,
                p,
                seed=derive_seed(seed, trial=attempt, point=2, purpose=PURPOSE_ROOT_SPLIT),
            )
            for r0 in r_roots:
                candidate = tuple(
                    (a + s0 * c + r0 * d) % p
                    for a, c, d in zip(anchor, first, second)
                )
                if all(v == 0 for v in candidate):
                    continue
                if poly_eval(instance.base_form, candidate) != 0:
                    continue
                if poly_eval(branch_form, candidate) != 0:
                    continue
                return candidate
    raise SampleBudgetError(
        f"no point on the branch locus found on {budget} random planes"
    )
