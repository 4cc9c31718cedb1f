"""Groebner engine and the local regular-sequence certifier.

The core question answered here: is an ordered tuple of polynomials
vanishing at the origin a regular sequence in the local ring at the origin?
The test is geometric.  For a prefix of length i in n variables, the prefix
ideal is intersected with n - i random linear cuts through the origin; the
prefix is certified when the origin is an isolated point of the resulting
zero set.  Isolation is a sound proof (no probabilistic element), while a
refutation after several independent cut draws is Monte-Carlo evidence.

Two isolation routes:

* homogeneous inputs (the pipeline's case): independent linear elements of
  the ideal are eliminated by substitution, and isolation is equivalent to
  a single Macaulay-matrix full-rank check in the top relevant degree —
  with exactly as many generators as variables, the quotient is a complete
  intersection, whose Hilbert function provably vanishes first at
  cap = sum(deg_j - 1) + 1, making the rank test an exact decision;
* general inputs: literal saturation at the origin by iterated ideal
  quotient, entirely via Buchberger completion.

All Buchberger work is metered by a pair-reduction budget; exceeding it
raises, and the certifier converts that into an Inconclusive verdict
rather than guessing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .poly import (
    Domain,
    Polynomial,
    PolyRing,
    PrimeField,
    Rationals,
    monomials_of_degree,
    poly_mul,
    ring_over,
)
from .seeds import PURPOSE_LINEAR_CUTS, Rng, derive_seed

DEFAULT_PAIR_BUDGET = 200_000
# Rank over Q is certified from below by ranking mod this prime: specializing
# can only lower rank, so a full rank mod p proves full rank over Q.
RANK_CHECK_PRIME = 2_147_483_629
_ELIMINATION_WEIGHT = 1 << 30
MONOMIAL_ORDER_TAG = "grevlex"


class BudgetExceededError(RuntimeError):
    """Raised when a Groebner computation exhausts its pair-reduction budget."""

    def __init__(self, budget: int, context: str):
        super().__init__(f"pair-reduction budget of {budget} exceeded during {context}")
        self.budget = budget
        self.context = context


@dataclass(frozen=True)
class IdealPresentation:
    """A ring together with generators (zero generators are dropped)."""

    ring: PolyRing
    generators: tuple

    def __post_init__(self):
        gens = tuple(g for g in self.generators if not g.is_zero())
        for g in gens:
            if g.ring != self.ring:
                raise ValueError("generators live in different rings")
        object.__setattr__(self, "generators", gens)


def ideal(ring: PolyRing, generators: Sequence[Polynomial]) -> IdealPresentation:
    return IdealPresentation(ring, tuple(generators))


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced basis under graded reverse lexicographic order."""

    ring: PolyRing
    basis: tuple
    order_tag: str = MONOMIAL_ORDER_TAG

    def is_unit_ideal(self) -> bool:
        return any(b.degree() == 0 for b in self.basis)


# -- monomial helpers ----------------------------------------------------------


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: tuple, b: tuple) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def normal_form(f: Polynomial, basis: Sequence[Polynomial]) -> Polynomial:
    """Full multivariate division remainder (every term reduced)."""
    ring = f.ring
    domain = ring.domain
    reducers = [
        (g.leading()[0], g.leading()[1], g) for g in basis if not g.is_zero()
    ]
    remainder: dict = {}
    work = f
    while not work.is_zero():
        exps, coeff = work.leading()
        hit = None
        for lead_exps, lead_coeff, g in reducers:
            if _divides(lead_exps, exps):
                hit = (lead_exps, lead_coeff, g)
                break
        if hit is None:
            remainder[exps] = coeff
            work = work - Polynomial(ring, {exps: coeff})
        else:
            lead_exps, lead_coeff, g = hit
            shift = tuple(b - a for a, b in zip(lead_exps, exps))
            factor = domain.div(coeff, lead_coeff)
            work = work - poly_mul(Polynomial(ring, {shift: factor}), g)
    return Polynomial(ring, remainder)


def _s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    ring = f.ring
    domain = ring.domain
    (fe, fc), (ge, gc) = f.leading(), g.leading()
    both = _lcm(fe, ge)
    f_mono = Polynomial(ring, {tuple(b - a for a, b in zip(fe, both)): domain.inv(fc)})
    g_mono = Polynomial(ring, {tuple(b - a for a, b in zip(ge, both)): domain.inv(gc)})
    return poly_mul(f_mono, f) - poly_mul(g_mono, g)


def groebner_basis(
    I: IdealPresentation, budget: int = DEFAULT_PAIR_BUDGET, context: str = "completion"
) -> GroebnerBasis:
    """Reduced Groebner basis by Buchberger completion.

    Pair selection follows the normal strategy (smallest lcm first, ties by
    index), with the product and chain criteria pruning useless pairs; the
    result is deterministic for a fixed input.  Each processed S-pair counts
    one step against ``budget``.
    """
    ring = I.ring
    basis: list = []
    seen = set()
    for g in I.generators:
        monic = g.monic()
        if monic not in seen:
            seen.add(monic)
            basis.append(monic)
    if not basis:
        return GroebnerBasis(ring, ())
    pending = {(i, j) for j in range(len(basis)) for i in range(j)}
    steps = 0

    def pair_key(pair):
        i, j = pair
        both = _lcm(basis[i].leading()[0], basis[j].leading()[0])
        return (ring.term_key(both), i, j)

    while pending:
        i, j = min(pending, key=pair_key)
        pending.discard((i, j))
        lead_i = basis[i].leading()[0]
        lead_j = basis[j].leading()[0]
        if _coprime(lead_i, lead_j):
            continue
        both = _lcm(lead_i, lead_j)
        chained = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if not _divides(basis[k].leading()[0], both):
                continue
            a = (min(i, k), max(i, k))
            b = (min(j, k), max(j, k))
            if a not in pending and b not in pending:
                chained = True
                break
        if chained:
            continue
        steps += 1
        if steps > budget:
            raise BudgetExceededError(budget, context)
        remainder = normal_form(_s_polynomial(basis[i], basis[j]), basis)
        if not remainder.is_zero():
            basis.append(remainder.monic())
            new = len(basis) - 1
            pending.update((k, new) for k in range(new))

    # Minimalize: drop members whose leading term another one divides.
    minimal: list = []
    for idx, g in enumerate(basis):
        lead = g.leading()[0]
        if any(
            _divides(other.leading()[0], lead)
            for k, other in enumerate(basis)
            if k != idx and not (k > idx and other.leading()[0] == lead)
        ):
            continue
        minimal.append(g)
    # Tail-reduce each member against the others.
    reduced: list = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        r = normal_form(g, others)
        if not r.is_zero():
            reduced.append(r.monic())
    reduced.sort(key=lambda p: ring.term_key(p.leading()[0]))
    return GroebnerBasis(ring, tuple(reduced))


def is_groebner_basis(gb: GroebnerBasis) -> bool:
    """Every S-polynomial of basis pairs reduces to zero."""
    basis = list(gb.basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if not normal_form(_s_polynomial(basis[i], basis[j]), basis).is_zero():
                return False
    return True


def ideal_contains(
    I: IdealPresentation, f: Polynomial, budget: int = DEFAULT_PAIR_BUDGET
) -> bool:
    gb = groebner_basis(I, budget, "membership test")
    if not gb.basis:
        return f.is_zero()
    return normal_form(f, gb.basis).is_zero()


def ideal_equal(
    I: IdealPresentation, J: IdealPresentation, budget: int = DEFAULT_PAIR_BUDGET
) -> bool:
    return (
        groebner_basis(I, budget, "equality test").basis
        == groebner_basis(J, budget, "equality test").basis
    )


# -- dimension -----------------------------------------------------------------


def ideal_dimension(I: IdealPresentation, budget: int = DEFAULT_PAIR_BUDGET) -> int:
    """Krull dimension of the affine zero set; -1 for the unit ideal.

    Equals the largest cardinality of a variable subset S such that no
    leading term of the reduced basis is supported inside S.
    """
    gb = groebner_basis(I, budget, "dimension computation")
    n = I.ring.nvars
    if not gb.basis:
        return n
    if gb.is_unit_ideal():
        return -1
    supports = [
        frozenset(k for k, e in enumerate(p.leading()[0]) if e) for p in gb.basis
    ]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            chosen = set(subset)
            if all(not support <= chosen for support in supports):
                return size
    return 0


# -- intersections, quotients, saturation --------------------------------------


def _exact_divide(h: Polynomial, f: Polynomial) -> Polynomial:
    """Quotient h / f when f divides h exactly."""
    ring = h.ring
    domain = ring.domain
    quotient: dict = {}
    work = h
    fe, fc = f.leading()
    while not work.is_zero():
        he, hc = work.leading()
        shift = tuple(b - a for a, b in zip(fe, he))
        if any(s < 0 for s in shift):
            raise ArithmeticError("exact division failed: not a multiple")
        q = domain.div(hc, fc)
        quotient[shift] = q
        work = work - poly_mul(Polynomial(ring, {shift: q}), f)
    return Polynomial(ring, quotient)


def ideal_intersection(
    I: IdealPresentation, J: IdealPresentation, budget: int = DEFAULT_PAIR_BUDGET
) -> IdealPresentation:
    """I ∩ J by the tag-variable trick with an elimination order.

    In k[t, z..] with t heaviest (so any monomial containing t beats any
    monomial without), I ∩ J = (t·I + (1−t)·J) ∩ k[z..], read off from the
    members of the reduced basis free of t.
    """
    ring = I.ring
    if J.ring != ring:
        raise ValueError("intersection across rings")
    tagged = ring_over(
        ("@t",) + ring.variables,
        ring.domain,
        (_ELIMINATION_WEIGHT,) + ring.weights,
    )

    def lift(p: Polynomial, t_exp: int) -> Polynomial:
        return Polynomial(tagged, {(t_exp,) + e: c for e, c in p.terms.items()})

    t = tagged.gen(0)
    one = tagged.one()
    gens = [poly_mul(t, lift(g, 0)) for g in I.generators]
    gens += [poly_mul(one - t, lift(g, 0)) for g in J.generators]
    gb = groebner_basis(IdealPresentation(tagged, tuple(gens)), budget, "intersection")
    kept = []
    for p in gb.basis:
        if p.leading()[0][0] == 0:  # elimination order: no t anywhere in p
            kept.append(Polynomial(ring, {e[1:]: c for e, c in p.terms.items()}))
    return IdealPresentation(ring, tuple(kept))


def ideal_quotient_by(
    J: IdealPresentation, f: Polynomial, budget: int = DEFAULT_PAIR_BUDGET
) -> IdealPresentation:
    """(J : f) = (J ∩ (f)) / f for a single nonzero f."""
    if f.is_zero():
        raise ValueError("quotient by zero")
    meet = ideal_intersection(J, IdealPresentation(J.ring, (f,)), budget)
    return IdealPresentation(J.ring, tuple(_exact_divide(h, f) for h in meet.generators))


def _quotient_by_origin_ideal(
    J: IdealPresentation, budget: int
) -> IdealPresentation:
    """(J : m) for the maximal ideal m of the origin: meet of (J : z_i)."""
    ring = J.ring
    result: Optional[IdealPresentation] = None
    for i in range(ring.nvars):
        partial = ideal_quotient_by(J, ring.gen(i), budget)
        result = partial if result is None else ideal_intersection(result, partial, budget)
    assert result is not None
    return result


def saturate_at_origin(
    J: IdealPresentation, budget: int = DEFAULT_PAIR_BUDGET
) -> IdealPresentation:
    """(J : m^∞): strips the primary components supported at the origin.

    Iterates the single quotient until it stabilizes; stabilization is
    detected on canonical reduced bases.  Requires every generator to
    vanish at the origin (the ideal cuts a set through it).
    """
    ring = J.ring
    for g in J.generators:
        if not ring.domain.is_zero(g.constant_coefficient()):
            raise ValueError("saturation expects generators vanishing at the origin")
    current = IdealPresentation(
        ring, groebner_basis(J, budget, "saturation").basis
    )
    while True:
        step = _quotient_by_origin_ideal(current, budget)
        canonical = IdealPresentation(
            ring, groebner_basis(step, budget, "saturation").basis
        )
        if canonical.generators == current.generators:
            return current
        current = canonical


# -- regularity certification ---------------------------------------------------


CERTIFIED_REGULAR = "CertifiedRegular"
REFUTED_AT_PREFIX = "RefutedAtPrefix"
INCONCLUSIVE = "Inconclusive"

METHOD_RANK = "linear-elimination+rank-certificate"
METHOD_SATURATION = "saturation-at-origin"


@dataclass(frozen=True)
class CutTrial:
    """One draw of random linear cuts for one prefix."""

    prefix: int
    trial: int
    cut_seed: int
    certified: bool
    method: str


@dataclass(frozen=True)
class PrefixEvidence:
    prefix: int
    certified: bool
    expected_dimension: int
    trials: tuple
    local_dimension: Optional[int] = None


@dataclass(frozen=True)
class RegularityVerdict:
    """Outcome of the prefix-by-prefix regularity test.

    A CertifiedRegular outcome is a proof: every prefix passed a sound
    isolation certificate.  RefutedAtPrefix(i) is Monte-Carlo evidence:
    the stated number of independent cut draws all failed for prefix i.
    Inconclusive means a resource budget was exhausted first.
    """

    outcome: str
    trial_count: int
    evidence: tuple
    refuted_prefix: Optional[int] = None
    message: str = ""

    def __post_init__(self):
        if self.outcome == REFUTED_AT_PREFIX and self.refuted_prefix is None:
            raise ValueError("refutation must name its prefix")
        if self.outcome == CERTIFIED_REGULAR:
            if any(not record.certified for record in self.evidence):
                raise ValueError("certification requires every prefix certified")

    @property
    def certified(self) -> bool:
        return self.outcome == CERTIFIED_REGULAR

    def describe(self) -> str:
        if self.outcome == REFUTED_AT_PREFIX:
            return f"{self.outcome}({self.refuted_prefix})"
        return self.outcome


def random_linear_cuts(ring: PolyRing, count: int, seed: int) -> list:
    """Deterministic random linear forms through the origin (none zero)."""
    rng = Rng(seed)
    domain = ring.domain
    cuts = []
    for _ in range(count):
        while True:
            coeffs = [domain.random(rng) for _ in range(ring.nvars)]
            if any(not domain.is_zero(c) for c in coeffs):
                break
        terms = {
            tuple(1 if k == i else 0 for k in range(ring.nvars)): c
            for i, c in enumerate(coeffs)
            if not domain.is_zero(c)
        }
        cuts.append(Polynomial(ring, terms))
    return cuts


def _coefficient_mod(value, p: int) -> int:
    if isinstance(value, Fraction):
        den = value.denominator % p
        if den == 0:
            raise ArithmeticError("denominator vanishes mod the rank-check prime")
        return value.numerator % p * pow(den, p - 2, p) % p
    return int(value) % p


def _reduced_row_echelon(rows: list, domain: Domain) -> tuple:
    """In-place RREF over an exact field; returns (rows, pivot column list)."""
    if not rows:
        return [], []
    ncols = len(rows[0])
    mat = [list(row) for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = next(
            (k for k in range(r, len(mat)) if not domain.is_zero(mat[k][c])), None
        )
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = domain.inv(mat[r][c])
        mat[r] = [domain.mul(x, inv) for x in mat[r]]
        for k in range(len(mat)):
            if k != r and not domain.is_zero(mat[k][c]):
                factor = mat[k][c]
                mat[k] = [
                    domain.sub(x, domain.mul(factor, y)) for x, y in zip(mat[k], mat[r])
                ]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def _has_full_column_rank(rows: list, ncols: int, p: int) -> bool:
    """Gaussian elimination mod p on an int matrix, vectorized.

    Entries stay in [0, p); products fit int64 because p^2 < 2^63.
    """
    if len(rows) < ncols:
        return False
    mat = np.array(rows, dtype=np.int64)
    r = 0
    for c in range(ncols):
        column = mat[r:, c]
        nonzero = np.nonzero(column)[0]
        if nonzero.size == 0:
            return False
        pivot = r + int(nonzero[0])
        if pivot != r:
            mat[[r, pivot]] = mat[[pivot, r]]
        inv = pow(int(mat[r, c]), p - 2, p)
        mat[r, c:] = mat[r, c:] * inv % p
        body = mat[r + 1 :, c:]
        factors = mat[r + 1 :, c]
        hot = np.nonzero(factors)[0]
        if hot.size:
            body[hot] = (body[hot] - factors[hot, None] * mat[r, c:][None, :]) % p
        r += 1
        if r == len(mat) and c + 1 < ncols:
            return False
    return True


def _certify_isolated_homogeneous(gens: Sequence[Polynomial], ring: PolyRing) -> bool:
    """Sound isolation certificate for a homogeneous ideal.

    Eliminates independent linear members by substitution, then checks that
    the top relevant graded piece of the quotient vanishes via one modular
    rank computation.  True is a proof that the origin is the whole zero
    set; False simply means this certificate did not fire.
    """
    domain = ring.domain
    n = ring.nvars
    linear_rows = []
    nonlinear = []
    for g in gens:
        if g.is_zero():
            continue
        if g.degree() == 1:
            row = [domain.zero] * n
            for exps, coeff in g.terms.items():
                row[exps.index(1)] = coeff
            linear_rows.append(row)
        else:
            nonlinear.append(g)
    rref, pivots = _reduced_row_echelon(linear_rows, domain)
    remaining = [i for i in range(n) if i not in pivots]
    if not remaining:
        return True  # the linear members alone cut the origin
    reduced_ring = ring_over(
        tuple(ring.variables[i] for i in remaining),
        domain,
        tuple(ring.weights[i] for i in remaining),
    )
    position = {var: k for k, var in enumerate(remaining)}
    images = []
    for i in range(n):
        if i in position:
            images.append(reduced_ring.gen(position[i]))
        else:
            row = rref[pivots.index(i)]
            terms = {}
            for j in remaining:
                if not domain.is_zero(row[j]):
                    exps = tuple(1 if k == position[j] else 0 for k in range(len(remaining)))
                    terms[exps] = domain.neg(row[j])
            images.append(Polynomial(reduced_ring, terms))
    reduced_gens = []
    for g in nonlinear:
        image = g.substitute(images)
        if not image.is_zero():
            reduced_gens.append(image)
    v = len(remaining)
    if len(reduced_gens) < v:
        return False  # too few equations for an isolated point
    cap = sum(g.degree() - 1 for g in reduced_gens) + 1
    columns = monomials_of_degree(reduced_ring, cap)
    column_index = {exps: k for k, exps in enumerate(columns)}
    p = domain.p if isinstance(domain, PrimeField) else RANK_CHECK_PRIME
    rows = []
    for g in reduced_gens:
        degree = g.degree()
        for shift in monomials_of_degree(reduced_ring, cap - degree):
            row = [0] * len(columns)
            for exps, coeff in g.terms.items():
                total = tuple(a + b for a, b in zip(exps, shift))
                row[column_index[total]] = _coefficient_mod(coeff, p)
            rows.append(row)
    return _has_full_column_rank(rows, len(columns), p)


def _origin_isolated_by_saturation(
    gens: Sequence[Polynomial], ring: PolyRing, budget: int
) -> bool:
    presentation = IdealPresentation(ring, tuple(gens))
    saturated = saturate_at_origin(presentation, budget)
    domain = ring.domain
    return any(
        not domain.is_zero(g.constant_coefficient()) for g in saturated.generators
    )


def regular_at_origin(
    sequence: Sequence[Polynomial],
    n: Optional[int] = None,
    trials: int = 5,
    seed: int = 0,
    budget: int = DEFAULT_PAIR_BUDGET,
) -> RegularityVerdict:
    """Certify or refute that the sequence is regular at the origin.

    For each prefix of length i, draws n - i random linear cuts through the
    origin and certifies the prefix when the origin is isolated in the
    combined zero set (then the local dimension is exactly n - i).  A prefix
    that fails ``trials`` independent draws is refuted with Monte-Carlo
    confidence; evidence records the observed local dimension next to the
    expected one.
    """
    if not sequence:
        raise ValueError("empty sequence")
    ring = sequence[0].ring
    if n is None:
        n = ring.nvars
    if n != ring.nvars:
        raise ValueError("stated variable count disagrees with the ring")
    if len(sequence) > n:
        raise ValueError(
            f"sequence of length {len(sequence)} cannot be regular in {n} variables"
        )
    domain = ring.domain
    for g in sequence:
        if g.ring != ring:
            raise ValueError("sequence entries live in different rings")
        if not domain.is_zero(g.constant_coefficient()):
            raise ValueError("every entry must vanish at the origin")
    if trials < 1:
        raise ValueError("at least one trial required")

    homogeneous = all(g.is_homogeneous() for g in sequence)
    evidence = []
    for i in range(1, len(sequence) + 1):
        prefix = list(sequence[:i])
        expected = n - i
        records = []
        certified = False
        for trial in range(1, trials + 1):
            cut_seed = derive_seed(seed, trial=trial, point=i, purpose=PURPOSE_LINEAR_CUTS)
            cuts = random_linear_cuts(ring, n - i, cut_seed)
            gens = prefix + cuts
            if homogeneous:
                ok = _certify_isolated_homogeneous(gens, ring)
                method = METHOD_RANK
            else:
                try:
                    ok = _origin_isolated_by_saturation(gens, ring, budget)
                except BudgetExceededError as error:
                    return RegularityVerdict(
                        outcome=INCONCLUSIVE,
                        trial_count=trials,
                        evidence=tuple(evidence),
                        message=str(error),
                    )
                method = METHOD_SATURATION
            records.append(
                CutTrial(
                    prefix=i, trial=trial, cut_seed=cut_seed, certified=ok, method=method
                )
            )
            if ok:
                certified = True
                break
        if certified:
            evidence.append(
                PrefixEvidence(
                    prefix=i,
                    certified=True,
                    expected_dimension=expected,
                    trials=tuple(records),
                )
            )
            continue
        # Refuted: annotate with the observed local dimension when affordable.
        local_dimension: Optional[int] = None
        try:
            local_dimension = ideal_dimension(
                IdealPresentation(ring, tuple(prefix)), budget
            )
        except BudgetExceededError:
            local_dimension = None
        evidence.append(
            PrefixEvidence(
                prefix=i,
                certified=False,
                expected_dimension=expected,
                trials=tuple(records),
                local_dimension=local_dimension,
            )
        )
        found = "unknown" if local_dimension is None else str(local_dimension)
        return RegularityVerdict(
            outcome=REFUTED_AT_PREFIX,
            trial_count=trials,
            evidence=tuple(evidence),
            refuted_prefix=i,
            message=(
                f"prefix {i}: local dimension {found}, expected {expected}; "
                f"high confidence ({trials} generic cuts failed)"
            ),
        )
    return RegularityVerdict(
        outcome=CERTIFIED_REGULAR,
        trial_count=trials,
        evidence=tuple(evidence),
    )
