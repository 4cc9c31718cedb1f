"""Tests for cover instances, localization, sequences, members, arcs, sampling."""

from fractions import Fraction

import pytest

from cycover.cover import (
    ArcOrderRecord,
    ChartLocalization,
    CoverInstance,
    LocalizationError,
    MultiplicityReport,
    SampleBudgetError,
    UnsupportedInstanceError,
    admissible_hypertangent_levels,
    ambient_ring,
    arc_through_chart_origin,
    branch_truncation_check,
    chart_ring,
    default_arc_order,
    default_prime,
    hypertangent_member,
    hypertangent_multiplicity_check,
    instance_mod_p,
    localize,
    random_instance,
    regularity_sequence,
    sample_point_off_branch,
    sample_point_on_branch,
    smooth_at,
    validate_family,
    verify_regularity,
)
from cycover.modular import is_kth_power_residue
from cycover.poly import QQ, PrimeField, poly_eval
from cycover.regseq import CERTIFIED_REGULAR
from cycover.series import poly_on_series

WORKHORSE = validate_family(5, 4, 2, 2)


@pytest.fixture(scope="module")
def field_instance():
    p = default_prime(WORKHORSE)
    return random_instance(WORKHORSE, seed=42, domain=PrimeField(p))


@pytest.fixture(scope="module")
def off_chart(field_instance):
    return localize(field_instance, sample_point_off_branch(field_instance, seed=7))


@pytest.fixture(scope="module")
def on_chart(field_instance):
    return localize(field_instance, sample_point_on_branch(field_instance, seed=9))


@pytest.fixture(scope="module")
def off_setup(off_chart):
    arcs = [
        arc_through_chart_origin(off_chart, seed=100 + j, order_bound=default_arc_order(3))
        for j in range(4)
    ]
    return off_chart, arcs


@pytest.fixture(scope="module")
def on_setup(on_chart):
    arcs = [
        arc_through_chart_origin(on_chart, seed=200 + j, order_bound=default_arc_order(1))
        for j in range(4)
    ]
    return on_chart, arcs


def _quartic_instance(domain=QQ):
    """A hand instance of the workhorse family with simple charts.

    The base hypersurface passes through (1:0:...:0) and (0:1:1:0:...:0).
    """
    ring = ambient_ring(WORKHORSE, domain)
    x = ring.gens()
    base = x[0] ** 3 * x[1] + x[1] ** 4 - x[2] ** 4
    for i in range(3, 7):
        base = base + x[i] ** 4
    branch = x[0] ** 4 + x[1] ** 4 + x[2] ** 4
    return CoverInstance(family=WORKHORSE, base_form=base, branch_form=branch)


# ---------------------------------------------------------------------------
# Instance validation
# ---------------------------------------------------------------------------


class TestInstance:
    def test_valid_instance(self):
        inst = _quartic_instance()
        assert not inst.is_generalized
        assert inst.ring.nvars == 7

    def test_rejects_wrong_base_degree(self):
        ring = ambient_ring(WORKHORSE, QQ)
        x = ring.gens()
        with pytest.raises(ValueError) as err:
            CoverInstance(family=WORKHORSE, base_form=x[0] ** 3, branch_form=x[0] ** 4)
        assert "degree 4" in str(err.value)

    def test_rejects_inhomogeneous_branch(self):
        ring = ambient_ring(WORKHORSE, QQ)
        x = ring.gens()
        f = x[0] ** 4 + x[1] ** 4
        with pytest.raises(ValueError):
            CoverInstance(family=WORKHORSE, base_form=f, branch_form=x[0] ** 4 + x[1])

    def test_rejects_zero_forms(self):
        ring = ambient_ring(WORKHORSE, QQ)
        x = ring.gens()
        with pytest.raises(ValueError):
            CoverInstance(
                family=WORKHORSE, base_form=ring.zero(), branch_form=x[0] ** 4
            )

    def test_requires_exactly_one_branch_description(self):
        ring = ambient_ring(WORKHORSE, QQ)
        x = ring.gens()
        f = x[0] ** 4 + x[1] ** 4
        with pytest.raises(ValueError):
            CoverInstance(family=WORKHORSE, base_form=f)
        with pytest.raises(ValueError):
            CoverInstance(
                family=WORKHORSE,
                base_form=f,
                branch_form=x[0] ** 4,
                generalized_forms=(x[0] ** 2, x[0] ** 4),
            )

    def test_generalized_instance_carried_but_refused(self):
        ring = ambient_ring(WORKHORSE, QQ)
        x = ring.gens()
        f = x[0] ** 4 + x[1] ** 4
        inst = CoverInstance(
            family=WORKHORSE,
            base_form=f,
            generalized_forms=(x[0] ** 2 + x[1] ** 2, x[0] ** 4),
        )
        assert inst.is_generalized
        with pytest.raises(UnsupportedInstanceError):
            localize(inst, (0, 1, 0, 0, 0, 0, 0))

    def test_generalized_degree_validation(self):
        ring = ambient_ring(WORKHORSE, QQ)
        x = ring.gens()
        f = x[0] ** 4 + x[1] ** 4
        # first coefficient form must have degree branch_weight = 2
        with pytest.raises(ValueError):
            CoverInstance(
                family=WORKHORSE,
                base_form=f,
                generalized_forms=(x[0] ** 3, x[0] ** 4),
            )
        # last coefficient form must be nonzero
        with pytest.raises(ValueError):
            CoverInstance(
                family=WORKHORSE,
                base_form=f,
                generalized_forms=(x[0] ** 2, ring.zero()),
            )

    def test_mod_p_reduction(self):
        inst = _quartic_instance()
        reduced = instance_mod_p(inst, 101)
        assert isinstance(reduced.domain, PrimeField)
        assert reduced.base_form.degree() == 4
        assert reduced.family == inst.family

    def test_random_instance_respects_degrees(self):
        inst = random_instance(WORKHORSE, seed=5)
        assert inst.base_form.is_homogeneous()
        assert inst.base_form.degree() == 4
        assert inst.branch_form.degree() == 4

    def test_random_instance_deterministic(self):
        a = random_instance(WORKHORSE, seed=5)
        b = random_instance(WORKHORSE, seed=5)
        assert a.base_form == b.base_form
        assert a.branch_form == b.branch_form
        c = random_instance(WORKHORSE, seed=6)
        assert a.base_form != c.base_form


# ---------------------------------------------------------------------------
# Localization
# ---------------------------------------------------------------------------


class TestLocalize:
    def test_quadric_pieces(self):
        # base form x0*x1 + x2^2 for the family with base degree 2:
        # at (1:0:...:0) the chart pieces are exactly z1 and z2^2.
        fam = validate_family(5, 2, 4, 2)
        ring = ambient_ring(fam, QQ)
        x = ring.gens()
        base = x[0] * x[1] + x[2] ** 2
        branch = x[0] ** 8
        for i in range(1, 7):
            branch = branch + x[i] ** 8
        inst = CoverInstance(family=fam, base_form=base, branch_form=branch)
        chart = localize(inst, (1, 0, 0, 0, 0, 0, 0))
        z = chart.ring.gens()
        assert chart.pivot == 0
        assert chart.base_piece(1) == z[0]
        assert chart.base_piece(2) == z[1] * z[1]
        assert not chart.on_branch
        assert chart.branch_scale == 1
        assert chart.root_normalizer == 1

    def test_pieces_reconstruct_forms(self):
        inst = _quartic_instance()
        chart = localize(inst, (1, 0, 0, 0, 0, 0, 0))
        total = chart.ring.zero()
        for j in range(1, 5):
            total = total + chart.base_piece(j)
        assert total == chart.localized_base
        total = chart.ring.zero()
        for j in range(5):
            total = total + chart.branch_piece(j)
        assert total == chart.localized_branch

    def test_pivot_skips_zero_coordinates(self):
        inst = _quartic_instance()
        # f(0, 1, -1, 0, ..., 0) = 1 - 1 = 0 with x1 as pivot
        chart = localize(inst, (0, 1, 1, 0, 0, 0, 0))
        assert chart.pivot == 1
        assert chart.point[1] == 1

    def test_point_rescaled_to_pivot_one(self):
        inst = _quartic_instance()
        chart = localize(inst, (0, 2, 2, 0, 0, 0, 0))
        assert chart.point == (0, 1, 1, 0, 0, 0, 0)

    def test_rescale_off_branch(self):
        # g at the point is 2, so the localized branch form is divided by 2
        # and no rational square root of 2 exists.
        inst = _quartic_instance()
        chart = localize(inst, (0, 1, 1, 0, 0, 0, 0))
        assert not chart.on_branch
        assert chart.branch_scale == 2
        assert chart.branch_piece(0) == chart.ring.one()
        assert chart.root_normalizer is None

    def test_rational_root_recorded_when_perfect_power(self):
        fam = validate_family(5, 2, 4, 2)
        ring = ambient_ring(fam, QQ)
        x = ring.gens()
        base = x[0] * x[1] + x[2] ** 2
        branch = ring.const(Fraction(9, 4)) * x[0] ** 8 + x[1] ** 8
        inst = CoverInstance(family=fam, base_form=base, branch_form=branch)
        chart = localize(inst, (1, 0, 0, 0, 0, 0, 0))
        assert chart.branch_scale == Fraction(9, 4)
        assert chart.root_normalizer == Fraction(3, 2)

    def test_on_branch_flag(self):
        fam = validate_family(5, 2, 4, 2)
        ring = ambient_ring(fam, QQ)
        x = ring.gens()
        base = x[0] * x[1] + x[2] ** 2
        branch = x[2] * x[0] ** 7 + x[1] ** 8
        inst = CoverInstance(family=fam, base_form=base, branch_form=branch)
        chart = localize(inst, (1, 0, 0, 0, 0, 0, 0))
        assert chart.on_branch
        assert chart.branch_piece(0).is_zero()
        assert chart.root_normalizer is None
        z = chart.ring.gens()
        assert chart.branch_piece(1) == z[1]

    def test_rejects_point_off_hypersurface(self):
        inst = _quartic_instance()
        with pytest.raises(LocalizationError) as err:
            localize(inst, (1, 1, 0, 0, 0, 0, 0))
        assert "hypersurface" in str(err.value)

    def test_rejects_zero_vector(self):
        inst = _quartic_instance()
        with pytest.raises(LocalizationError):
            localize(inst, (0, 0, 0, 0, 0, 0, 0))

    def test_rejects_wrong_length(self):
        inst = _quartic_instance()
        with pytest.raises(LocalizationError):
            localize(inst, (1, 0, 0))

    def test_finite_field_localization(self):
        p = default_prime(WORKHORSE)
        inst = instance_mod_p(_quartic_instance(), p)
        chart = localize(inst, (1, 0, 0, 0, 0, 0, 0))
        assert not chart.on_branch
        assert chart.root_normalizer in (1, p - 1)


# ---------------------------------------------------------------------------
# Smoothness
# ---------------------------------------------------------------------------


class TestSmoothness:
    def test_smooth_off_branch(self):
        inst = _quartic_instance()
        assert smooth_at(localize(inst, (1, 0, 0, 0, 0, 0, 0)))

    def test_singular_when_linear_piece_vanishes(self):
        fam = validate_family(5, 2, 4, 2)
        ring = ambient_ring(fam, QQ)
        x = ring.gens()
        base = x[1] ** 2 + x[2] ** 2
        branch = x[0] ** 8
        inst = CoverInstance(family=fam, base_form=base, branch_form=branch)
        chart = localize(inst, (1, 0, 0, 0, 0, 0, 0))
        assert not smooth_at(chart)
        with pytest.raises(LocalizationError):
            regularity_sequence(chart)

    def test_on_branch_needs_independent_linear_pieces(self):
        fam = validate_family(5, 2, 4, 2)
        ring = ambient_ring(fam, QQ)
        x = ring.gens()
        base = x[0] * x[1] + x[2] ** 2
        # dependent: branch linear piece is a multiple of the base one
        dependent = CoverInstance(
            family=fam, base_form=base, branch_form=x[1] * x[0] ** 7
        )
        assert not smooth_at(localize(dependent, (1, 0, 0, 0, 0, 0, 0)))
        # independent: branch linear piece uses a different variable
        independent = CoverInstance(
            family=fam, base_form=base, branch_form=x[2] * x[0] ** 7
        )
        assert smooth_at(localize(independent, (1, 0, 0, 0, 0, 0, 0)))


# ---------------------------------------------------------------------------
# Regularity sequences
# ---------------------------------------------------------------------------


class TestRegularitySequence:
    def test_low_case_shape(self):
        # workhorse family: base degree 4 <= branch degree 4 gives the
        # low case with members q_1..q_4 and the degree-3 root piece.
        p = default_prime(WORKHORSE)
        inst = random_instance(WORKHORSE, seed=42, domain=PrimeField(p))
        pt = sample_point_off_branch(inst, seed=7)
        case = regularity_sequence(localize(inst, pt))
        assert case.tag == "R1a"
        assert len(case.members) == WORKHORSE.dimension
        degrees = [m.degree() for m in case.members]
        assert degrees == [1, 2, 3, 4, 3]

    def test_low_case_root_piece_value(self):
        # With two sheets the degree-3 root piece is
        # w3/2 - (w1/2)(w2/2 - w1^2/8) expanded: check the defining identity
        # (1 + F1 + F2 + F3)^2 = branch form through degree 3 instead.
        inst = _quartic_instance()
        chart = localize(inst, (0, 1, 1, 0, 0, 0, 0))
        case = regularity_sequence(chart)
        phi3 = case.members[-1]
        from cycover.series import truncated_kth_root
        from cycover.poly import truncate_degree

        root = truncated_kth_root(list(chart.branch_pieces[1:]), 2, 3)
        assert truncate_degree(root * root - chart.localized_branch, 3).is_zero()
        # the last member is the degree-3 piece of that root
        from cycover.poly import homogeneous_component

        assert phi3 == homogeneous_component(root, 3)

    def test_high_case_shape_and_certification(self):
        # smallest family with base degree above branch degree: (6,5,2,2)
        fam = validate_family(6, 5, 2, 2)
        p = default_prime(fam)
        inst = random_instance(fam, seed=2, domain=PrimeField(p))
        pt = sample_point_off_branch(inst, seed=3)
        case = regularity_sequence(localize(inst, pt))
        assert case.tag == "R1b"
        assert len(case.members) == fam.dimension
        degrees = [m.degree() for m in case.members]
        assert degrees == [1, 2, 3, 4, 3, 4]
        verdict = verify_regularity(case, seed=1)
        assert verdict.outcome == CERTIFIED_REGULAR

    def test_on_branch_shape(self):
        p = default_prime(WORKHORSE)
        inst = random_instance(WORKHORSE, seed=42, domain=PrimeField(p))
        pt = sample_point_on_branch(inst, seed=9)
        case = regularity_sequence(localize(inst, pt))
        assert case.tag == "R2"
        assert len(case.members) == WORKHORSE.base_degree + WORKHORSE.cover_degree
        degrees = [m.degree() for m in case.members]
        assert degrees == [1, 2, 3, 4, 1, 2]

    def test_workhorse_certifications(self):
        p = default_prime(WORKHORSE)
        inst = random_instance(WORKHORSE, seed=42, domain=PrimeField(p))
        off = regularity_sequence(localize(inst, sample_point_off_branch(inst, seed=7)))
        on = regularity_sequence(localize(inst, sample_point_on_branch(inst, seed=9)))
        assert verify_regularity(off, seed=3).outcome == CERTIFIED_REGULAR
        assert verify_regularity(on, seed=3).outcome == CERTIFIED_REGULAR

    def test_branch_weight_one_length_violation_is_explicit(self):
        # with branch weight 1 the on-branch sequence is longer than the
        # chart variable count, which the verifier rejects by name.
        fam = validate_family(5, 5, 1, 2)
        ring = ambient_ring(fam, QQ)
        x = ring.gens()
        base = x[0] ** 4 * x[1] + x[2] ** 5
        branch = x[0] * x[2]
        inst = CoverInstance(family=fam, base_form=base, branch_form=branch)
        case = regularity_sequence(localize(inst, (1, 0, 0, 0, 0, 0, 0)))
        assert case.tag == "R2"
        assert len(case.members) == 7  # exceeds the 6 chart variables
        with pytest.raises(ValueError) as err:
            verify_regularity(case)
        assert "cannot be regular" in str(err.value)


# ---------------------------------------------------------------------------
# Hypertangent members
# ---------------------------------------------------------------------------


class TestHypertangentMember:
    def test_admissible_levels(self):
        assert list(admissible_hypertangent_levels(WORKHORSE)) == [1, 2, 3]

    def test_level_one_is_multiple_of_linear_piece(self, off_chart):
        chart = off_chart
        member = hypertangent_member(chart, 1, seed=5)
        assert member.cover_part.is_zero()
        s0 = member.base_multipliers[0]
        assert (member.plain_part - s0 * chart.base_piece(1)).is_zero()

    def test_level_at_cover_degree_brings_cover_part(self, off_chart):
        chart = off_chart
        member = hypertangent_member(chart, 2, seed=5)
        assert len(member.root_multipliers) == 1
        assert member.cover_part == member.root_multipliers[0]
        # the plain part picks up minus the truncated root times s*_0
        from cycover.series import truncated_kth_root

        root2 = truncated_kth_root(list(chart.branch_pieces[1:]), 2, 2)
        expected = (
            member.base_multipliers[1] * chart.base_piece(1)
            + member.base_multipliers[0]
            * (chart.base_piece(1) + chart.base_piece(2))
            - member.root_multipliers[0] * root2
        )
        assert (member.plain_part - expected).is_zero()

    def test_member_vanishes_at_cover_origin(self, off_chart):
        # the chart origin on the cover has z = 0, y = 1
        chart = off_chart
        domain = chart.domain
        for level in admissible_hypertangent_levels(WORKHORSE):
            member = hypertangent_member(chart, level, seed=8)
            origin = [domain.zero] * chart.ring.nvars + [domain.one]
            assert poly_eval(member.polynomial, origin) == domain.zero

    def test_deterministic_in_seed(self, off_chart):
        a = hypertangent_member(off_chart, 3, seed=5)
        b = hypertangent_member(off_chart, 3, seed=5)
        c = hypertangent_member(off_chart, 3, seed=6)
        assert a.polynomial == b.polynomial
        assert a.polynomial != c.polynomial

    def test_rejects_out_of_range_levels(self, off_chart):
        with pytest.raises(ValueError):
            hypertangent_member(off_chart, 0, seed=1)
        with pytest.raises(ValueError):
            hypertangent_member(off_chart, 4, seed=1)

    def test_rejects_on_branch_chart(self):
        p = default_prime(WORKHORSE)
        inst = random_instance(WORKHORSE, seed=42, domain=PrimeField(p))
        chart = localize(inst, sample_point_on_branch(inst, seed=9))
        with pytest.raises(LocalizationError):
            hypertangent_member(chart, 1, seed=1)


# ---------------------------------------------------------------------------
# Arcs
# ---------------------------------------------------------------------------


class TestArcs:
    def test_default_order(self):
        assert default_arc_order(3) == 8

    def test_off_branch_arc_satisfies_both_equations(self, off_chart):
        arc = arc_through_chart_origin(off_chart, seed=100, order_bound=8)
        assert arc.order_bound == 8
        composed = poly_on_series(
            off_chart.localized_base,
            {n: s for n, s in arc.components.items() if n != "y"},
        )
        assert composed.order() is None
        y = arc.component("y")
        branch = poly_on_series(
            off_chart.localized_branch,
            {n: s for n, s in arc.components.items() if n != "y"},
        )
        assert (y.pow_int(2) - branch).order() is None
        # normalized sheet: y(0) = 1; chart components vanish at t = 0
        assert y[0] == off_chart.domain.one
        for name in off_chart.ring.variables:
            assert arc.component(name)[0] == off_chart.domain.zero

    def test_off_branch_arc_deterministic(self, off_chart):
        a = arc_through_chart_origin(off_chart, seed=100, order_bound=6)
        b = arc_through_chart_origin(off_chart, seed=100, order_bound=6)
        assert a.components == b.components

    def test_on_branch_arc_satisfies_both_equations(self, on_chart):
        K = WORKHORSE.cover_degree
        arc = arc_through_chart_origin(on_chart, seed=200, order_bound=6)
        composed = poly_on_series(
            on_chart.localized_base,
            {n: s for n, s in arc.components.items() if n != "y"},
        )
        assert composed.order() is None
        y = arc.component("y")
        branch = poly_on_series(
            on_chart.localized_branch,
            {n: s for n, s in arc.components.items() if n != "y"},
        )
        assert (y.pow_int(K) - branch).order() is None
        # on the branch the cover coordinate vanishes at t = 0
        assert y[0] == on_chart.domain.zero

    def test_on_branch_components_respect_cover_degree(self, on_chart):
        K = WORKHORSE.cover_degree
        arc = arc_through_chart_origin(on_chart, seed=200, order_bound=6)
        for name in on_chart.ring.variables:
            series = arc.component(name)
            for j, c in enumerate(series.coeffs):
                if j % K:
                    assert c == on_chart.domain.zero

    def test_residual_orders_recorded(self, off_chart):
        arc = arc_through_chart_origin(off_chart, seed=100, order_bound=6)
        assert arc.residual_orders == {"base": 7, "cover": 7}

    def test_rejects_tiny_order_bound(self, off_chart):
        with pytest.raises(ValueError):
            arc_through_chart_origin(off_chart, seed=1, order_bound=1)


# ---------------------------------------------------------------------------
# Order checks along arcs
# ---------------------------------------------------------------------------


class TestOrderChecks:
    def test_hypertangent_orders_meet_thresholds(self, off_setup):
        chart, arcs = off_setup
        for level in admissible_hypertangent_levels(WORKHORSE):
            member = hypertangent_member(chart, level, seed=11)
            report = hypertangent_multiplicity_check(member, arcs)
            assert report.threshold == level + 1
            assert report.fail_count == 0
            assert report.unresolved_count == 0
            assert report.pass_count == len(arcs)
            assert report.all_resolved_pass
            for record in report.records:
                assert record.order.exact
                assert record.order.value >= level + 1

    def test_branch_truncation_orders(self, on_setup):
        chart, arcs = on_setup
        report = branch_truncation_check(chart, 1, arcs)
        assert report.threshold == 2
        assert report.fail_count == 0
        assert report.pass_count == len(arcs)

    def test_branch_truncation_rejects_off_branch(self, off_setup):
        chart, arcs = off_setup
        with pytest.raises(LocalizationError):
            branch_truncation_check(chart, 1, arcs)

    def test_branch_truncation_level_range(self, on_setup):
        chart, arcs = on_setup
        with pytest.raises(ValueError):
            branch_truncation_check(chart, 0, arcs)
        with pytest.raises(ValueError):
            branch_truncation_check(chart, 2, arcs)  # cover degree 2: only k=1

    def test_unresolved_when_composition_vanishes_through_bound(self, off_setup):
        chart, arcs = off_setup
        # the localized base form vanishes along every arc through the
        # bound, so its order is only bounded below: unresolved, not a pass.
        from cycover.cover import _lift_to_extended, _extended_ring, _order_records

        extended = _extended_ring(chart)
        member = _lift_to_extended(chart.localized_base, extended)
        records = _order_records(member, arcs, threshold=2)
        assert all(r.status == "unresolved" for r in records)
        assert all(not r.order.exact and not r.order.infinite for r in records)

    def test_zero_member_passes_everywhere(self, off_setup):
        chart, arcs = off_setup
        from cycover.cover import _extended_ring, _order_records

        extended = _extended_ring(chart)
        records = _order_records(extended.zero(), arcs, threshold=100)
        assert all(r.status == "pass" for r in records)
        assert all(r.order.infinite for r in records)

    def test_failing_member_reported(self, off_setup):
        chart, arcs = off_setup
        # a generic linear form does not vanish to order 3 along an arc
        from cycover.cover import _extended_ring, _order_records

        extended = _extended_ring(chart)
        z1 = extended.gen(0)
        records = _order_records(z1, arcs, threshold=3)
        assert any(r.status == "fail" for r in records)
        report = MultiplicityReport(label="probe", threshold=3, records=records)
        assert not report.all_resolved_pass

    def test_three_sheet_branch_truncations(self):
        fam = validate_family(5, 2, 2, 3)
        p = default_prime(fam)
        inst = random_instance(fam, seed=1, domain=PrimeField(p))
        chart = localize(inst, sample_point_on_branch(inst, seed=4))
        arcs = [
            arc_through_chart_origin(chart, seed=300 + j, order_bound=default_arc_order(2))
            for j in range(3)
        ]
        for k in (1, 2):
            report = branch_truncation_check(chart, k, arcs)
            assert report.fail_count == 0
            assert report.pass_count == len(arcs)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


class TestSampling:
    def test_off_branch_point_properties(self, field_instance):
        p = field_instance.domain.p
        pt = sample_point_off_branch(field_instance, seed=7)
        assert poly_eval(field_instance.base_form, pt) == 0
        g = poly_eval(field_instance.branch_form, pt)
        assert g != 0
        assert is_kth_power_residue(g, WORKHORSE.cover_degree, p)

    def test_on_branch_point_properties(self, field_instance):
        pt = sample_point_on_branch(field_instance, seed=9)
        assert poly_eval(field_instance.base_form, pt) == 0
        assert poly_eval(field_instance.branch_form, pt) == 0
        assert any(c != 0 for c in pt)

    def test_sampling_deterministic(self, field_instance):
        assert sample_point_off_branch(field_instance, seed=7) == sample_point_off_branch(
            field_instance, seed=7
        )
        assert sample_point_on_branch(field_instance, seed=9) == sample_point_on_branch(
            field_instance, seed=9
        )

    def test_different_seeds_move_the_point(self, field_instance):
        points = {sample_point_off_branch(field_instance, seed=s) for s in range(5)}
        assert len(points) > 1

    def test_sampling_requires_prime_field(self):
        inst = _quartic_instance()
        with pytest.raises(ValueError):
            sample_point_off_branch(inst, seed=1)

    def test_sampling_requires_compatible_prime(self):
        fam = validate_family(5, 2, 2, 3)
        # 101 - 1 = 100 is not divisible by 3
        inst = random_instance(fam, seed=1, domain=PrimeField(101))
        with pytest.raises(ValueError) as err:
            sample_point_off_branch(inst, seed=1)
        assert "1 mod" in str(err.value)

    def test_off_branch_avoids_branch_locus(self, field_instance):
        for s in range(6):
            pt = sample_point_off_branch(field_instance, seed=s)
            assert poly_eval(field_instance.branch_form, pt) != 0
