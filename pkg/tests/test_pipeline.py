"""Quotient pipeline: golden regions, cross-oracle agreement, bound values.

The three golden regions were worked out by hand in image coordinates
(y1, y2) = (p1, p2), where the image of the sorted chamber is exactly
{y1² ≤ k·y2}:

* sphere p2 = 1: the image slice is the segment y2 = 1, |y1| ≤ √3 — one
  contractible piece, so (b0, b1) = (1, 0);
* shell 1 ≤ p2 ≤ 2: {max(1, y1²/3) ≤ y2 ≤ 2} is a curved trapezoid — (1, 0);
* four lines (p1 = ±1/2) ∨ (p2 ∈ {1/2, 3/2}): two vertical rails crossing
  two horizontal rungs form exactly one cycle — (1, 1).
"""

from fractions import Fraction

import pytest

from orbit_betti.cubical import BettiVector, FIELD_Q
from orbit_betti.pipeline import (
    BoundsReport,
    CheckResult,
    OrbitCount,
    PipelineError,
    ProblemSpec,
    QuotientReport,
    bounds_report,
    direct_quotient_betti,
    orbit_count_finite,
    quotient_betti,
    vanishing_threshold,
    verify_report,
)
from orbit_betti.polys import BlockSpec, parse_formula
from orbit_betti.powersums import SymmetryError


def make_spec(k, d, text, box, h, field=FIELD_Q):
    return ProblemSpec(
        blocks=BlockSpec.single(k, d),
        formula=parse_formula(text, k),
        clip_box=tuple(box),
        resolution=Fraction(h),
        field=field,
    )


SPHERE = "x1^2 + x2^2 + x3^2 = 1"
SHELL = "x1^2 + x2^2 + x3^2 >= 1 and x1^2 + x2^2 + x3^2 <= 2"
FOUR_LINES = (
    "x1 + x2 + x3 = -1/2 or x1 + x2 + x3 = 1/2 "
    "or x1^2 + x2^2 + x3^2 = 1/2 or x1^2 + x2^2 + x3^2 = 3/2"
)


# ---------------------------------------------------------------------------
# spec validation
# ---------------------------------------------------------------------------


def test_problem_spec_validation():
    with pytest.raises(PipelineError):
        ProblemSpec(
            blocks=BlockSpec.single(2, 2),
            formula=parse_formula("x1 + x2 + x3 >= 0", 3),
            clip_box=((-1, 1), (0, 1)),
            resolution=Fraction(1, 4),
        )
    with pytest.raises(PipelineError):
        make_spec(3, 2, "x1 + x2 + x3 >= 0", [(-1, 1)], "1/4")  # box dim
    with pytest.raises(PipelineError):
        make_spec(3, 2, "x1 + x2 + x3 >= 0", [(1, 1), (0, 1)], "1/4")  # empty edge
    with pytest.raises(PipelineError):
        make_spec(3, 2, "x1 + x2 + x3 >= 0", [(-1, 1), (0, 1)], "0")
    with pytest.raises(PipelineError):
        make_spec(3, 2, "x1 + x2 + x3 >= 0", [(-1, 1), (0, 1)], "1/4", field="R")
    with pytest.raises(PipelineError):
        # degree 3 polynomial under a degree-2 cap
        make_spec(3, 2, "x1^3 + x2^3 + x3^3 >= 0", [(-1, 1), (0, 1)], "1/4")


def test_quotient_rejects_asymmetric_formula():
    spec = make_spec(3, 2, "x1 >= 0", [(-1, 1), (0, 1)], "1/4")
    with pytest.raises(SymmetryError):
        quotient_betti(spec)


def test_quotient_rejects_large_image_dimension():
    spec = ProblemSpec(
        blocks=BlockSpec((3, 3), (3, 3)),
        formula=parse_formula("x1+x2+x3+x4+x5+x6 >= 0", 6),
        clip_box=tuple([(-1, 1)] * 6),
        resolution=Fraction(1, 4),
    )
    with pytest.raises(PipelineError):
        quotient_betti(spec)


# ---------------------------------------------------------------------------
# golden quotient computations
# ---------------------------------------------------------------------------


def test_sphere_quotient_is_contractible():
    spec = make_spec(3, 2, SPHERE, [(-2, 2), (0, 2)], "1/16")
    report = quotient_betti(spec)
    assert report.betti == (1, 0)
    assert report.stable
    assert report.vanishing_threshold == 2
    assert report.resolutions == (Fraction(1, 16), Fraction(1, 32))
    assert report.undecided_cells == 0


def test_shell_quotient_is_contractible():
    spec = make_spec(3, 2, SHELL, [(-3, 3), (0, 3)], "1/8")
    report = quotient_betti(spec)
    assert report.betti == (1, 0)
    assert report.stable


def test_four_lines_have_a_cycle():
    spec = make_spec(3, 2, FOUR_LINES, [(-3, 3), (-1, 3)], "1/16")
    report = quotient_betti(spec)
    assert report.betti == (1, 1)
    assert report.stable


def test_scale_invariance_of_sign_conditions():
    spec = make_spec(3, 2, SHELL, [(-3, 3), (0, 3)], "1/8")
    scaled = make_spec(
        3, 2,
        "3/2*x1^2 + 3/2*x2^2 + 3/2*x3^2 >= 3/2 and "
        "3/2*x1^2 + 3/2*x2^2 + 3/2*x3^2 <= 3",
        [(-3, 3), (0, 3)], "1/8",
    )
    assert quotient_betti(spec).betti == quotient_betti(scaled).betti


def test_redundant_tautology_atom_changes_nothing():
    base = make_spec(3, 2, SHELL, [(-3, 3), (0, 3)], "1/8")
    padded = make_spec(
        3, 2, SHELL + " and x1^2 + x2^2 + x3^2 + 1 >= 0",
        [(-3, 3), (0, 3)], "1/8",
    )
    assert quotient_betti(base).betti == quotient_betti(padded).betti


# ---------------------------------------------------------------------------
# direct chamber oracle
# ---------------------------------------------------------------------------


def test_direct_sphere_chamber_slice():
    spec = make_spec(3, 2, SPHERE, [(-2, 2), (0, 2)], "1/16")
    vec = direct_quotient_betti(spec, x_resolution=Fraction(1, 8))
    assert vec.values == (1, 0, 0, 0)


def test_direct_solid_ball():
    spec = make_spec(3, 2, "x1^2 + x2^2 + x3^2 <= 1", [(-2, 2), (0, 1)], "1/8")
    vec = direct_quotient_betti(spec, x_resolution=Fraction(1, 4))
    assert vec.values == (1, 0, 0, 0)


def test_direct_agrees_with_quotient_on_four_lines():
    spec = make_spec(3, 2, FOUR_LINES, [(-3, 3), (-1, 3)], "1/16")
    report = quotient_betti(spec)
    vec = direct_quotient_betti(spec, x_resolution=Fraction(1, 16))
    assert vec.values[:2] == report.betti == (1, 1)


def test_direct_requires_small_single_block():
    spec5 = ProblemSpec(
        blocks=BlockSpec.single(5, 2),
        formula=parse_formula("x1^2+x2^2+x3^2+x4^2+x5^2 <= 1", 5),
        clip_box=((-2, 2), (0, 1)),
        resolution=Fraction(1, 4),
    )
    with pytest.raises(PipelineError):
        direct_quotient_betti(spec5)
    multi = ProblemSpec(
        blocks=BlockSpec((2, 2), (2, 2)),
        formula=parse_formula("x1^2+x2^2 <= 1 and x3^2+x4^2 <= 1", 4),
        clip_box=((-2, 2), (0, 1), (-2, 2), (0, 1)),
        resolution=Fraction(1, 4),
    )
    with pytest.raises(PipelineError):
        direct_quotient_betti(multi)


def test_direct_needs_a_box_when_image_is_one_dimensional():
    spec = ProblemSpec(
        blocks=BlockSpec.single(3, 1),
        formula=parse_formula("x1 + x2 + x3 >= 0", 3),
        clip_box=((-1, 1),),
        resolution=Fraction(1, 4),
    )
    with pytest.raises(PipelineError):
        direct_quotient_betti(spec)
    vec = direct_quotient_betti(spec, x_box=[(-1, 1)] * 3, x_resolution=Fraction(1, 4))
    assert vec.values[0] == 1  # half-space slice of the cube is contractible


def test_direct_rejects_asymmetric_polynomials():
    spec = make_spec(3, 2, "x1 >= 0", [(-2, 2), (0, 1)], "1/4")
    with pytest.raises(PipelineError):
        direct_quotient_betti(spec, x_box=[(-1, 1)] * 3)


# ---------------------------------------------------------------------------
# orbit counting
# ---------------------------------------------------------------------------


def test_orbit_count_examples():
    assert orbit_count_finite([0, 1], 5) == OrbitCount(6, 6)
    assert orbit_count_finite([Fraction(1, 2)], 9).formula_value == 1
    assert orbit_count_finite(["1/3", "2/3", 1], 4) == OrbitCount(15, 15)


def test_orbit_count_formula_matches_enumeration():
    roots = [0, 1, Fraction(5, 2), -3]
    for r in range(1, 5):
        for k in range(1, 9):
            count = orbit_count_finite(roots[:r], k)
            assert count.agree, (r, k)


def test_orbit_count_validation():
    with pytest.raises(PipelineError):
        orbit_count_finite([1, 1], 3)
    with pytest.raises(PipelineError):
        orbit_count_finite([], 3)
    with pytest.raises(PipelineError):
        orbit_count_finite([0, 1], 0)
    with pytest.raises(PipelineError):
        orbit_count_finite(list(range(8)), 50)  # C(57,7) is way past the limit


# ---------------------------------------------------------------------------
# thresholds and bounds
# ---------------------------------------------------------------------------


def test_vanishing_threshold_values():
    assert vanishing_threshold(BlockSpec.single(10, 3)) == 3
    assert vanishing_threshold(BlockSpec((5, 7), (2, 9))) == 9
    assert vanishing_threshold(BlockSpec.single(3, 7)) == 3


def test_bounds_report_d2_k3():
    report = bounds_report(BlockSpec.single(3, 2), s=1)
    assert report.optm_algebraic == 18
    # sum over i in 0..3, j in 1..3-i of C(2,j) 6^j, times 18
    assert report.optm_closed == (48 + 48 + 12) * 18 == 1944
    assert report.F_value == 3
    # (c·s·d·d')^{d'} F = (1·1·2·2)^2 · 3
    assert report.thm_bound_form == 48
    assert report.chain_count_exact == 3
    assert report.vanishing_threshold == 2
    assert any("not pinned down" in note for note in report.notes)


def test_bounds_report_f_value_d4_k10():
    report = bounds_report(BlockSpec.single(10, 4), s=2)
    assert report.F_value == 105


def test_bounds_report_flags_chain_excess():
    # enumeration beats the closed form at (k, d) = (5, 3)
    report = bounds_report(BlockSpec.single(5, 3), s=1)
    assert report.F_value == 7
    assert report.chain_count_exact == 11
    assert any("authoritative" in note for note in report.notes)


def test_bounds_report_multi_block():
    blocks = BlockSpec((2, 3), (2, 2))
    report = bounds_report(blocks, s=2, constant_c=2.0)
    assert report.vanishing_threshold == 4
    assert report.optm_algebraic == 2 * 3**4
    assert report.F_value == 3 * 3
    assert report.multi_degree_form == 2**5 * 2**5 * 2**15 * (2**2 * 2**3)
    assert report.thm_bound_form > 0


def test_bounds_report_validation():
    with pytest.raises(PipelineError):
        bounds_report(BlockSpec.single(3, 2), s=0)
    with pytest.raises(PipelineError):
        bounds_report(BlockSpec.single(3, 2), s=1, constant_c=-1)


# ---------------------------------------------------------------------------
# verification checks
# ---------------------------------------------------------------------------


def test_verify_report_on_sphere():
    spec = make_spec(3, 2, SPHERE, [(-2, 2), (0, 2)], "1/16")
    report = quotient_betti(spec)
    direct = direct_quotient_betti(spec, x_resolution=Fraction(1, 8))
    checks = verify_report(report, direct)
    assert all(c.passed for c in checks)
    names = [c.name for c in checks]
    assert "direct_oracle_agreement" in names
    assert [c for c in checks if c.name == "betti_sum_within_bound_form"][0].informational


def test_verify_report_catches_fabricated_tail():
    spec = make_spec(3, 2, SPHERE, [(-2, 2), (0, 2)], "1/16")
    good = quotient_betti(spec)
    bad = QuotientReport(
        betti=good.betti,
        field=good.field,
        vanishing_threshold=good.vanishing_threshold,
        bounds=good.bounds,
        stable=good.stable,
        resolutions=good.resolutions,
        undecided_cells=good.undecided_cells,
        full_betti=BettiVector(FIELD_Q, (1, 0, 1), 2),
        coarse_betti=good.coarse_betti,
    )
    results = {c.name: c.passed for c in verify_report(bad)}
    assert results["vanishing_above_threshold"] is False


def test_report_json_round_trip_shape():
    spec = make_spec(3, 2, SPHERE, [(-2, 2), (0, 2)], "1/16")
    doc = quotient_betti(spec).to_json()
    assert doc["betti"] == [1, 0]
    assert doc["stable"] is True
    assert doc["bounds"]["optm_algebraic"] == 18
    assert doc["full_betti"]["field"] == "Q"
    assert doc["resolutions"] == [0.0625, 0.03125]
