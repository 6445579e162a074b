"""End-to-end quotient Betti numbers for symmetric semi-algebraic sets.

Given a closed formula Φ over symmetric polynomials of block-degree at most
d_i, the quotient S/𝔖_k is identified (up to homotopy) with the part of the
power-sum image where the rewritten formula holds.  The pipeline composes

    rewrite Φ to power-sum coordinates
    → membership oracle for the image of the sorted chamber
    → cubical homology on a clipped grid, at two resolutions

and reports b^0 .. b^{t−1}, where t = Σ min(k_i, d_i); every degree from t on
vanishes identically and is declared, not computed.

Two independent oracles keep the main path honest: ``direct_quotient_betti``
computes the homology of Φ ∩ {x_1 ≤ … ≤ x_k} in x-space for small k (each
orbit meets the sorted chamber exactly once), and ``orbit_count_finite``
counts orbits of finite configurations two ways.

Equality atoms are sampled by thickening: |P| ≤ τ with τ = (h/2) · L where L
bounds the ℓ¹-norm of ∇P on the box, so every grid cell meeting {P = 0}
contributes its center.  Inequality atoms are evaluated exactly at centers.
The reported homology is that of the clipped, thickened set; callers pick
clip boxes large enough to contain the region of interest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from orbit_betti.compositions import chain_count, comp_kd, paper_chain_bound
from orbit_betti.cubical import (
    BettiVector,
    FIELD_Q,
    FIELD_Z2,
    build_cubical,
    betti_numbers,
    stable_betti,
)
from orbit_betti.fibres import INSIDE, OUTSIDE, SolverConfig, image_membership
from orbit_betti.polys import (
    BlockSpec,
    ClosedFormula,
    FormulaNode,
    Interval,
    Polynomial,
    RationalLike,
    as_rational,
    interval_evaluate,
    multidegree,
)
from orbit_betti.powersums import check_symmetric, rewrite_formula

MAX_IMAGE_DIM = 4
ORBIT_ENUMERATION_LIMIT = 10**6


class PipelineError(ValueError):
    pass


# ---------------------------------------------------------------------------
# problem specification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProblemSpec:
    """A quotient-homology problem: blocks, defining formula, and grid data.

    ``clip_box`` lives in the image space R^{Σ d_i'} (power-sum coordinates,
    block-major); ``resolution`` is the coarse grid step — the pipeline also
    runs at half of it for the stability check.
    """

    blocks: BlockSpec
    formula: ClosedFormula
    clip_box: tuple[tuple[Fraction, Fraction], ...]
    resolution: Fraction
    field: str = FIELD_Q

    def __post_init__(self) -> None:
        if self.formula.k != self.blocks.total_vars:
            raise PipelineError(
                f"formula has {self.formula.k} variables, blocks have "
                f"{self.blocks.total_vars}"
            )
        box = tuple(
            (as_rational(lo), as_rational(hi)) for lo, hi in self.clip_box
        )
        object.__setattr__(self, "clip_box", box)
        for lo, hi in box:
            if lo >= hi:
                raise PipelineError(f"empty clip box edge [{lo}, {hi}]")
        expected = sum(self.blocks.d_primes)
        if len(box) != expected:
            raise PipelineError(
                f"clip box has {len(box)} edges, image space has {expected}"
            )
        object.__setattr__(self, "resolution", as_rational(self.resolution))
        if self.resolution <= 0:
            raise PipelineError("resolution must be positive")
        if self.field not in (FIELD_Q, FIELD_Z2):
            raise PipelineError(f"unknown field {self.field!r}")
        for poly in self.formula.polynomial_set:
            degrees = multidegree(poly, self.blocks)
            for deg, cap in zip(degrees, self.blocks.degree_caps):
                if deg > cap:
                    raise PipelineError(
                        f"{poly.to_text()} exceeds block degree cap {cap}"
                    )


# ---------------------------------------------------------------------------
# thickened formula sampling
# ---------------------------------------------------------------------------


def _gradient_bound(poly: Polynomial, box: Sequence[tuple[Fraction, Fraction]]) -> Fraction:
    """Bound on the ℓ¹ norm of ∇poly over the box, by interval arithmetic."""
    intervals = [Interval(lo, hi) for lo, hi in box]
    total = Fraction(0)
    for j in range(1, poly.var_count + 1):
        partial = poly.derivative(j)
        if partial.terms:
            total += interval_evaluate(partial, intervals).mag()
    return total


def _equality_taus(
    formula: ClosedFormula,
    box: Sequence[tuple[Fraction, Fraction]],
    h: Fraction,
) -> dict[Polynomial, float]:
    taus: dict[Polynomial, float] = {}
    for atom in formula.atoms():
        if atom.relation == "=" and atom.poly not in taus:
            lipschitz = _gradient_bound(atom.poly, box)
            tau = h / 2 * lipschitz if lipschitz > 0 else h / 2
            taus[atom.poly] = float(tau)
    return taus


def _formula_mask(
    formula: ClosedFormula,
    points: np.ndarray,
    taus: dict[Polynomial, float],
) -> np.ndarray:
    """Vectorised truth values of the thickened formula at an (N, k) array."""
    values: dict[Polynomial, np.ndarray] = {
        poly: poly.evaluate_float(points) for poly in formula.polynomial_set
    }

    def walk(node: FormulaNode) -> np.ndarray:
        if node.kind == "atom":
            atom = node.atom
            vals = values[atom.poly]
            if atom.relation == ">=":
                return vals >= 0.0
            if atom.relation == "<=":
                return vals <= 0.0
            return np.abs(vals) <= taus[atom.poly]
        masks = [walk(child) for child in node.children]
        out = masks[0]
        for m in masks[1:]:
            out = (out & m) if node.kind == "and" else (out | m)
        return out

    return walk(formula.root)


class _QuotientOracle:
    """Grid oracle in image space: thickened rewritten formula ∧ membership.

    The formula filter is vectorised and runs first; the (costlier) image
    membership test only sees the survivors.  Blocks with d' ≤ 2 have exact
    membership; higher blocks fall back to the fibre solver.
    """

    def __init__(
        self,
        blocks: BlockSpec,
        rewritten: ClosedFormula,
        clip_box: Sequence[tuple[Fraction, Fraction]],
        h: Fraction,
        membership_tol: float,
        config: SolverConfig,
    ) -> None:
        self.blocks = blocks
        self.rewritten = rewritten
        self.taus = _equality_taus(rewritten, clip_box, h)
        self.membership_tol = membership_tol
        self.config = config
        self._cache: dict[tuple[int, tuple[float, ...]], str] = {}
        offsets = []
        start = 0
        for dp in blocks.d_primes:
            offsets.append((start, start + dp))
            start += dp
        self.offsets = offsets

    def _block_membership(self, index: int, y: tuple[float, ...]) -> str:
        k = self.blocks.block_sizes[index]
        if len(y) == 1:
            return INSIDE
        if len(y) == 2:
            p1, p2 = Fraction(y[0]), Fraction(y[1])
            if p2 < 0 or p1 * p1 > k * p2:
                return OUTSIDE
            return INSIDE
        key = (index, y)
        if key not in self._cache:
            self._cache[key] = image_membership(
                k, self.blocks.degree_caps[index], list(y),
                tol=self.membership_tol, config=self.config,
            )
        return self._cache[key]

    def batch(self, points: np.ndarray) -> np.ndarray:
        mask = _formula_mask(self.rewritten, points, self.taus)
        codes = np.zeros(points.shape[0], dtype=np.int8)
        for idx in np.flatnonzero(mask):
            row = points[idx]
            verdict = INSIDE
            for b, (lo, hi) in enumerate(self.offsets):
                block_verdict = self._block_membership(
                    b, tuple(float(v) for v in row[lo:hi])
                )
                if block_verdict == OUTSIDE:
                    verdict = OUTSIDE
                    break
                if block_verdict != INSIDE:
                    verdict = block_verdict
            codes[idx] = {OUTSIDE: 0, INSIDE: 1}.get(verdict, 2)
        return codes


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

CHAIN_POSET_LIMIT = 5000


@dataclass(frozen=True)
class BoundsReport:
    """Explicit values of the published bound formulas, for comparison only.

    Entries built from big-O expressions carry the supplied constant ``c``
    and are flagged in ``notes``; nothing here is asserted against computed
    Betti numbers except informationally.
    """

    optm_algebraic: int
    optm_closed: int
    multi_degree_form: int
    thm_bound_form: int
    F_value: int
    chain_count_exact: int | None
    vanishing_threshold: int
    constant_c: float
    notes: tuple[str, ...]

    def __post_init__(self) -> None:
        values = [
            self.optm_algebraic, self.optm_closed, self.multi_degree_form,
            self.thm_bound_form, self.F_value, self.vanishing_threshold,
        ]
        if any(v < 0 for v in values):
            raise PipelineError("bound values must be nonnegative")

    def to_json(self) -> dict:
        return {
            "optm_algebraic": self.optm_algebraic,
            "optm_closed": self.optm_closed,
            "multi_degree_form": self.multi_degree_form,
            "thm_bound_form": self.thm_bound_form,
            "F_value": self.F_value,
            "chain_count_exact": self.chain_count_exact,
            "vanishing_threshold": self.vanishing_threshold,
            "constant_c": self.constant_c,
            "notes": list(self.notes),
        }


def vanishing_threshold(blocks: BlockSpec) -> int:
    """Every b^p with p ≥ Σ min(k_i, d_i) vanishes identically."""
    return sum(blocks.d_primes)


def bounds_report(blocks: BlockSpec, s: int, constant_c: float = 1.0) -> BoundsReport:
    """Evaluate the published bound expressions at these parameters.

    Big-O constants are replaced by ``constant_c`` and flagged; the exact
    chain count of the composition poset rides along for comparison with the
    closed-form F (which enumeration exceeds on some inputs).
    """
    if s < 1:
        raise PipelineError("s must be at least 1")
    if constant_c <= 0:
        raise PipelineError("constant must be positive")
    c = as_rational(constant_c)
    k_total = blocks.total_vars
    d_max = max(blocks.degree_caps)
    omega = blocks.omega

    optm_algebraic = d_max * (2 * d_max - 1) ** (k_total - 1)
    optm_closed = 0
    for i in range(k_total + 1):
        for j in range(1, k_total - i + 1):
            optm_closed += math.comb(s + 1, j) * 6**j * optm_algebraic

    multi = c**k_total * s**k_total * omega ** (3 * k_total)
    for k_i, d_i in zip(blocks.block_sizes, blocks.degree_caps):
        multi *= d_i**k_i
    multi_degree_form = math.ceil(multi)

    thm = Fraction(1)
    f_value = 1
    for k_i, d_i, dp_i in zip(blocks.block_sizes, blocks.degree_caps, blocks.d_primes):
        thm *= (c * omega**3 * s * d_i * dp_i) ** dp_i
        f_value *= paper_chain_bound(k_i, d_i)
    thm_bound_form = math.ceil(thm * f_value)

    chain_exact: int | None = 1
    notes = [
        f"big-O constants replaced by c = {float(constant_c)}; "
        "the absolute constant behind the O(.) is not pinned down"
    ]
    for k_i, d_i in zip(blocks.block_sizes, blocks.degree_caps):
        if len(comp_kd(k_i, min(k_i, d_i))) > CHAIN_POSET_LIMIT:
            chain_exact = None
            notes.append("chain poset too large for the exact count; F_value stands alone")
            break
        chain_exact *= chain_count(k_i, d_i)
    if chain_exact is not None and chain_exact > f_value:
        notes.append(
            f"exact chain count {chain_exact} exceeds the closed-form F {f_value}; "
            "the exact value is authoritative"
        )

    return BoundsReport(
        optm_algebraic=optm_algebraic,
        optm_closed=optm_closed,
        multi_degree_form=multi_degree_form,
        thm_bound_form=thm_bound_form,
        F_value=f_value,
        chain_count_exact=chain_exact,
        vanishing_threshold=vanishing_threshold(blocks),
        constant_c=float(constant_c),
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# main pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientReport:
    """Computed quotient Betti numbers b^0 .. b^{t−1} plus context.

    ``betti`` holds exactly the degrees below the vanishing threshold t; the
    full ambient vectors (fine and coarse grid) are retained for the
    structural checks in :func:`verify_report`.
    """

    betti: tuple[int, ...]
    field: str
    vanishing_threshold: int
    bounds: BoundsReport
    stable: bool
    resolutions: tuple[Fraction, Fraction]
    undecided_cells: int
    full_betti: BettiVector
    coarse_betti: BettiVector

    def to_json(self) -> dict:
        return {
            "betti": list(self.betti),
            "field": self.field,
            "vanishing_threshold": self.vanishing_threshold,
            "bounds": self.bounds.to_json(),
            "stable": self.stable,
            "resolutions": [float(h) for h in self.resolutions],
            "undecided_cells": self.undecided_cells,
            "full_betti": self.full_betti.to_json(),
            "coarse_betti": self.coarse_betti.to_json(),
        }


def quotient_betti(
    spec: ProblemSpec,
    constant_c: float = 1.0,
    membership_tol: float = 1e-9,
    config: SolverConfig = SolverConfig(),
) -> QuotientReport:
    """Betti numbers of the quotient, from the image-space region.

    The oracle region is {y in clip_box : y in image, Φ̃(y)}; homology is
    computed at ``spec.resolution`` and at half of it, and the agreement flag
    is reported (disagreement is a warning, not an error).
    """
    image_dim = sum(spec.blocks.d_primes)
    if image_dim > MAX_IMAGE_DIM:
        raise PipelineError(
            f"image dimension {image_dim} exceeds the grid limit {MAX_IMAGE_DIM}"
        )
    rewritten = rewrite_formula(spec.formula, spec.blocks)

    def factory(h: Fraction) -> _QuotientOracle:
        return _QuotientOracle(
            spec.blocks, rewritten, spec.clip_box, h, membership_tol, config
        )

    result = stable_betti(
        None,
        spec.clip_box,
        spec.resolution,
        field=spec.field,
        oracle_factory=factory,
    )
    threshold = vanishing_threshold(spec.blocks)
    return QuotientReport(
        betti=tuple(result.betti.values[:threshold]),
        field=spec.field,
        vanishing_threshold=threshold,
        bounds=bounds_report(spec.blocks, spec.formula.s, constant_c),
        stable=result.stable,
        resolutions=(spec.resolution, spec.resolution / 2),
        undecided_cells=result.undecided_cells,
        full_betti=result.betti,
        coarse_betti=result.coarse,
    )


class _ChamberOracle:
    """x-space oracle: thickened Φ on the sorted chamber x_1 ≤ … ≤ x_k."""

    def __init__(
        self,
        formula: ClosedFormula,
        box: Sequence[tuple[Fraction, Fraction]],
        h: Fraction,
    ) -> None:
        self.formula = formula
        self.taus = _equality_taus(formula, box, h)

    def batch(self, points: np.ndarray) -> np.ndarray:
        mask = _formula_mask(self.formula, points, self.taus)
        if points.shape[1] > 1:
            mask &= np.all(np.diff(points, axis=1) >= 0.0, axis=1)
        return mask.astype(np.int8)


def direct_quotient_betti(
    spec: ProblemSpec,
    x_box: Sequence[tuple[RationalLike, RationalLike]] | None = None,
    x_resolution: RationalLike | None = None,
) -> BettiVector:
    """Independent oracle: homology of Φ ∩ {x sorted} in x-space, k ≤ 4.

    Each orbit meets the sorted chamber exactly once, so this computes the
    same quotient without ever leaving the original variables.  The default
    box is the cube |x_i| ≤ r with r² just covering the clip box's p₂ range;
    pass ``x_box`` explicitly when the formula does not constrain p₂.
    """
    if spec.blocks.omega != 1:
        raise PipelineError("direct oracle handles a single block only")
    k = spec.blocks.total_vars
    if k > 4:
        raise PipelineError(f"direct oracle limited to k <= 4, got {k}")
    for poly in spec.formula.polynomial_set:
        if not check_symmetric(poly, spec.blocks):
            raise PipelineError(f"{poly.to_text()} is not symmetric")

    if x_box is None:
        if spec.blocks.d_primes[0] < 2:
            raise PipelineError(
                "cannot derive an x-box from a 1-dimensional image; pass x_box"
            )
        p2_hi = spec.clip_box[1][1]
        r = Fraction(math.isqrt(math.ceil(p2_hi)))
        while r * r < p2_hi:
            r += 1
        box = [(-r, r)] * k
    else:
        box = [(as_rational(lo), as_rational(hi)) for lo, hi in x_box]
        if len(box) != k:
            raise PipelineError(f"x-box needs {k} edges")
    h = as_rational(x_resolution) if x_resolution is not None else spec.resolution
    complex_ = build_cubical(_ChamberOracle(spec.formula, box, h), box, h)
    return betti_numbers(complex_, spec.field)


# ---------------------------------------------------------------------------
# independent oracles and report checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitCount:
    formula_value: int
    enumeration_value: int

    @property
    def agree(self) -> bool:
        return self.formula_value == self.enumeration_value


def orbit_count_finite(roots: Sequence[RationalLike], k: int) -> OrbitCount:
    """Orbits of k-tuples drawn from r fixed roots: C(k+r−1, r−1), twice.

    The formula value and a direct multiset enumeration are both returned so
    callers can compare them; they agree by stars and bars.
    """
    if k < 1:
        raise PipelineError("k must be positive")
    values = [as_rational(r) for r in roots]
    if len(set(values)) != len(values) or not values:
        raise PipelineError("roots must be a nonempty list of distinct rationals")
    r = len(values)
    formula_value = math.comb(k + r - 1, r - 1)
    if formula_value > ORBIT_ENUMERATION_LIMIT:
        raise PipelineError(
            f"enumeration of {formula_value} multisets exceeds the limit"
        )
    enumeration = sum(1 for _ in combinations_with_replacement(sorted(values), k))
    return OrbitCount(formula_value=formula_value, enumeration_value=enumeration)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    informational: bool
    detail: str

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "informational": self.informational,
            "detail": self.detail,
        }


def verify_report(
    report: QuotientReport,
    direct: BettiVector | None = None,
) -> list[CheckResult]:
    """Post-hoc findings on a completed report; never raises."""
    checks = []
    total = sum(report.betti)
    bound = report.bounds.thm_bound_form
    checks.append(
        CheckResult(
            name="betti_sum_within_bound_form",
            passed=total <= bound,
            informational=True,
            detail=(
                f"sum of reported Betti numbers {total} vs bound form {bound} "
                f"at c = {report.bounds.constant_c} (constant unspecified)"
            ),
        )
    )
    tail = report.full_betti.values[report.vanishing_threshold:]
    checks.append(
        CheckResult(
            name="vanishing_above_threshold",
            passed=all(v == 0 for v in tail),
            informational=False,
            detail=(
                f"ambient degrees >= {report.vanishing_threshold} carry {list(tail)}"
            ),
        )
    )
    checks.append(
        CheckResult(
            name="stable_across_resolutions",
            passed=report.stable,
            informational=False,
            detail=(
                f"grids at {report.resolutions[0]} and {report.resolutions[1]} "
                + ("agree" if report.stable else "disagree")
            ),
        )
    )
    if direct is not None:
        t = report.vanishing_threshold
        truncated = tuple(direct.values[:t])
        checks.append(
            CheckResult(
                name="direct_oracle_agreement",
                passed=truncated == report.betti,
                informational=False,
                detail=f"direct oracle {truncated} vs pipeline {report.betti}",
            )
        )
    return checks
