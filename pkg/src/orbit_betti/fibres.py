"""Chamber faces, fibres of the power-sum map, image membership, sections.

The ordered chamber x_1 ≤ x_2 ≤ ... ≤ x_k is stratified by compositions λ of
k: the face W_λ consists of points constant on each λ-group, with the parts
counting group sizes *from the largest coordinate down* — λ_1 is the
multiplicity of the top value.  A face is parametrized by strictly decreasing
values t_1 > ... > t_ℓ (ℓ = length λ), t_i carrying weight λ_i, so on a face
the m-th power sum becomes the weighted sum p_{λ,m}(t) = Σ λ_i t_i^m and a
fibre of the truncated power-sum map restricted to a face is the solution set
of

    Σ_i λ_i t_i^m = y_m,   m = 1..d',   t_1 ≥ ... ≥ t_ℓ.

Orienting the parts from the top is what makes the maximal faces (top part a
singleton, comp_max) the strata carrying the *maxima* of p_{d+1} on fibres;
grouping from the bottom instead would hand them the minima, the mirror image
under x ↦ -x.

The solver combines certified interval subdivision (directed rounding, so a
pruned box is *certified* to contain no solution) with damped Gauss-Newton
refinement for fast location.  Undecided boxes are counted and reported,
never dropped: membership answers are three-valued.

The section routine collects the per-face fibre solutions over the whole
face poset comp_kd(k, d'), deduplicates points that appear in several face
closures (a point with coarser grouping pattern lies in every finer face's
closure -- it is reported in its minimal face), and returns the candidate
maximizing the next power sum p_{d+1}.  Distinct candidates with values
tied within tolerance are flagged as ambiguous rather than resolved by fiat.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from orbit_betti.compositions import Composition, comp_kd, comp_max, precedes
from orbit_betti.polys import (
    ClosedFormula,
    FormulaNode,
    Polynomial,
    RationalLike,
    SignAtom,
    as_rational,
    conjunction,
)


class FibreError(ValueError):
    pass


# ---------------------------------------------------------------------------
# faces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Face:
    """The chamber face labelled by a composition of the ambient k."""

    lam: Composition
    ambient_k: int

    def __post_init__(self) -> None:
        if self.lam.k != self.ambient_k:
            raise FibreError(
                f"composition of {self.lam.k} cannot label a face in ambient k={self.ambient_k}"
            )

    @staticmethod
    def of(lam: Composition) -> "Face":
        return Face(lam, lam.k)

    @property
    def length(self) -> int:
        return self.lam.length

    def embed(self, t: Sequence) -> tuple:
        """The ascending chamber point of W_λ over decreasing parameters t.

        t_i is repeated λ_i times; since λ counts groups from the top, the
        concatenation runs from the largest value down and is reversed into
        chamber order.
        """
        parts = self.lam.parts
        if len(t) != len(parts):
            raise FibreError(f"expected {len(parts)} parameters, got {len(t)}")
        out: list = []
        for value, mult in zip(t, parts):
            out.extend([value] * mult)
        out.reverse()
        return tuple(out)

    def contains(self, x: Sequence, tol: float = 0.0) -> bool:
        """Is x in the closed face: nondecreasing, constant on each group?

        Groups are read from the top, so along the ascending coordinates the
        run lengths are the parts reversed.
        """
        if len(x) != self.ambient_k:
            raise FibreError(f"point has length {len(x)}, expected {self.ambient_k}")
        xs = [float(v) for v in x]
        if any(b - a < -tol for a, b in zip(xs, xs[1:])):
            return False
        pos = 0
        for mult in reversed(self.lam.parts):
            group = xs[pos : pos + mult]
            if max(group) - min(group) > tol:
                return False
            pos += mult
        return True

    def sample(self, rng: np.random.Generator, radius: float = 2.0) -> tuple:
        """A random point of the closed face (descending uniform parameters)."""
        t = np.sort(rng.uniform(-radius, radius, size=self.length))[::-1]
        return self.embed(tuple(float(v) for v in t))


def weighted_power_sum(lam: Composition, m: int, t: Sequence):
    """Σ_i λ_i t_i^m with t in the composition's own group order (descending);
    exact when the parameters are rational."""
    parts = lam.parts
    if len(t) != len(parts):
        raise FibreError(f"expected {len(parts)} parameters, got {len(t)}")
    if m < 1:
        raise FibreError("power index must be a positive integer")
    if all(isinstance(v, (int, Fraction)) for v in t):
        return sum(
            (w * as_rational(v) ** m for w, v in zip(parts, t)), Fraction(0)
        )
    return float(sum(w * float(v) ** m for w, v in zip(parts, t)))


def power_sum_vector(x: Sequence[RationalLike], m_max: int) -> tuple[Fraction, ...]:
    """Exact (p_1, ..., p_{m_max}) of a rational point (weights all 1)."""
    xs = [as_rational(v) for v in x]
    return tuple(sum((v**m for v in xs), Fraction(0)) for m in range(1, m_max + 1))


def face_coordinate_polynomials(lam: Composition, arity: int) -> list[Polynomial]:
    """The polynomials t ↦ Σ λ_i t_i^m for m = 1..arity, in ℓ variables."""
    ell = lam.length
    out = []
    for m in range(1, arity + 1):
        terms: dict[tuple[int, ...], Fraction] = {}
        for i, w in enumerate(lam.parts):
            expo = tuple(m if j == i else 0 for j in range(ell))
            terms[expo] = Fraction(w)
        out.append(Polynomial(ell, terms))
    return out


def chamber_formula(ell: int) -> ClosedFormula | None:
    """t_1 ≥ t_2 ≥ ... ≥ t_ℓ as a conjunction of atoms; None when ℓ = 1."""
    if ell < 2:
        return None
    atoms = []
    for i in range(1, ell):
        poly = Polynomial.variable(i, ell) - Polynomial.variable(i + 1, ell)
        atoms.append(FormulaNode("atom", atom=SignAtom(poly, ">=")))
    if len(atoms) == 1:
        root = atoms[0]
    else:
        root = FormulaNode("and", children=tuple(atoms))
    return ClosedFormula(ell, root)


def restrict_to_face(f: ClosedFormula, lam: Composition) -> ClosedFormula:
    """Substitute the face parametrization into a power-sum-space formula.

    ``f`` lives in the power-sum coordinates z_1..z_{d'}; each z_m is replaced
    by Σ λ_i t_i^m, and the chamber ordering atoms are conjoined.
    """
    images = face_coordinate_polynomials(lam, f.k)
    restricted = f.map_atoms(
        lambda atom: SignAtom(atom.poly.substitute(images), atom.relation),
        new_k=lam.length,
    )
    chamber = chamber_formula(lam.length)
    if chamber is None:
        return restricted
    return conjunction([restricted, chamber])


# ---------------------------------------------------------------------------
# fibre solutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FibreSolution:
    """A certified-residual point of a face fibre."""

    face: Face
    t: tuple[float, ...]
    residual: float

    def embedded(self) -> tuple[float, ...]:
        return tuple(float(v) for v in self.face.embed(self.t))

    @staticmethod
    def make(face: Face, t: Sequence[float], y: Sequence[float], tol: float) -> "FibreSolution":
        parts = face.lam.parts
        residual = max(
            abs(sum(w * tv**m for w, tv in zip(parts, t)) - float(ym))
            for m, ym in enumerate(y, start=1)
        )
        if residual > tol:
            raise FibreError(f"residual {residual} exceeds tolerance {tol}")
        if any(b - a > tol for a, b in zip(t, t[1:])):
            raise FibreError(f"parameters {t} violate the descending ordering beyond {tol}")
        return FibreSolution(face, tuple(float(v) for v in t), residual)


@dataclass(frozen=True)
class SolverConfig:
    """Tunables the underlying theory is silent about."""

    multistarts: int = 8
    dedup_factor: float = 10.0
    max_depth: int = 9
    max_boxes: int = 200_000
    max_newton_iter: int = 60
    seed: int = 20260814


@dataclass(frozen=True)
class FibreSearch:
    """Solutions plus the honest count of boxes the search could not settle."""

    solutions: tuple[FibreSolution, ...]
    undecided_boxes: int

    @property
    def certified_empty(self) -> bool:
        return not self.solutions and self.undecided_boxes == 0


# -- tiny dense linear algebra (ℓ ≤ 6, so hand-rolled beats array overhead) --


def _solve_linear(a: list[list[float]], b: list[float]) -> list[float] | None:
    n = len(b)
    m = [row[:] + [bv] for row, bv in zip(a, b)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(m[r][col]))
        if abs(m[pivot][col]) < 1e-300:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        lead = m[col][col]
        for r in range(n):
            if r != col and m[r][col] != 0.0:
                factor = m[r][col] / lead
                for c in range(col, n + 1):
                    m[r][c] -= factor * m[col][c]
    try:
        return [m[i][n] / m[i][i] for i in range(n)]
    except ZeroDivisionError:  # pragma: no cover
        return None


def _residual_vector(parts: tuple[int, ...], t: list[float], y: list[float]) -> list[float]:
    out = []
    for m in range(1, len(y) + 1):
        out.append(sum(w * tv**m for w, tv in zip(parts, t)) - y[m - 1])
    return out


def _gauss_newton(
    parts: tuple[int, ...],
    y: list[float],
    t0: Sequence[float],
    tol: float,
    radius: float,
    max_iter: int,
) -> tuple[list[float], float] | None:
    """Damped Gauss-Newton / Levenberg step on the weighted moment system.

    Returns (t, residual_inf) on convergence, None otherwise.  Singular
    Jacobians (points with coincident parameters) fall back to increasing
    Levenberg damping, which keeps the iteration contracting toward isolated
    double roots at a linear rate — good enough at these tolerances.
    """
    ell = len(parts)
    t = [float(v) for v in t0]
    res = _residual_vector(parts, t, y)
    rnorm = max(abs(v) for v in res)
    mu = 0.0
    for _ in range(max_iter):
        if rnorm <= tol * 0.5:
            break
        jac = [
            [m * parts[i] * t[i] ** (m - 1) for i in range(ell)]
            for m in range(1, len(y) + 1)
        ]
        # normal equations with damping: (JᵀJ + μI) δ = -Jᵀ r
        a = [
            [
                sum(jac[m][i] * jac[m][j] for m in range(len(y)))
                + (mu if i == j else 0.0)
                for j in range(ell)
            ]
            for i in range(ell)
        ]
        b = [-sum(jac[m][i] * res[m] for m in range(len(y))) for i in range(ell)]
        delta = _solve_linear(a, b)
        if delta is None:
            mu = max(mu * 10.0, 1e-10)
            continue
        accepted = False
        alpha = 1.0
        for _ in range(8):
            trial = [tv + alpha * dv for tv, dv in zip(t, delta)]
            trial_res = _residual_vector(parts, trial, y)
            trial_norm = max(abs(v) for v in trial_res)
            if trial_norm < rnorm * (1.0 - 1e-4 * alpha) or trial_norm <= tol * 0.25:
                t, res, rnorm = trial, trial_res, trial_norm
                mu *= 0.3
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            mu = max(mu * 10.0, 1e-10)
            if mu > 1e8:
                return None
        if max(abs(v) for v in t) > 3.0 * radius + 1.0:
            return None
    if rnorm <= tol:
        return t, rnorm
    return None


# -- certified float interval arithmetic (outward rounding) ------------------
#
# Box pruning must be rigorous — a pruned box is a claim that no solution
# exists there.  Exact rationals would do, but directed rounding on floats is
# just as sound and an order of magnitude faster at subdivision depths: round
# every lower bound toward -inf and every upper bound toward +inf.

_INF = math.inf


def _dn(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _pow_bounds(x: float, m: int) -> tuple[float, float]:
    """Certified enclosure of the point value x^m."""
    a = abs(x)
    lo_mag = hi_mag = a
    for _ in range(m - 1):
        lo_mag = _dn(lo_mag * a)
        hi_mag = _up(hi_mag * a)
    if x >= 0.0 or m % 2 == 0:
        return lo_mag, hi_mag
    return -hi_mag, -lo_mag


def _interval_pow(lo: float, hi: float, m: int) -> tuple[float, float]:
    """Certified enclosure of {t^m : lo ≤ t ≤ hi}."""
    if m == 1:
        return lo, hi
    plo, phi = _pow_bounds(lo, m)
    qlo, qhi = _pow_bounds(hi, m)
    if m % 2 == 1 or lo >= 0.0:
        return plo, qhi
    if hi <= 0.0:
        return qlo, phi
    return 0.0, max(phi, qhi)


def _chamber_feasible(box: list[tuple[float, float]]) -> bool:
    """Can t_1 ≥ ... ≥ t_ℓ hold with t_i in the i-th interval?"""
    running = _INF
    for lo, hi in box:
        if hi < running:
            running = hi
        if running < lo:
            return False
    return True


def _box_excludes_fibre(
    parts: tuple[int, ...],
    box: list[tuple[float, float]],
    y_exact: tuple[Fraction, ...],
) -> bool:
    """Does directed interval arithmetic refute some moment equation on the box?"""
    for m, target in enumerate(y_exact, start=1):
        total_lo = 0.0
        total_hi = 0.0
        for w, (lo, hi) in zip(parts, box):
            plo, phi = _interval_pow(lo, hi, m)
            total_lo = _dn(total_lo + _dn(w * plo))
            total_hi = _up(total_hi + _up(w * phi))
        if target < Fraction(total_lo) or target > Fraction(total_hi):
            return True
    return False


def solve_fibre(
    lam: Composition,
    y: Sequence[RationalLike],
    tol: float = 1e-9,
    box_radius: float | None = None,
    config: SolverConfig = SolverConfig(),
) -> FibreSearch:
    """All chamber solutions of Σ λ_i t_i^m = y_m, m = 1..len(y), t_1 ≥ ... ≥ t_ℓ.

    Interval subdivision over [-R, R]^ℓ intersected with the descending
    region; boxes certified empty by directed interval evaluation are pruned;
    Newton runs from box centers locate solutions early.  Boxes reaching the
    depth limit without certification or a nearby located solution are
    counted as undecided.
    """
    if tol <= 0:
        raise FibreError("tolerance must be positive")
    parts = lam.parts
    ell = len(parts)
    y_exact = tuple(as_rational(v) for v in y)
    y_float = [float(v) for v in y_exact]
    d_prime = len(y_float)
    if d_prime < 1:
        raise FibreError("need at least one prescribed power sum")

    # exact one-parameter linear case: k t = y_1
    if ell == 1 and d_prime >= 1:
        t_exact = y_exact[0] / parts[0]
        ok = all(
            parts[0] * t_exact**m == target for m, target in enumerate(y_exact, 1)
        )
        if ok:
            sol = FibreSolution.make(
                Face.of(lam), (float(t_exact),), y_float, max(tol, 1e-300)
            )
            return FibreSearch((sol,), 0)
        # fall through to interval logic only to certify emptiness honestly
        t_float = float(t_exact)
        residual = max(
            abs(parts[0] * t_float**m - ym) for m, ym in enumerate(y_float, 1)
        )
        if residual <= tol:
            return FibreSearch(
                (FibreSolution(Face.of(lam), (t_float,), residual),), 0
            )
        return FibreSearch((), 0)

    if box_radius is None:
        if d_prime >= 2:
            box_radius = math.sqrt(max(y_float[1], 0.0)) + 1.0
        else:
            raise FibreError(
                "box_radius is required when y_2 is not prescribed and ℓ > 1"
            )
    radius = float(box_radius)
    min_width = max(radius / 2**config.max_depth, tol)
    rng = np.random.default_rng(config.seed)

    face = Face.of(lam)
    solutions: list[tuple[list[float], float]] = []
    dedup_radius = config.dedup_factor * tol

    def record(t: list[float], residual: float) -> None:
        if any(b - a > tol for a, b in zip(t, t[1:])):
            return
        if max(abs(v) for v in t) > radius + max(1e-9, 1e-6 * radius):
            return
        for idx, (old_t, old_res) in enumerate(solutions):
            if max(abs(a - b) for a, b in zip(t, old_t)) <= dedup_radius:
                if residual < old_res:
                    solutions[idx] = (t, residual)
                return
        solutions.append((t, residual))

    def try_newton(start: Sequence[float]) -> list[float] | None:
        """Run damped Newton; record and return the limit (or None)."""
        hit = _gauss_newton(parts, y_float, start, tol, radius, config.max_newton_iter)
        if hit is None:
            return None
        record(*hit)
        return hit[0]

    queue: deque[list[tuple[float, float]]] = deque()
    queue.append([(-radius, radius) for _ in range(ell)])
    undecided = 0
    processed = 0

    while queue:
        if processed >= config.max_boxes:
            undecided += len(queue)
            break
        processed += 1
        box = queue.popleft()
        if not _chamber_feasible(box):
            continue
        if _box_excludes_fibre(parts, box, y_exact):
            continue
        center = [0.5 * (lo + hi) for lo, hi in box]
        center_limit = try_newton(center)
        widths = [hi - lo for lo, hi in box]
        widest = max(range(ell), key=widths.__getitem__)
        if widths[widest] <= min_width:
            # A leaf box counts as resolved when Newton launched from its own
            # interior converges: its residual flow drains to a located
            # solution, so the box owes its interval-arithmetic survival to
            # that solution (per-equation enclosures cannot separate nearby
            # level sets of the different moments).  Otherwise multistart;
            # only a box where every start diverges stays unresolved.
            if center_limit is not None:
                continue
            landed = False
            for _ in range(config.multistarts):
                start = [rng.uniform(lo, hi) for lo, hi in box]
                if try_newton(start) is not None:
                    landed = True
                    break
            if not landed:
                undecided += 1
            continue
        mid = 0.5 * (box[widest][0] + box[widest][1])
        left = box[:]
        right = box[:]
        left[widest] = (box[widest][0], mid)
        right[widest] = (mid, box[widest][1])
        queue.append(left)
        queue.append(right)

    out = [
        FibreSolution(face, tuple(t), res)
        for t, res in sorted(solutions, key=lambda s: s[0])
    ]
    return FibreSearch(tuple(out), undecided)


# ---------------------------------------------------------------------------
# image membership
# ---------------------------------------------------------------------------

INSIDE = "inside"
OUTSIDE = "outside"
UNDECIDED = "undecided"


def _newton_probe(
    lam: Composition,
    y_float: list[float],
    tol: float,
    radius: float,
    config: SolverConfig,
) -> FibreSolution | None:
    """Cheap multistart Newton on one face; None means 'nothing found'."""
    parts = lam.parts
    ell = len(parts)
    if ell == 1:
        t = y_float[0] / parts[0]
        residual = max(abs(parts[0] * t**m - ym) for m, ym in enumerate(y_float, 1))
        if residual <= tol:
            return FibreSolution(Face.of(lam), (t,), residual)
        return None
    rng = np.random.default_rng(config.seed + 1)
    starts = [[0.0] * ell]
    mean = y_float[0] / lam.k
    starts.append([mean] * ell)
    for _ in range(config.multistarts):
        starts.append(sorted(rng.uniform(-radius, radius, size=ell).tolist(), reverse=True))
    for start in starts:
        hit = _gauss_newton(parts, y_float, start, tol, radius, config.max_newton_iter)
        if hit is None:
            continue
        t, residual = hit
        if any(b - a > tol for a, b in zip(t, t[1:])):
            continue
        if max(abs(v) for v in t) > radius + max(1e-9, 1e-6 * radius):
            continue
        return FibreSolution(Face.of(lam), tuple(t), residual)
    return None


def image_membership(
    k: int,
    d: int,
    y: Sequence[RationalLike],
    tol: float = 1e-9,
    config: SolverConfig = SolverConfig(),
) -> str:
    """Is y in the image of the chamber under the truncated power-sum map?

    Three-valued: "inside" needs one face fibre solution; "outside" needs
    every face of comp_kd(k, d') certified empty by exact intervals;
    anything else is "undecided".
    """
    if k < 1 or d < 1:
        raise FibreError("k and d must be positive")
    d_prime = min(k, d)
    y = list(y)
    if len(y) != d_prime:
        raise FibreError(f"expected {d_prime} power sums, got {len(y)}")
    if d_prime == 1:
        # p_1 is onto: x = (c, ..., c) with c = y_1/k
        return INSIDE
    y_exact = [as_rational(v) for v in y]
    # exact necessary conditions: p_2 ≥ 0 and Cauchy-Schwarz p_1² ≤ k p_2
    if y_exact[1] < 0:
        return OUTSIDE
    if y_exact[0] ** 2 > k * y_exact[1]:
        return OUTSIDE
    if d_prime == 2:
        # exact converse: any (p1, p2) with p1² ≤ k p2 is realised by a
        # two-value configuration with the right mean and variance
        return INSIDE
    y_float = [float(v) for v in y_exact]
    radius = math.sqrt(max(y_float[1], 0.0)) + 1.0

    faces = comp_kd(k, d_prime)
    # longer faces first: generic points live there, so the cheap probe
    # usually answers immediately
    faces.sort(key=lambda c: (-c.length, c.parts))
    for lam in faces:
        if _newton_probe(lam, y_float, tol, radius, config) is not None:
            return INSIDE

    any_undecided = False
    for lam in faces:
        search = solve_fibre(lam, y_exact, tol=tol, config=config)
        if search.solutions:
            return INSIDE
        if search.undecided_boxes:
            any_undecided = True
    return UNDECIDED if any_undecided else OUTSIDE


# ---------------------------------------------------------------------------
# the section: maximize p_{d+1} over the located fibre candidates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectionResult:
    solution: FibreSolution
    x: tuple[float, ...]
    value: float
    ambiguous: bool
    candidates: int


def arnold_section(
    k: int,
    d: int,
    y: Sequence[RationalLike],
    tol: float = 1e-9,
    config: SolverConfig = SolverConfig(),
) -> SectionResult:
    """The distinguished fibre point: maximal p_{d+1} among face candidates.

    Candidates are the fibre solutions over every face in comp_kd(k, d').  A
    point whose grouping pattern is coarser than the face it was found in is
    the same geometric point as its copy in the coarser face, so candidates
    are deduplicated on their embedded coordinates (radius √tol — position
    error scales like the square root of the residual at tangential double
    roots) and reported in their minimal face.  Genuinely distinct candidates
    tied in value within tolerance set the ``ambiguous`` flag.
    """
    if not d < k:
        raise FibreError(f"section requires d < k, got d={d}, k={k}")
    d_prime = min(k, d)
    status = image_membership(k, d, y, tol=tol, config=config)
    if status != INSIDE:
        raise FibreError(f"image membership is {status}, not inside")
    y_exact = [as_rational(v) for v in y]

    raw: list[FibreSolution] = []
    for lam in comp_kd(k, d_prime):
        search = solve_fibre(lam, y_exact, tol=tol, config=config)
        raw.extend(search.solutions)
    if not raw:
        # membership said inside via the probe; re-probe to get the witness
        radius = (
            math.sqrt(max(float(y_exact[1]), 0.0)) + 1.0 if d_prime >= 2 else 2.0
        )
        for lam in comp_kd(k, d_prime):
            hit = _newton_probe(lam, [float(v) for v in y_exact], tol, radius, config)
            if hit is not None:
                raw.append(hit)
    if not raw:
        raise FibreError("no fibre candidates located despite inside membership")

    dedup_radius = max(config.dedup_factor * tol, math.sqrt(tol))
    groups: list[list[FibreSolution]] = []
    for sol in raw:
        x = sol.embedded()
        for group in groups:
            gx = group[0].embedded()
            if max(abs(a - b) for a, b in zip(x, gx)) <= dedup_radius:
                group.append(sol)
                break
        else:
            groups.append([sol])

    candidates: list[tuple[float, FibreSolution]] = []
    for group in groups:
        # minimal face first, then lowest residual
        group.sort(key=lambda s: (s.face.length, s.residual))
        best = group[0]
        value = float(
            sum(w * tv ** (d + 1) for w, tv in zip(best.face.lam.parts, best.t))
        )
        candidates.append((value, best))
    candidates.sort(key=lambda c: -c[0])

    top_value, top = candidates[0]
    tie_tol = max(100.0 * tol, 1e-6)
    ambiguous = len(candidates) > 1 and (top_value - candidates[1][0]) <= tie_tol
    return SectionResult(
        solution=top,
        x=top.embedded(),
        value=top_value,
        ambiguous=ambiguous,
        candidates=len(candidates),
    )


def section_faces(k: int, d: int) -> list[Composition]:
    """The faces a section can land in (re-export for reporting layers)."""
    return comp_kd(k, min(k, d))


def is_below_some_maximal(lam: Composition, k: int, d: int) -> bool:
    return any(precedes(lam, top) for top in comp_max(k, min(k, d)))
