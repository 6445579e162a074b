"""Symmetry detection and rewriting into power-sum coordinates.

A polynomial that is invariant under permuting the variables inside each
block, and whose degree in block i is at most the cap d_i, is a polynomial in
the Newton power sums

    p_{i,m} = sum of x_j^m over the variables of block i,   m = 1..min(k_i, d_i).

The rewrite here is exact and works by linear algebra: enumerate the monomials
in the admissible power sums up to the observed block degrees, expand each one
back into x-monomials, and solve the (consistent, full-column-rank) linear
system over the rationals.  Power sums of index up to min(k_i, d_i) are
algebraically independent, so the answer is unique — no normal-form or
straightening step is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from orbit_betti.polys import (
    BlockSpec,
    ClosedFormula,
    Polynomial,
    PolynomialError,
    SignAtom,
    multidegree,
)


class SymmetryError(ValueError):
    """Raised when a polynomial fails the block-symmetry or degree contract."""


@dataclass(frozen=True)
class PowerSumForm:
    """A polynomial rewritten in power-sum coordinates.

    ``block_arities[i]`` is the number of power sums taken from block i
    (that is min(k_i, d_i)); ``poly`` lives in sum(block_arities) variables
    ordered block-major: p_{1,1}, ..., p_{1,a_1}, p_{2,1}, ...
    """

    block_arities: tuple[int, ...]
    poly: Polynomial

    def __post_init__(self) -> None:
        if sum(self.block_arities) != self.poly.var_count:
            raise PolynomialError(
                "power-sum polynomial variable count does not match block arities"
            )

    def coordinates(self) -> list[tuple[int, int]]:
        """(block_index, power) per variable, both 1-based."""
        out = []
        for i, a in enumerate(self.block_arities, start=1):
            out.extend((i, m) for m in range(1, a + 1))
        return out


# ---------------------------------------------------------------------------
# symmetry check
# ---------------------------------------------------------------------------


def _swap_exponents(expo: tuple[int, ...], i: int, j: int) -> tuple[int, ...]:
    lst = list(expo)
    lst[i], lst[j] = lst[j], lst[i]
    return tuple(lst)


def check_symmetric(p: Polynomial, blocks: BlockSpec) -> bool:
    """Is ``p`` invariant under permutations within each block?

    Adjacent transpositions generate each symmetric factor, so invariance
    under those suffices.  The check is exact and term-wise.
    """
    if blocks.total_vars != p.var_count:
        raise PolynomialError(
            f"blocks cover {blocks.total_vars} variables, polynomial has {p.var_count}"
        )
    for b in range(blocks.omega):
        variables = blocks.block_variables(b)
        for u, v in zip(variables, variables[1:]):
            i, j = u - 1, v - 1
            for expo, coeff in p.terms.items():
                if p.terms.get(_swap_exponents(expo, i, j), Fraction(0)) != coeff:
                    return False
    return True


# ---------------------------------------------------------------------------
# rewrite
# ---------------------------------------------------------------------------


def power_sum_polynomial(blocks: BlockSpec, block_index: int, m: int) -> Polynomial:
    """p_{block,m} = sum of x_j^m over block ``block_index`` (0-based block)."""
    k = blocks.total_vars
    terms: dict[tuple[int, ...], Fraction] = {}
    for v in blocks.block_variables(block_index):
        expo = tuple(m if i == v - 1 else 0 for i in range(k))
        terms[expo] = Fraction(1)
    return Polynomial(k, terms)


def _weighted_monomials(arity: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors a for p_1^{a_1}..p_arity^{a_arity} with sum m*a_m <= degree."""
    out: list[tuple[int, ...]] = []

    def rec(position: int, remaining: int, prefix: tuple[int, ...]) -> None:
        if position > arity:
            out.append(prefix)
            return
        for a in range(remaining // position + 1):
            rec(position + 1, remaining - position * a, prefix + (a,))

    rec(1, degree, ())
    return out


def _solve_exact(columns: list[dict], target: dict) -> list[Fraction] | None:
    """Solve sum_j c_j * columns[j] == target over the rationals.

    Columns and target are sparse vectors keyed by x-exponent tuples.  Returns
    the coefficient list, or None when the system is inconsistent (which for
    us means the input was not in the span, i.e. not symmetric of the claimed
    degree).
    """
    keys = sorted(set(target) | {k for col in columns for k in col})
    rows = [[col.get(key, Fraction(0)) for col in columns] + [target.get(key, Fraction(0))] for key in keys]
    n_cols = len(columns)
    pivot_row = 0
    pivot_cols: list[int] = []
    for col in range(n_cols):
        pivot = next(
            (r for r in range(pivot_row, len(rows)) if rows[r][col] != 0), None
        )
        if pivot is None:
            continue
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        lead = rows[pivot_row][col]
        rows[pivot_row] = [v / lead for v in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[pivot_row])]
        pivot_cols.append(col)
        pivot_row += 1
    # inconsistency: a zero row with nonzero rhs
    for r in range(pivot_row, len(rows)):
        if rows[r][n_cols] != 0:
            return None
    solution = [Fraction(0)] * n_cols
    for r, col in enumerate(pivot_cols):
        solution[col] = rows[r][n_cols]
    return solution


def power_sum_rewrite(p: Polynomial, blocks: BlockSpec) -> PowerSumForm:
    """Express a block-symmetric polynomial in power-sum coordinates.

    Raises :class:`SymmetryError` when ``p`` is not block-symmetric or when
    its degree in some block exceeds that block's cap.
    """
    if blocks.total_vars != p.var_count:
        raise PolynomialError(
            f"blocks cover {blocks.total_vars} variables, polynomial has {p.var_count}"
        )
    degrees = multidegree(p, blocks)
    for i, (deg, cap) in enumerate(zip(degrees, blocks.degree_caps)):
        if deg > cap:
            raise SymmetryError(
                f"degree {deg} in block {i + 1} exceeds the cap {cap}"
            )
    if not check_symmetric(p, blocks):
        raise SymmetryError("polynomial is not symmetric under the block action")

    arities = blocks.d_primes
    # per-block admissible exponent vectors, then their cartesian product
    per_block = [
        _weighted_monomials(arities[i], degrees[i]) for i in range(blocks.omega)
    ]
    combos = list(product(*per_block))

    # expand each candidate monomial in the x-variables
    basis_cache: dict[tuple[int, int], Polynomial] = {}

    def psum(i: int, m: int) -> Polynomial:
        if (i, m) not in basis_cache:
            basis_cache[(i, m)] = power_sum_polynomial(blocks, i, m)
        return basis_cache[(i, m)]

    columns: list[dict] = []
    for combo in combos:
        expanded = Polynomial.constant(1, blocks.total_vars)
        for i, exponents in enumerate(combo):
            for m, a in enumerate(exponents, start=1):
                if a:
                    expanded = expanded * psum(i, m) ** a
        columns.append(expanded.terms)

    solution = _solve_exact(columns, p.terms)
    if solution is None:  # pragma: no cover - guarded by check_symmetric
        raise SymmetryError("polynomial is not in the power-sum span")

    n_y = sum(arities)
    offsets = [sum(arities[:i]) for i in range(blocks.omega)]
    terms: dict[tuple[int, ...], Fraction] = {}
    for combo, coeff in zip(combos, solution):
        if coeff == 0:
            continue
        expo = [0] * n_y
        for i, exponents in enumerate(combo):
            for m, a in enumerate(exponents, start=1):
                expo[offsets[i] + m - 1] = a
        terms[tuple(expo)] = coeff
    return PowerSumForm(arities, Polynomial(max(n_y, 1), terms))


def expand_power_sum_form(form: PowerSumForm, blocks: BlockSpec) -> Polynomial:
    """Inverse direction: substitute p_{i,m} back and expand in the x-variables."""
    if form.block_arities != blocks.d_primes:
        raise PolynomialError("form arities do not match the block spec")
    images = [
        power_sum_polynomial(blocks, i, m)
        for i, a in enumerate(form.block_arities)
        for m in range(1, a + 1)
    ]
    if not images:
        raise PolynomialError("empty power-sum coordinate list")
    return form.poly.substitute(images)


def rewrite_formula(f: ClosedFormula, blocks: BlockSpec) -> ClosedFormula:
    """Rewrite every atom of a block-symmetric formula into power sums.

    The AND/OR structure is preserved; the result is a closed formula over
    sum(min(k_i, d_i)) variables, ordered block-major.
    """
    if blocks.total_vars != f.k:
        raise PolynomialError(
            f"blocks cover {blocks.total_vars} variables, formula has k={f.k}"
        )
    n_y = sum(blocks.d_primes)

    def rewrite_atom(atom: SignAtom) -> SignAtom:
        form = power_sum_rewrite(atom.poly, blocks)
        return SignAtom(form.poly, atom.relation)

    return f.map_atoms(rewrite_atom, new_k=n_y)
