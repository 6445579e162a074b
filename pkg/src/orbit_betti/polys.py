"""Exact sparse multivariate polynomials, closed sign formulas, and interval
evaluation.

Everything symbolic in this package flows through :class:`Polynomial`:
coefficients are exact ``fractions.Fraction`` values, terms are kept in a
sparse exponent-tuple map, and the printable form uses a graded-lexicographic
term order so that equal polynomials have equal strings (deduplication of the
defining family of a formula is syntactic).

Formulas are *closed*: atoms are ``P >= 0``, ``P <= 0`` or ``P = 0`` combined
with ``and`` / ``or`` only.  Negations and strict inequalities are rejected at
parse time — the sets we feed to the homology stages must be closed, and the
quotient theory downstream is stated for exactly this class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

import numpy as np

Rational = Fraction
RationalLike = Union[Fraction, int, str, float]

RELATIONS = (">=", "<=", "=")


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, strings like ``"3/4"``, and floats to exact fractions.

    Floats are converted via ``Fraction(value)`` (exact binary value), which
    is what callers holding grid coordinates want.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value)
    return Fraction(value)


class PolynomialError(ValueError):
    """Raised for dimension mismatches and malformed polynomial input."""


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Polynomial:
    """Sparse multivariate polynomial over the rationals.

    ``terms`` maps exponent tuples (length ``var_count``) to nonzero Fraction
    coefficients.  Instances are treated as immutable; all arithmetic returns
    new objects.
    """

    __slots__ = ("var_count", "terms", "_hash")

    def __init__(self, var_count: int, terms: dict[tuple[int, ...], Fraction] | None = None):
        if var_count < 1:
            raise PolynomialError("var_count must be >= 1")
        clean: dict[tuple[int, ...], Fraction] = {}
        for expo, coeff in (terms or {}).items():
            if len(expo) != var_count:
                raise PolynomialError(
                    f"exponent tuple {expo} has length {len(expo)}, expected {var_count}"
                )
            c = as_rational(coeff)
            if c != 0:
                clean[tuple(int(e) for e in expo)] = c
        self.var_count = var_count
        self.terms = clean
        self._hash: int | None = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(value: RationalLike, var_count: int) -> "Polynomial":
        c = as_rational(value)
        if c == 0:
            return Polynomial(var_count, {})
        return Polynomial(var_count, {(0,) * var_count: c})

    @staticmethod
    def variable(index: int, var_count: int) -> "Polynomial":
        """The monomial x_{index}, with 1-based index."""
        if not 1 <= index <= var_count:
            raise PolynomialError(f"variable index {index} out of range 1..{var_count}")
        expo = tuple(1 if i == index - 1 else 0 for i in range(var_count))
        return Polynomial(var_count, {expo: Fraction(1)})

    # -- ring operations ----------------------------------------------

    def _check_same_space(self, other: "Polynomial") -> None:
        if self.var_count != other.var_count:
            raise PolynomialError(
                f"variable count mismatch: {self.var_count} vs {other.var_count}"
            )

    def __add__(self, other: "Polynomial | RationalLike") -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.var_count)
        self._check_same_space(other)
        terms = dict(self.terms)
        for expo, coeff in other.terms.items():
            acc = terms.get(expo, Fraction(0)) + coeff
            if acc == 0:
                terms.pop(expo, None)
            else:
                terms[expo] = acc
        return Polynomial(self.var_count, terms)

    def __radd__(self, other: RationalLike) -> "Polynomial":
        return self.__add__(other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.var_count, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial | RationalLike") -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.var_count)
        return self + (-other)

    def __rsub__(self, other: RationalLike) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other: "Polynomial | RationalLike") -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = as_rational(other)
            if c == 0:
                return Polynomial(self.var_count, {})
            return Polynomial(self.var_count, {e: k * c for e, k in self.terms.items()})
        self._check_same_space(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                acc = terms.get(expo, Fraction(0)) + c1 * c2
                if acc == 0:
                    terms.pop(expo, None)
                else:
                    terms[expo] = acc
        return Polynomial(self.var_count, terms)

    def __rmul__(self, other: RationalLike) -> "Polynomial":
        return self.__mul__(other)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise PolynomialError("negative powers not supported")
        result = Polynomial.constant(1, self.var_count)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Total degree; 0 for the zero polynomial by convention."""
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree_in(self, var_indices: Sequence[int]) -> int:
        """Max combined exponent over the given 1-based variables."""
        if not self.terms:
            return 0
        idx = [i - 1 for i in var_indices]
        return max(sum(e[i] for i in idx) for e in self.terms)

    def derivative(self, index: int) -> "Polynomial":
        """Partial derivative with respect to x_{index} (1-based)."""
        i = index - 1
        terms: dict[tuple[int, ...], Fraction] = {}
        for expo, coeff in self.terms.items():
            if expo[i] == 0:
                continue
            new = list(expo)
            new[i] -= 1
            terms[tuple(new)] = coeff * expo[i]
        return Polynomial(self.var_count, terms)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Compose: replace x_i by images[i-1] (all in a common target space)."""
        if len(images) != self.var_count:
            raise PolynomialError("substitution needs one image per variable")
        target = images[0].var_count
        for q in images:
            if q.var_count != target:
                raise PolynomialError("image polynomials live in different spaces")
        result = Polynomial(target, {})
        for expo, coeff in self.terms.items():
            term = Polynomial.constant(coeff, target)
            for i, e in enumerate(expo):
                if e:
                    term = term * images[i] ** e
            result = result + term
        return result

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in graded-lex order: higher total degree first, then lex."""
        return sorted(
            self.terms.items(),
            key=lambda item: (sum(item[0]), item[0]),
            reverse=True,
        )

    # -- equality / hashing ---------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.var_count == other.var_count
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.var_count, frozenset(self.terms.items())))
        return self._hash

    # -- printing --------------------------------------------------------

    def to_text(self, var_prefix: str = "x") -> str:
        if not self.terms:
            return "0"
        chunks: list[str] = []
        for expo, coeff in self.sorted_terms():
            factors = []
            for i, e in enumerate(expo):
                if e == 1:
                    factors.append(f"{var_prefix}{i + 1}")
                elif e > 1:
                    factors.append(f"{var_prefix}{i + 1}^{e}")
            mag = abs(coeff)
            if factors and mag == 1:
                body = "*".join(factors)
            elif factors:
                body = "*".join([str(mag)] + factors)
            else:
                body = str(mag)
            if not chunks:
                chunks.append(body if coeff > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(chunks)

    def __repr__(self) -> str:
        return f"Polynomial({self.var_count}, {self.to_text()!r})"

    # -- numeric fast path -------------------------------------------------

    def evaluate_float(self, points: np.ndarray) -> np.ndarray:
        """Vectorised float evaluation at an (N, var_count) array of points.

        The exact path is :func:`evaluate_polynomial`; this one exists for the
        grid oracles, where millions of Fraction operations would dominate the
        run time.
        """
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        if pts.shape[1] != self.var_count:
            raise PolynomialError("point dimension mismatch")
        out = np.zeros(pts.shape[0])
        for expo, coeff in self.terms.items():
            term = np.full(pts.shape[0], float(coeff))
            for i, e in enumerate(expo):
                if e:
                    term = term * pts[:, i] ** e
            out += term
        return out


def evaluate_polynomial(p: Polynomial, x: Sequence[RationalLike]) -> Fraction:
    """Exact value of ``p`` at a rational point."""
    if len(x) != p.var_count:
        raise PolynomialError(f"point has length {len(x)}, expected {p.var_count}")
    xs = [as_rational(v) for v in x]
    total = Fraction(0)
    for expo, coeff in p.terms.items():
        term = coeff
        for value, e in zip(xs, expo):
            if e:
                term *= value**e
        total += term
    return total


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Closed interval with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise PolynomialError(f"empty interval [{self.lo}, {self.hi}]")

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __mul__(self, other: "Interval") -> "Interval":
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(products), max(products))

    def scale(self, c: Fraction) -> "Interval":
        if c >= 0:
            return Interval(self.lo * c, self.hi * c)
        return Interval(self.hi * c, self.lo * c)

    def power(self, e: int) -> "Interval":
        if e == 0:
            return Interval(Fraction(1), Fraction(1))
        if e % 2 == 1 or self.lo >= 0:
            return Interval(self.lo**e, self.hi**e)
        if self.hi <= 0:
            return Interval(self.hi**e, self.lo**e)
        # even power across zero
        return Interval(Fraction(0), max(self.lo**e, self.hi**e))

    def contains(self, value: RationalLike) -> bool:
        v = as_rational(value)
        return self.lo <= v <= self.hi

    def mag(self) -> Fraction:
        """max |x| over the interval."""
        return max(abs(self.lo), abs(self.hi))


def interval_evaluate(p: Polynomial, box: Sequence[Interval]) -> Interval:
    """Interval enclosure of the range of ``p`` over a box.

    Straight term-wise interval arithmetic: exact rational endpoints, so the
    enclosure property needs no rounding step.  It overestimates (dependency
    problem) but never underestimates, which is all the solver needs.
    """
    if len(box) != p.var_count:
        raise PolynomialError(f"box has dimension {len(box)}, expected {p.var_count}")
    total = Interval(Fraction(0), Fraction(0))
    for expo, coeff in p.terms.items():
        term = Interval(Fraction(1), Fraction(1))
        for iv, e in zip(box, expo):
            if e:
                term = term * iv.power(e)
        total = total + term.scale(coeff)
    return total


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignAtom:
    """A closed sign condition ``poly rel 0`` with rel in {>=, <=, =}."""

    poly: Polynomial
    relation: str

    def __post_init__(self) -> None:
        if self.relation not in RELATIONS:
            raise PolynomialError(
                f"relation {self.relation!r} is not one of {RELATIONS} (closed relations only)"
            )

    def holds(self, value: Fraction) -> bool:
        if self.relation == ">=":
            return value >= 0
        if self.relation == "<=":
            return value <= 0
        return value == 0


@dataclass(frozen=True)
class FormulaNode:
    """AND/OR tree over sign atoms.  kind is 'atom', 'and' or 'or'."""

    kind: str
    atom: SignAtom | None = None
    children: tuple["FormulaNode", ...] = ()

    def __post_init__(self) -> None:
        if self.kind == "atom":
            if self.atom is None or self.children:
                raise PolynomialError("atom node must carry exactly an atom")
        elif self.kind in ("and", "or"):
            if self.atom is not None or len(self.children) < 2:
                raise PolynomialError(f"{self.kind} node needs >= 2 children and no atom")
        else:
            # no negation node exists in this AST by construction
            raise PolynomialError(f"unknown node kind {self.kind!r}")

    def atoms(self) -> Iterable[SignAtom]:
        if self.kind == "atom":
            yield self.atom  # type: ignore[misc]
        else:
            for child in self.children:
                yield from child.atoms()


@dataclass(frozen=True)
class ClosedFormula:
    """A negation-free combination of closed sign atoms over k variables.

    ``polynomial_set`` is the deduplicated defining family, ordered by the
    canonical printed form so that its cardinality (the s in bound formulas)
    and iteration order are deterministic.
    """

    k: int
    root: FormulaNode
    polynomial_set: tuple[Polynomial, ...] = field(init=False)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise PolynomialError("formula needs k >= 1 variables")
        seen: dict[Polynomial, None] = {}
        for atom in self.root.atoms():
            if atom.poly.var_count != self.k:
                raise PolynomialError("atom polynomial lives in the wrong space")
            seen.setdefault(atom.poly)
        ordered = sorted(seen, key=lambda p: p.to_text())
        object.__setattr__(self, "polynomial_set", tuple(ordered))

    @property
    def s(self) -> int:
        return len(self.polynomial_set)

    def atoms(self) -> list[SignAtom]:
        return list(self.root.atoms())

    def map_atoms(self, fn: Callable[[SignAtom], SignAtom], new_k: int | None = None) -> "ClosedFormula":
        """Structure-preserving atom replacement (used by rewriting stages)."""

        def walk(node: FormulaNode) -> FormulaNode:
            if node.kind == "atom":
                return FormulaNode("atom", atom=fn(node.atom))  # type: ignore[arg-type]
            return FormulaNode(node.kind, children=tuple(walk(c) for c in node.children))

        return ClosedFormula(new_k if new_k is not None else self.k, walk(self.root))

    def to_text(self, var_prefix: str = "x") -> str:
        def walk(node: FormulaNode, parent: str | None) -> str:
            if node.kind == "atom":
                assert node.atom is not None
                rel = node.atom.relation
                return f"{node.atom.poly.to_text(var_prefix)} {rel} 0"
            joiner = f" {node.kind} "
            body = joiner.join(walk(c, node.kind) for c in node.children)
            if parent is not None and parent != node.kind:
                return f"({body})"
            return body

        return walk(self.root, None)

    def to_json_tree(self, var_prefix: str = "x") -> dict:
        """Schema: {"k": int, "tree": node} with atom/and/or nodes."""

        def walk(node: FormulaNode) -> dict:
            if node.kind == "atom":
                assert node.atom is not None
                return {
                    "type": "atom",
                    "poly": node.atom.poly.to_text(var_prefix),
                    "rel": node.atom.relation,
                }
            return {"type": node.kind, "children": [walk(c) for c in node.children]}

        return {"k": self.k, "tree": walk(self.root)}


def atom_formula(k: int, poly: Polynomial, relation: str) -> ClosedFormula:
    return ClosedFormula(k, FormulaNode("atom", atom=SignAtom(poly, relation)))


def conjunction(formulas: Sequence[ClosedFormula]) -> ClosedFormula:
    return _combine("and", formulas)


def disjunction(formulas: Sequence[ClosedFormula]) -> ClosedFormula:
    return _combine("or", formulas)


def _combine(kind: str, formulas: Sequence[ClosedFormula]) -> ClosedFormula:
    if not formulas:
        raise PolynomialError(f"cannot build empty {kind}")
    if len(formulas) == 1:
        return formulas[0]
    k = formulas[0].k
    for f in formulas:
        if f.k != k:
            raise PolynomialError("formulas over different variable counts")
    return ClosedFormula(k, FormulaNode(kind, children=tuple(f.root for f in formulas)))


def evaluate_formula(f: ClosedFormula, x: Sequence[RationalLike]) -> bool:
    """Exact truth value of the formula at a rational point."""
    if len(x) != f.k:
        raise PolynomialError(f"point has length {len(x)}, expected {f.k}")
    xs = [as_rational(v) for v in x]

    def walk(node: FormulaNode) -> bool:
        if node.kind == "atom":
            assert node.atom is not None
            return node.atom.holds(evaluate_polynomial(node.atom.poly, xs))
        if node.kind == "and":
            return all(walk(c) for c in node.children)
        return any(walk(c) for c in node.children)

    return walk(f.root)


# ---------------------------------------------------------------------------
# Block structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockSpec:
    """Variable blocks (k_1, ..., k_w) with per-block degree caps (d_1, ..., d_w).

    The ambient variable count is the sum of the block sizes; block i owns the
    contiguous 1-based variable range it is assigned by position.
    """

    block_sizes: tuple[int, ...]
    degree_caps: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "block_sizes", tuple(int(k) for k in self.block_sizes))
        object.__setattr__(self, "degree_caps", tuple(int(d) for d in self.degree_caps))
        if not self.block_sizes:
            raise PolynomialError("at least one block required")
        if len(self.block_sizes) != len(self.degree_caps):
            raise PolynomialError("one degree cap per block required")
        if any(k < 1 for k in self.block_sizes):
            raise PolynomialError("block sizes must be positive")
        if any(d < 1 for d in self.degree_caps):
            raise PolynomialError("degree caps must be positive")

    @staticmethod
    def single(k: int, d: int) -> "BlockSpec":
        return BlockSpec((k,), (d,))

    @property
    def omega(self) -> int:
        return len(self.block_sizes)

    @property
    def total_vars(self) -> int:
        return sum(self.block_sizes)

    @property
    def d_primes(self) -> tuple[int, ...]:
        return tuple(min(k, d) for k, d in zip(self.block_sizes, self.degree_caps))

    def block_variables(self, i: int) -> list[int]:
        """1-based variable indices of block i (0-based block index)."""
        start = sum(self.block_sizes[:i])
        return list(range(start + 1, start + self.block_sizes[i] + 1))


def multidegree(p: Polynomial, blocks: BlockSpec) -> tuple[int, ...]:
    """Per-block degree of ``p``: max over terms of the block's exponent sum."""
    if blocks.total_vars != p.var_count:
        raise PolynomialError(
            f"blocks cover {blocks.total_vars} variables, polynomial has {p.var_count}"
        )
    return tuple(p.degree_in(blocks.block_variables(i)) for i in range(blocks.omega))


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class ParseError(ValueError):
    """Syntax/semantic error with position information."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TWO_CHAR = (">=", "<=")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Yield (kind, value, position); kinds: num, var, kw, op."""
    tokens: list[tuple[str, str, int]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text[i : i + 2] in _TWO_CHAR:
            tokens.append(("op", text[i : i + 2], i))
            i += 2
            continue
        if ch in "+-*^()=/,":
            tokens.append(("op", ch, i))
            i += 1
            continue
        if ch in "<>":
            raise ParseError(
                f"strict inequality {ch!r} rejected: only closed relations >=, <=, = are allowed",
                i,
            )
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word in ("and", "or", "not"):
                tokens.append(("kw", word, i))
            else:
                tokens.append(("var", word, i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    return tokens


class _Parser:
    """Recursive descent over the token list.

    Grammar (or binds loosest):
        formula  := conj ("or" conj)*
        conj     := clause ("and" clause)*
        clause   := "(" formula ")" | poly rel const
        rel      := ">=" | "<=" | "="
        poly     := signed term (("+"|"-") term)*
        term     := factor ("*" factor)*
        factor   := base ("^" nat)?
        base     := "(" poly ")" | x<int> | literal
        literal  := nat ("/" nat)?
    """

    def __init__(self, tokens: list[tuple[str, str, int]], k: int, text_len: int):
        self.tokens = tokens
        self.k = k
        self.pos = 0
        self.text_len = text_len

    def _peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self) -> tuple[str, str, int]:
        tok = self._peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.text_len)
        self.pos += 1
        return tok

    def _expect_op(self, value: str) -> None:
        tok = self._next()
        if tok[0] != "op" or tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1]!r}", tok[2])

    # formula level ----------------------------------------------------

    def parse_formula(self) -> FormulaNode:
        node = self.parse_conj()
        parts = [node]
        while True:
            tok = self._peek()
            if tok is not None and tok[0] == "kw" and tok[1] == "or":
                self._next()
                parts.append(self.parse_conj())
            else:
                break
        if len(parts) == 1:
            return parts[0]
        return FormulaNode("or", children=tuple(parts))

    def parse_conj(self) -> FormulaNode:
        parts = [self.parse_clause()]
        while True:
            tok = self._peek()
            if tok is not None and tok[0] == "kw" and tok[1] == "and":
                self._next()
                parts.append(self.parse_clause())
            else:
                break
        if len(parts) == 1:
            return parts[0]
        return FormulaNode("and", children=tuple(parts))

    def parse_clause(self) -> FormulaNode:
        tok = self._peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.text_len)
        if tok[0] == "kw" and tok[1] == "not":
            raise ParseError("negation rejected: formulas must be negation-free", tok[2])
        if tok[0] == "op" and tok[1] == "(":
            # Could be a parenthesised formula or a parenthesised polynomial:
            # try the formula route first and fall back on failure.
            save = self.pos
            try:
                self._next()
                inner = self.parse_formula()
                self._expect_op(")")
                return inner
            except ParseError:
                self.pos = save
        return self.parse_atom()

    def parse_atom(self) -> FormulaNode:
        poly = self.parse_poly()
        tok = self._next()
        if tok[0] == "kw" and tok[1] == "not":
            raise ParseError("negation rejected: formulas must be negation-free", tok[2])
        if tok[0] != "op" or tok[1] not in RELATIONS:
            raise ParseError(f"expected a relation >=, <= or =, found {tok[1]!r}", tok[2])
        relation = tok[1]
        rhs = self.parse_poly()
        if rhs.total_degree() > 0:
            raise ParseError(
                "relation right-hand side must be a rational constant", tok[2]
            )
        return FormulaNode("atom", atom=SignAtom(poly - rhs, relation))

    # polynomial level ---------------------------------------------------

    def parse_poly(self) -> Polynomial:
        sign = Fraction(1)
        tok = self._peek()
        while tok is not None and tok[0] == "op" and tok[1] in "+-":
            self._next()
            if tok[1] == "-":
                sign = -sign
            tok = self._peek()
        poly = self.parse_term() * sign
        while True:
            tok = self._peek()
            if tok is not None and tok[0] == "op" and tok[1] in "+-":
                self._next()
                term = self.parse_term()
                poly = poly + term if tok[1] == "+" else poly - term
            else:
                break
        return poly

    def parse_term(self) -> Polynomial:
        poly = self.parse_factor()
        while True:
            tok = self._peek()
            if tok is not None and tok[0] == "op" and tok[1] == "*":
                self._next()
                poly = poly * self.parse_factor()
            else:
                break
        return poly

    def parse_factor(self) -> Polynomial:
        base = self.parse_base()
        tok = self._peek()
        if tok is not None and tok[0] == "op" and tok[1] == "^":
            self._next()
            etok = self._next()
            if etok[0] != "num":
                raise ParseError("exponent must be a nonnegative integer", etok[2])
            return base ** int(etok[1])
        return base

    def parse_base(self) -> Polynomial:
        tok = self._next()
        if tok[0] == "op" and tok[1] == "(":
            poly = self.parse_poly()
            self._expect_op(")")
            return poly
        if tok[0] == "op" and tok[1] == "-":
            return -self.parse_base()
        if tok[0] == "num":
            numerator = int(tok[1])
            nxt = self._peek()
            if nxt is not None and nxt[0] == "op" and nxt[1] == "/":
                self._next()
                dtok = self._next()
                if dtok[0] != "num":
                    raise ParseError("denominator must be an integer", dtok[2])
                if int(dtok[1]) == 0:
                    raise ParseError("zero denominator", dtok[2])
                return Polynomial.constant(Fraction(numerator, int(dtok[1])), self.k)
            return Polynomial.constant(numerator, self.k)
        if tok[0] == "var":
            name = tok[1]
            if not (name.startswith("x") and name[1:].isdigit()):
                raise ParseError(f"unknown symbol {name!r} (variables are x1..x{self.k})", tok[2])
            index = int(name[1:])
            if not 1 <= index <= self.k:
                raise ParseError(
                    f"variable index {index} out of range 1..{self.k}", tok[2]
                )
            return Polynomial.variable(index, self.k)
        if tok[0] == "kw" and tok[1] == "not":
            raise ParseError("negation rejected: formulas must be negation-free", tok[2])
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2])


def parse_polynomial(text: str, k: int) -> Polynomial:
    if k < 1:
        raise ParseError("k must be >= 1 (degenerate variable count rejected)", 0)
    parser = _Parser(_tokenize(text), k, len(text))
    poly = parser.parse_poly()
    tok = parser._peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    return poly


def parse_formula(text: str, k: int) -> ClosedFormula:
    """Parse a closed formula over variables x1..xk.

    Rejects ``not`` and strict inequalities outright; those would leave the
    closed-formula class the rest of the package is built for.
    """
    if k < 1:
        raise ParseError("k must be >= 1 (degenerate variable count rejected)", 0)
    parser = _Parser(_tokenize(text), k, len(text))
    root = parser.parse_formula()
    tok = parser._peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    return ClosedFormula(k, root)
