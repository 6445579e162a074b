"""Compositions of k, the chamber-face order, chains, and chain-count bounds.

A composition λ = (λ_1, ..., λ_ℓ) of k is stored as its breakpoint set
B(λ) = {λ_1, λ_1+λ_2, ...} ⊆ {1, ..., k−1}.  Under that encoding the face
order (λ ≺ μ iff the face of the ordered chamber labelled λ is contained in
the closure of the one labelled μ) is plain set inclusion, the meet is set
intersection, and downward closure is subset enumeration — so this module is
mostly finite set combinatorics.

Chain counts carry two numbers side by side: the exact count (enumeration
and an independent dynamic program must agree) and a closed-form bound
F(d, k) quoted from the literature.  The two disagree on some inputs —
for instance the poset for k=5, d=3 has 11 chains against a quoted bound
of 7 — so the exact count is authoritative and the report merely flags
when the formula is exceeded rather than asserting it.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from orbit_betti.polys import BlockSpec

ENUMERATION_LIMIT = 2**16


class CompositionError(ValueError):
    pass


@dataclass(frozen=True)
class Composition:
    """A composition of k, canonically the breakpoint set B(λ) ⊆ {1..k−1}."""

    k: int
    breakpoints: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "breakpoints", frozenset(int(b) for b in self.breakpoints))
        if self.k < 1:
            raise CompositionError("k must be a positive integer")
        for b in self.breakpoints:
            if not 1 <= b <= self.k - 1:
                raise CompositionError(f"breakpoint {b} out of range 1..{self.k - 1}")

    @staticmethod
    def from_parts(parts: tuple[int, ...] | list[int]) -> "Composition":
        parts = tuple(int(p) for p in parts)
        if not parts:
            raise CompositionError("a composition needs at least one part")
        if any(p < 1 for p in parts):
            raise CompositionError(f"nonpositive part in {parts}")
        k = sum(parts)
        partial = 0
        breaks = []
        for p in parts[:-1]:
            partial += p
            breaks.append(partial)
        return Composition(k, frozenset(breaks))

    @property
    def parts(self) -> tuple[int, ...]:
        cuts = [0] + sorted(self.breakpoints) + [self.k]
        return tuple(b - a for a, b in zip(cuts, cuts[1:]))

    @property
    def length(self) -> int:
        return len(self.breakpoints) + 1

    def sort_key(self) -> tuple:
        return (self.length, self.parts)

    def __repr__(self) -> str:
        return f"Composition{self.parts}"


def precedes(lam: Composition, mu: Composition) -> bool:
    """λ ≺ μ in the face order (reflexive): breakpoints nest."""
    if lam.k != mu.k:
        raise CompositionError(f"k mismatch: {lam.k} vs {mu.k}")
    return lam.breakpoints <= mu.breakpoints


def meet(lam: Composition, mu: Composition) -> Composition:
    """Greatest lower bound; closures of the two faces intersect in this one."""
    if lam.k != mu.k:
        raise CompositionError(f"k mismatch: {lam.k} vs {mu.k}")
    return Composition(lam.k, lam.breakpoints & mu.breakpoints)


@dataclass(frozen=True)
class Chain:
    """A strictly increasing sequence of compositions over a common k."""

    elements: tuple[Composition, ...]

    def __post_init__(self) -> None:
        if not self.elements:
            raise CompositionError("chains are nonempty")
        k = self.elements[0].k
        for a, b in zip(self.elements, self.elements[1:]):
            if a.k != k or b.k != k:
                raise CompositionError("chain elements over different k")
            if not (precedes(a, b) and a != b):
                raise CompositionError(
                    f"chain elements {a.parts} and {b.parts} do not strictly nest"
                )

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return " < ".join(str(c.parts) for c in self.elements)


@dataclass(frozen=True)
class MultiComposition:
    """One composition per block of a BlockSpec."""

    components: tuple[Composition, ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise CompositionError("at least one component required")

    def matches(self, blocks: BlockSpec) -> bool:
        return len(self.components) == blocks.omega and all(
            c.k == k for c, k in zip(self.components, blocks.block_sizes)
        )


# ---------------------------------------------------------------------------
# the posets
# ---------------------------------------------------------------------------


def all_compositions(k: int) -> list[Composition]:
    """All 2^{k−1} compositions of k, sorted by (length, parts)."""
    if k < 1:
        raise CompositionError("k must be a positive integer")
    out = []
    for mask in range(2 ** (k - 1)):
        breaks = frozenset(i + 1 for i in range(k - 1) if mask >> i & 1)
        out.append(Composition(k, breaks))
    out.sort(key=Composition.sort_key)
    return out


def comp_max(k: int, d: int) -> list[Composition]:
    """Compositions of k of length exactly d with 1's at odd positions.

    Positions 1, 3, 5, ... (1-based) are forced to 1; the even positions are
    free positive integers.  d = 1 is the conventional degenerate case {(k)}.
    Sorted by parts for determinism.
    """
    if not 1 <= d <= k:
        raise CompositionError(f"comp_max needs 1 <= d <= k, got d={d}, k={k}")
    if d == 1:
        return [Composition.from_parts((k,))]
    forced = [i for i in range(1, d + 1) if i % 2 == 1]
    free = [i for i in range(1, d + 1) if i % 2 == 0]
    budget = k - len(forced)
    out: list[Composition] = []

    def rec(pos: int, remaining: int, values: dict[int, int]) -> None:
        if pos == len(free):
            if remaining == 0:
                parts = tuple(1 if i % 2 == 1 else values[i] for i in range(1, d + 1))
                out.append(Composition.from_parts(parts))
            return
        slots_left = len(free) - pos - 1
        for v in range(1, remaining - slots_left + 1):
            values[free[pos]] = v
            rec(pos + 1, remaining - v, values)

    rec(0, budget, {})
    out.sort(key=Composition.sort_key)
    return out


def comp_kd(k: int, d: int) -> list[Composition]:
    """The face poset used at degree d: closure of comp_max, or everything.

    For d ≤ k this is the downward closure of comp_max(k, d) under ≺ (subset
    enumeration on breakpoints); for d > k it is all of Comp(k).  Sorted by
    (length, parts).
    """
    if k < 1 or d < 1:
        raise CompositionError("k and d must be positive")
    if d > k:
        return all_compositions(k)
    seen: set[frozenset[int]] = set()
    for top in comp_max(k, d):
        points = sorted(top.breakpoints)
        for mask in range(2 ** len(points)):
            seen.add(frozenset(p for i, p in enumerate(points) if mask >> i & 1))
    out = [Composition(k, b) for b in seen]
    out.sort(key=Composition.sort_key)
    return out


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------


def chain_count(k: int, d: int) -> int:
    """Exact number of nonempty chains in comp_kd(k, d), by dynamic program.

    f(λ) = 1 + Σ_{μ strictly below λ} f(μ), summed over the poset.
    """
    elements = comp_kd(k, d)
    # process in order of breakpoint-set size so predecessors are done first
    elements.sort(key=lambda c: (len(c.breakpoints), c.parts))
    f: dict[frozenset[int], int] = {}
    for lam in elements:
        total = 1
        for mu in elements:
            if len(mu.breakpoints) >= len(lam.breakpoints):
                break
            if mu.breakpoints < lam.breakpoints:
                total += f[mu.breakpoints]
        f[lam.breakpoints] = total
    return sum(f.values())


def chains(k: int, d: int) -> tuple[list[Chain], int]:
    """All nonempty chains plus the independently computed exact count.

    Enumeration is depth-first over strictly nesting breakpoint sets; the
    dynamic-program count must agree with the enumeration length (asserted
    here, so any drift between the two implementations fails loudly).
    """
    elements = comp_kd(k, d)
    if len(elements) > ENUMERATION_LIMIT:
        raise CompositionError(
            f"poset has {len(elements)} elements; enumeration limit is {ENUMERATION_LIMIT}"
        )
    elements.sort(key=lambda c: (len(c.breakpoints), c.parts))
    above: dict[Composition, list[Composition]] = {
        lam: [mu for mu in elements if lam.breakpoints < mu.breakpoints]
        for lam in elements
    }
    out: list[Chain] = []

    def extend(prefix: list[Composition]) -> None:
        out.append(Chain(tuple(prefix)))
        for mu in above[prefix[-1]]:
            prefix.append(mu)
            extend(prefix)
            prefix.pop()

    for lam in elements:
        extend([lam])

    count = chain_count(k, d)
    if count != len(out):  # pragma: no cover - cross-check of two algorithms
        raise AssertionError(
            f"chain DP count {count} disagrees with enumeration {len(out)}"
        )
    return out, count


def maximal_chains(k: int, d: int) -> list[Chain]:
    """Chains not properly contained in any other chain."""
    all_chains, _ = chains(k, d)
    elements = comp_kd(k, d)
    out = []
    for chain in all_chains:
        members = set(chain.elements)
        extendable = False
        for nu in elements:
            if nu in members:
                continue
            if all(
                precedes(nu, c) or precedes(c, nu) for c in chain.elements
            ):
                extendable = True
                break
        if not extendable:
            out.append(chain)
    return out


def paper_chain_bound(k: int, d: int) -> int:
    """The closed-form chain bound F(d, k); informational, not asserted.

    F(d, k) = (2^d − 1) · ∏_{i=1}^{⌊d/2⌋−1} (k − ⌈d/2⌉ − i) for d ≤ k, with
    the empty product equal to 1, and (2^k − 1) (k−1)! for d > k.
    """
    if k < 1 or d < 1:
        raise CompositionError("k and d must be positive")
    if d > k:
        return (2**k - 1) * factorial(k - 1)
    product = 1
    for i in range(1, d // 2):
        product *= k - (d + 1) // 2 - i
    return (2**d - 1) * product


def paper_maximal_chain_formula(k: int, d: int) -> int:
    """The product ∏_{i=1}^{⌊d/2⌋−1}(k − ⌈d/2⌉ − i), quoted as a maximal-chain
    count; informational (it disagrees with enumeration for some odd d)."""
    if k < 1 or d < 1:
        raise CompositionError("k and d must be positive")
    product = 1
    for i in range(1, d // 2):
        product *= k - (d + 1) // 2 - i
    return product


def multi_chains(blocks: BlockSpec) -> int:
    """Product over blocks of the per-block exact chain counts."""
    total = 1
    for k_i, d_i in zip(blocks.block_sizes, blocks.degree_caps):
        total *= chain_count(k_i, d_i)
    return total


def chain_report(k: int, d: int) -> dict:
    """Exact counts next to the closed-form numbers, with discrepancy flags.

    ``bound_exceeded`` / ``maximal_formula_mismatch`` are True on the inputs
    where the quoted formulas fall short of enumeration; consumers should
    treat the exact values as authoritative.
    """
    exact = chain_count(k, d)
    bound = paper_chain_bound(k, d)
    maximal = len(maximal_chains(k, d)) if len(comp_kd(k, d)) <= 4096 else None
    formula = paper_maximal_chain_formula(k, d)
    report = {
        "k": k,
        "d": d,
        "poset_size": len(comp_kd(k, d)),
        "chain_count": exact,
        "paper_chain_bound": bound,
        "bound_exceeded": exact > bound,
        "paper_maximal_chain_formula": formula,
    }
    if maximal is not None:
        report["maximal_chain_count"] = maximal
        report["maximal_formula_mismatch"] = maximal != formula
    return report


def hasse_edges(elements: list[Composition]) -> list[tuple[Composition, Composition]]:
    """Covering pairs (λ, μ) with λ ≺ μ and nothing strictly between."""
    edges = []
    for lam in elements:
        for mu in elements:
            if not (lam.breakpoints < mu.breakpoints):
                continue
            if any(
                lam.breakpoints < nu.breakpoints < mu.breakpoints for nu in elements
            ):
                continue
            edges.append((lam, mu))
    edges.sort(key=lambda e: (e[0].sort_key(), e[1].sort_key()))
    return edges
