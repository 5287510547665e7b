"""Pattern groups: the defining data of finitely constrained tree groups.

A subgroup P of the depth-d group, read as the set of allowed size-d
patterns, defines the group of all infinite-tree automorphisms whose every
size-d subpattern lies in P.  This module decides essentiality, reduces a
pattern group to an essential one defining the same constrained group,
computes the exact Hausdorff dimension, builds finite-depth truncations of
the constrained group, and computes the first-level-stabilizer embedding
index used by the dimension bookkeeping identity.

All dimension arithmetic is exact (fractions.Fraction); no floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from . import gf2
from .errors import EnumerationCapExceeded
from .portrait import FiniteAutomorphism, level_mask
from .subgroups import (
    EnumeratedSubgroup,
    full_group,
    level_stabilizer,
    resolve_cap,
)


def _child_subpattern_bits(bits: int, child: int, d: int) -> int:
    """Portrait bits of the size-(d-1) pattern at first-level vertex `child`."""
    v0 = 1 + child
    out = 0
    pos = 0
    for lvl in range(d - 1):
        start = ((v0 + 1) << lvl) - 1
        width = 1 << lvl
        out |= ((bits >> start) & ((1 << width) - 1)) << pos
        pos += width
    return out


def _truncate_bits(bits: int, k: int) -> int:
    return bits & ((1 << ((1 << k) - 1)) - 1)


@dataclass(frozen=True)
class PatternGroup:
    """A subgroup of the depth-d group regarded as an allowed-pattern set.

    `essential` is tri-state: True/False once decided, None while unknown.
    """

    depth: int
    group: EnumeratedSubgroup
    essential: bool | None = None

    @classmethod
    def from_subgroup(cls, s: EnumeratedSubgroup) -> "PatternGroup":
        return cls(s.depth, s, None)

    @property
    def order(self) -> int:
        return self.group.order


class EssentialityResult(NamedTuple):
    essential: bool
    witness: tuple[FiniteAutomorphism, int] | None


def is_essential(p: PatternGroup) -> EssentialityResult:
    """Whether every child subpattern of every allowed pattern extends in P.

    On failure the witness is a pair (g, i): the size-(d-1) pattern of g at
    first-level vertex i matches no truncation of a member of P.
    """
    d = p.depth
    if d < 2:
        raise ValueError("essentiality needs pattern size >= 2")
    member_bits = p.group.element_bits
    truncations = {_truncate_bits(b, d - 1) for b in member_bits}
    for b in member_bits:
        for i in (0, 1):
            if _child_subpattern_bits(b, i, d) not in truncations:
                return EssentialityResult(False, (FiniteAutomorphism(d, b), i))
    return EssentialityResult(True, None)


def essential_reduction(p: PatternGroup) -> PatternGroup:
    """Greatest subset of P whose child subpatterns all extend within it.

    Iterates the filter to a fixpoint.  Each step preserves closure under
    the group operation (truncation is a homomorphism and sections of
    products factor through sections of the factors), so the result is again
    a pattern group; it is essential by construction and defines the same
    constrained group as P.
    """
    d = p.depth
    if d < 2:
        raise ValueError("reduction needs pattern size >= 2")
    current = set(p.group.element_bits)
    while True:
        truncations = {_truncate_bits(b, d - 1) for b in current}
        kept = {
            b for b in current
            if _child_subpattern_bits(b, 0, d) in truncations
            and _child_subpattern_bits(b, 1, d) in truncations
        }
        if kept == current:
            break
        current = kept
    group = EnumeratedSubgroup.from_element_bits(d, current)
    return PatternGroup(d, group, essential=True)


def _ensure_essential(p: PatternGroup) -> PatternGroup:
    if p.essential is False:
        raise ValueError("operation requires an essential pattern group; reduce first")
    if p.essential is None:
        result = is_essential(p)
        if not result.essential:
            raise ValueError(
                "operation requires an essential pattern group; reduce first "
                f"(witness: {result.witness})"
            )
        return PatternGroup(p.depth, p.group, essential=True)
    return p


def hausdorff_dimension(p: PatternGroup) -> Fraction:
    """Exact Hausdorff dimension of the constrained group defined by P.

    Equals log2 of the order of P's level-(d-1) stabilizer divided by
    2^(d-1); the stabilizer order is always a power of two for a 2-group.
    """
    p = _ensure_essential(p)
    d = p.depth
    stab_order = level_stabilizer(p.group, d - 1).order
    log2 = stab_order.bit_length() - 1
    if 1 << log2 != stab_order:
        raise RuntimeError(
            f"stabilizer order {stab_order} is not a power of two; "
            "subgroup data is corrupted"
        )
    return Fraction(log2, 1 << (d - 1))


def dimension_in_allowed_set(p: PatternGroup) -> bool:
    """Dimension lies in {0, 1/2^(d-1), ..., 1}, with 0 iff finite and 1 only
    for the full pattern group."""
    p = _ensure_essential(p)
    d = p.depth
    dim = hausdorff_dimension(p)
    denom = 1 << (d - 1)
    if not (0 <= dim <= 1 and (dim * denom).denominator == 1):
        return False
    if dim == 0 and not is_finite(p):
        return False
    if dim == 1 and p.group != full_group(d):
        return False
    return True


def is_finite(p: PatternGroup) -> bool:
    """Whether the constrained group defined by P is finite (dimension zero)."""
    p = _ensure_essential(p)
    return level_stabilizer(p.group, p.depth - 1).order == 1


def is_level_transitive(p: PatternGroup) -> bool:
    """Whether the constrained group acts transitively on every tree level.

    For constrained groups this is equivalent to being infinite, hence to
    positive dimension; the orbit-level cross-check lives in the
    verification suites.
    """
    return not is_finite(p)


@dataclass(frozen=True)
class TruncationGroup:
    """Depth-n truncation of the constrained group defined by a size-d P."""

    pattern_depth: int
    truncation_depth: int
    group: EnumeratedSubgroup


def _extend_one_level(h_bits: frozenset[int], m: int, d: int,
                      member_bits: frozenset[int], cap: int) -> frozenset[int]:
    """Depth-(m+1) truncation group from the depth-m one.

    An element belongs iff both its sections lie in the depth-m group and
    its root size-d pattern is allowed; candidates are all (root bit,
    section, section) assemblies.
    """
    candidates = 2 * len(h_bits) * len(h_bits)
    if candidates > cap:
        raise EnumerationCapExceeded(
            cap, candidates, hint=f"depth-{m + 1} truncation group candidate set"
        )
    d_mask = (1 << ((1 << d) - 1)) - 1
    out = set()
    widths = [(1 << lvl, (1 << (lvl + 1)) - 1) for lvl in range(m)]
    for b0 in h_bits:
        for b1 in h_bits:
            body = 0
            pos = 0
            for width, start in widths:
                mask = (1 << width) - 1
                body |= ((b0 >> pos) & mask) << start
                body |= ((b1 >> pos) & mask) << (start + width)
                pos += width
            for root in (0, 1):
                g = body | root
                if g & d_mask in member_bits:
                    out.add(g)
    return frozenset(out)


def truncation_group(p: PatternGroup, n: int, cap: int | None = None) -> TruncationGroup:
    """Depth-n slice of the constrained group: all depth-n elements whose
    every size-d subpattern is allowed.

    Built level by level from P (sections of members must be members one
    level down), which relies on essentiality for downward extendability;
    non-essential input is refused rather than risking a wrong set.
    """
    p = _ensure_essential(p)
    d = p.depth
    if n < d:
        raise ValueError(f"truncation depth must be >= pattern size {d}, got {n}")
    cap = resolve_cap(cap)
    member_bits = p.group.element_bits
    h = member_bits
    for m in range(d, n):
        h = _extend_one_level(h, m, d, member_bits, cap)
    return TruncationGroup(d, n, EnumeratedSubgroup.from_element_bits(n, h))


def truncation_image(p: PatternGroup, m: int) -> EnumeratedSubgroup:
    """Image of P under truncation to depth m < pattern size."""
    if not 1 <= m < p.depth:
        raise ValueError(f"truncation image depth must be in 1..{p.depth - 1}")
    return EnumeratedSubgroup.from_element_bits(
        m, {_truncate_bits(b, m) for b in p.group.element_bits}
    )


class PsiImageIndex(NamedTuple):
    """Index of the first-level stabilizer, embedded by its section pair,
    inside the square of the one-level-shallower truncation group."""

    stabilized: bool
    value: int | None
    per_depth: tuple[tuple[int, int], ...]


def psi_image_index(p: PatternGroup, *, max_depth: int | None = None,
                    cap: int | None = None) -> PsiImageIndex:
    """Stabilized value of [H(n) x H(n) : psi(H(n+1)_1)] over successive n.

    psi sends a first-level-stabilizing element to its pair of sections and
    is injective, so the index is |H(n)|^2 / |H(n+1)_1|.  Stops as soon as
    two consecutive depths agree; if the budget runs out first, returns an
    explicit unstabilized result instead of a guess.
    """
    p = _ensure_essential(p)
    d = p.depth
    if max_depth is None:
        max_depth = d + 2
    cap = resolve_cap(cap)
    member_bits = p.group.element_bits

    levels: dict[int, frozenset[int]] = {
        d - 1: truncation_image(p, d - 1).element_bits,
        d: member_bits,
    }

    def level(m: int) -> frozenset[int]:
        if m not in levels:
            levels[m] = _extend_one_level(level(m - 1), m - 1, d, member_bits, cap)
        return levels[m]

    indices: list[tuple[int, int]] = []
    prev_idx: int | None = None
    for n in range(d - 1, max_depth + 1):
        h_n = level(n)
        h_next = level(n + 1)
        # First-level stabilizer of H(n+1); its section pairs must land in H(n).
        stab = [b for b in h_next if not b & 1]
        for b in stab:
            if (_child_subpattern_bits(b, 0, n + 1) not in h_n
                    or _child_subpattern_bits(b, 1, n + 1) not in h_n):
                raise RuntimeError("section of a truncation-group element escaped "
                                   "the shallower truncation group")
        idx, rem = divmod(len(h_n) * len(h_n), len(stab))
        if rem:
            raise RuntimeError("stabilizer order does not divide the product order")
        indices.append((n, idx))
        if prev_idx == idx:
            return PsiImageIndex(True, idx, tuple(indices))
        prev_idx = idx
    return PsiImageIndex(False, None, tuple(indices))


def pattern_appears(pat: FiniteAutomorphism, g: FiniteAutomorphism, w: str) -> bool:
    """Whether the size-k pattern `pat` appears at vertex w in g."""
    if len(w) + pat.depth > g.depth:
        raise ValueError(
            f"pattern of size {pat.depth} at {w!r} exceeds depth {g.depth}"
        )
    return g.subpattern(w, pat.depth) == pat


# -- GF(2) fast path for level-parity pattern groups -------------------------
#
# P_J and everything the reduction pipeline derives from it are solution
# sets of parity checks on the portrait bits, so essentiality and dimension
# reduce to rank computations.  This extends the classification one depth
# beyond enumeration reach; every result it feeds into a verdict is
# cross-validated against enumeration at small depth in the tests.


def _vertex_block_positions(v0: int, levels: int) -> list[int]:
    """Portrait bit positions of the `levels`-deep subtree rooted at heap v0."""
    positions = []
    for lvl in range(levels):
        start = ((v0 + 1) << lvl) - 1
        positions.extend(range(start, start + (1 << lvl)))
    return positions


def _subtree_positions(child: int, d: int) -> list[int]:
    return _vertex_block_positions(1 + child, d - 1)


def linear_pattern_group(d: int, J: Iterable[int]) -> gf2.LinearSubgroup:
    """P_J as a parity-constrained set: one check, the mask of levels in J."""
    J = frozenset(J)
    if not J or not J <= set(range(d)):
        raise ValueError(f"J must be a nonempty subset of 0..{d - 1}")
    mask = 0
    for j in J:
        mask |= level_mask(j)
    return gf2.LinearSubgroup(d, (mask,))


def linear_essential_reduction(lin: gf2.LinearSubgroup
                               ) -> tuple[gf2.LinearSubgroup, bool]:
    """Reduction fixpoint computed on parity checks; returns (reduced,
    was_already_essential)."""
    d = lin.depth
    m = (1 << (d - 1)) - 1
    top_mask = (1 << m) - 1
    child_positions = [_subtree_positions(0, d), _subtree_positions(1, d)]
    was_essential: bool | None = None
    current = lin
    while True:
        basis = current.basis()
        trunc_basis = gf2.rref([v & top_mask for v in basis])
        trunc_checks = gf2.dual_checks(trunc_basis, m)
        new_checks = []
        for c in trunc_checks:
            for positions in child_positions:
                scattered = gf2.scatter_bits(c, positions)
                new_checks.append(scattered)
        extended = current.with_checks(new_checks)
        if extended.log2_order() == current.log2_order():
            if was_essential is None:
                was_essential = True
            return current, was_essential
        was_essential = False
        current = gf2.LinearSubgroup(d, tuple(gf2.rref(extended.checks)))


def linear_truncation_group(d: int, J: Iterable[int], n: int) -> gf2.LinearSubgroup:
    """Depth-n truncation group of the constrained group of P_J, as parity
    checks: the level-parity mask of J scattered to every subtree with at
    least d levels below it."""
    base = linear_pattern_group(d, J)
    if n < d:
        raise ValueError(f"truncation depth must be >= pattern size {d}, got {n}")
    j_mask = base.checks[0]
    checks = []
    for v0 in range((1 << (n - d + 1)) - 1):
        positions = _vertex_block_positions(v0, d)
        checks.append(gf2.scatter_bits(j_mask, positions))
    return gf2.LinearSubgroup(n, tuple(checks))


def linear_stabilizer_log2_order(lin: gf2.LinearSubgroup, n: int) -> int:
    """log2 of the order of the level-n stabilizer of a parity-cut subgroup."""
    unit_checks = tuple(1 << k for k in range((1 << n) - 1))
    return lin.with_checks(unit_checks).log2_order()


def linear_hausdorff_dimension(lin: gf2.LinearSubgroup) -> Fraction:
    """Dimension of the constrained group of an essential parity-cut P."""
    d = lin.depth
    return Fraction(linear_stabilizer_log2_order(lin, d - 1), 1 << (d - 1))
