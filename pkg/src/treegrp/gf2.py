"""Bit-packed linear algebra over GF(2) and parity-constrained subgroups.

Vectors are Python ints (bit k = coordinate k).  This backs the fast path
for subgroups cut out by parity functionals of the portrait bits: such a
subgroup coincides, as a set, with the solution space of its parity checks,
so orders and indices reduce to rank computations instead of enumeration.

Every fast-path result feeding a verification verdict is cross-validated
against explicit enumeration at small depth in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


def rref(rows: Iterable[int]) -> list[int]:
    """Fully reduced row echelon basis, highest pivot first.

    Full reduction (no pivot column appears in any other row) is load-bearing:
    nullspace() reads solution bits straight off the pivot rows.
    """
    basis: dict[int, int] = {}
    for r in rows:
        r = reduce_vector(r, basis)
        if not r:
            continue
        p = r.bit_length() - 1
        # Clear the established pivot columns from the new row's interior...
        for q, b in basis.items():
            if (r >> q) & 1:
                r ^= b
        # ...and the new pivot column from every established row.
        for q, b in basis.items():
            if (b >> p) & 1:
                basis[q] = b ^ r
        basis[p] = r
    return [basis[p] for p in sorted(basis, reverse=True)]


def reduce_vector(v: int, basis: dict[int, int] | Sequence[int]) -> int:
    """Residual of v after elimination against a reduced basis."""
    if not isinstance(basis, dict):
        basis = {b.bit_length() - 1: b for b in basis}
    while v:
        p = v.bit_length() - 1
        b = basis.get(p)
        if b is None:
            break
        v ^= b
    return v


def rank(rows: Iterable[int]) -> int:
    return len(rref(rows))


def in_span(v: int, reduced_basis: Sequence[int]) -> bool:
    return reduce_vector(v, reduced_basis) == 0


def span_leq(inner: Sequence[int], outer_reduced: Sequence[int]) -> bool:
    """Whether span(inner) is contained in the span of a reduced basis."""
    return all(in_span(v, outer_reduced) for v in inner)


def nullspace(rows: Iterable[int], n: int) -> list[int]:
    """Basis of { x in GF(2)^n : <row, x> = 0 for every row }."""
    basis = rref(rows)
    pivots = [b.bit_length() - 1 for b in basis]
    pivot_set = set(pivots)
    out = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = 1 << f
        for b, p in zip(basis, pivots):
            if (b >> f) & 1:
                v |= 1 << p
        out.append(v)
    return out


def dual_checks(span_basis: Iterable[int], n: int) -> list[int]:
    """Parity checks whose common kernel is exactly span(span_basis)."""
    return nullspace(span_basis, n)


def gather_bits(v: int, positions: Sequence[int]) -> int:
    out = 0
    for k, p in enumerate(positions):
        out |= ((v >> p) & 1) << k
    return out


def scatter_bits(v: int, positions: Sequence[int]) -> int:
    out = 0
    for k, p in enumerate(positions):
        out |= ((v >> k) & 1) << p
    return out


@dataclass(frozen=True)
class LinearSubgroup:
    """A subgroup of the depth-d tree group whose element set is linear.

    Stored as parity-check masks over the 2^d - 1 portrait bits; the member
    portraits are exactly the common kernel of the checks.  Only families
    known to be closed under the group operation (kernels of parity
    homomorphisms and what the reduction pipeline derives from them) are
    represented this way; closure is asserted by sampling in tests, not
    enforced here.
    """

    depth: int
    checks: tuple[int, ...]

    @property
    def num_bits(self) -> int:
        return (1 << self.depth) - 1

    def log2_order(self) -> int:
        return self.num_bits - rank(self.checks)

    def order(self) -> int:
        return 1 << self.log2_order()

    def contains_bits(self, bits: int) -> bool:
        return all((bits & m).bit_count() & 1 == 0 for m in self.checks)

    def basis(self) -> list[int]:
        return nullspace(self.checks, self.num_bits)

    def with_checks(self, extra: Iterable[int]) -> "LinearSubgroup":
        return LinearSubgroup(self.depth, self.checks + tuple(extra))

    def iter_bits(self) -> Iterator[int]:
        """All member portraits (meant for small solution spaces only)."""
        basis = self.basis()
        if len(basis) > 26:
            raise ValueError(f"solution space of dimension {len(basis)} too large to list")
        n = len(basis)
        v = 0
        yield 0
        for i in range(1, 1 << n):
            # Gray-code walk: flip one basis vector per step.
            v ^= basis[(i & -i).bit_length() - 1]
            yield v
