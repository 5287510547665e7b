"""Half-tree parity functionals and the derived-subgroup obstruction.

Fix a depth d and a nonempty level set J.  With J' = J minus level 0, the
functional N_i(g) is the parity of g's nontrivial labels in the i-th half
of the tree (vertices starting with symbol i) over the levels in J'.  The
pair (N_0, N_1) is not a homomorphism, but it transforms predictably under
products and inverses, and both components vanish on every commutator of
two members of P_J.  That yields a one-sided certificate: a P_J member with
a nonzero half-tree parity is provably outside [P_J, P_J]; a zero pair
certifies nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from random import Random
from typing import Iterable, Sequence

from .portrait import FiniteAutomorphism, generator, half_level_mask, identity
from .subgroups import maximal_subgroup


@lru_cache(maxsize=None)
def _half_mask(jprime: frozenset[int], i: int) -> int:
    mask = 0
    for j in jprime:
        mask |= half_level_mask(j, i)
    return mask


@dataclass(frozen=True)
class JContext:
    """Depth plus level set J, with the derived data the parity functionals use.

    J' = J minus {0} (level 0 has no half split) and i0 indicates whether
    level 0 belongs to J.  The finite-generation pipeline requires the top
    level d-1 to lie in J; exploratory use may relax that, so the check is
    a separate method rather than a construction invariant.
    """

    depth: int
    levels: frozenset[int]

    def __post_init__(self):
        if not self.levels:
            raise ValueError("J must be nonempty")
        if not self.levels <= set(range(self.depth)):
            raise ValueError(
                f"J must be contained in 0..{self.depth - 1}, got {sorted(self.levels)}"
            )

    @classmethod
    def make(cls, d: int, J: Iterable[int]) -> "JContext":
        return cls(d, frozenset(J))

    @classmethod
    def for_top_level(cls, d: int, J: Iterable[int]) -> "JContext":
        ctx = cls(d, frozenset(J))
        ctx.require_top_level()
        return ctx

    @property
    def jprime(self) -> frozenset[int]:
        return self.levels - {0}

    @property
    def i0(self) -> int:
        return 1 if 0 in self.levels else 0

    def require_top_level(self) -> None:
        if self.depth - 1 not in self.levels:
            raise ValueError(
                f"this operation requires level {self.depth - 1} in J, got {sorted(self.levels)}"
            )

    def subgroup(self):
        """The predicate form of P_J at this context's depth."""
        return maximal_subgroup(self.depth, self.levels)

    def half_mask(self, i: int) -> int:
        return _half_mask(self.jprime, i)


def N(g: FiniteAutomorphism, ctx: JContext, i: int) -> int:
    """Parity of g's labels in half-tree i over the levels in J'."""
    if g.depth != ctx.depth:
        raise ValueError(f"depth mismatch: {g.depth} vs {ctx.depth}")
    if i not in (0, 1):
        raise ValueError(f"half index must be 0 or 1, got {i}")
    return (g.bits & ctx.half_mask(i)).bit_count() & 1


def _check_pj_member(ctx: JContext, g: FiniteAutomorphism, name: str) -> None:
    """Membership precondition plus the internal parity identity.

    A P_J member satisfies alpha_{J'}(g) + i0 * alpha_0(g) = 0; asserting it
    on every processed member catches membership-predicate bugs early.
    """
    if not ctx.subgroup().contains(g):
        raise ValueError(f"{name} is not a member of P_J for J={sorted(ctx.levels)}")
    assert (g.alpha(ctx.jprime) if ctx.jprime else 0) ^ (ctx.i0 & g.root_activity) == 0


@dataclass
class IdentityCheckReport:
    """Result of exercising the product/inverse/commutator transformation laws."""

    depth: int
    levels: tuple[int, ...]
    pairs_checked: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "d": self.depth,
            "J": list(self.levels),
            "pairs_checked": self.pairs_checked,
            "failures": self.failures,
            "passed": self.passed,
        }


def _check_identity_triple(ctx: JContext, g: FiniteAutomorphism,
                           h: FiniteAutomorphism) -> str | None:
    """Returns the name of the first failed law, or None."""
    ag, ah = g.root_activity, h.root_activity
    # product law: N_i(g*h) = N_i(h) + N_{i + alpha(h)}(g)
    gh = g * h
    for i in (0, 1):
        if N(gh, ctx, i) != N(h, ctx, i) ^ N(g, ctx, i ^ ah):
            return "product"
    # inverse law: N_i(g^-1) = N_{i + alpha(g)}(g)
    ginv = ~g
    for i in (0, 1):
        if N(ginv, ctx, i) != N(g, ctx, i ^ ag):
            return "inverse"
    # commutator law
    from .portrait import commutator

    c = commutator(g, h)
    for i in (0, 1):
        expected = N(g, ctx, i) ^ N(g, ctx, i ^ ah) ^ N(h, ctx, i) ^ N(h, ctx, i ^ ag)
        if N(c, ctx, i) != expected:
            return "commutator"
    return None


def verify_ni_identities(ctx: JContext, samples: int = 10_000,
                         seed: int = 0, exhaustive: bool = False) -> IdentityCheckReport:
    """Exercise the three transformation laws on element pairs.

    With exhaustive=True every ordered pair at this depth is tried (meant
    for d <= 3); otherwise `samples` seeded random pairs.
    """
    report = IdentityCheckReport(ctx.depth, tuple(sorted(ctx.levels)))
    d = ctx.depth

    def run(g: FiniteAutomorphism, h: FiniteAutomorphism) -> None:
        report.pairs_checked += 1
        law = _check_identity_triple(ctx, g, h)
        if law is not None and len(report.failures) < 10:
            report.failures.append(
                {"law": law, "g": g.to_hex(), "h": h.to_hex()}
            )

    if exhaustive:
        n = (1 << d) - 1
        for gb in range(1 << n):
            g = FiniteAutomorphism(d, gb)
            for hb in range(1 << n):
                run(g, FiniteAutomorphism(d, hb))
    else:
        rng = Random(seed)
        for _ in range(samples):
            run(FiniteAutomorphism.random(d, rng), FiniteAutomorphism.random(d, rng))
    return report


def commutator_parity(g: FiniteAutomorphism, h: FiniteAutomorphism,
                      ctx: JContext) -> tuple[int, int]:
    """(N_0, N_1) of [g, h] for two P_J members; always (0, 0).

    Computed twice, directly on the commutator's portrait and through the
    commutator transformation law, and cross-checked, so a bug in either
    route cannot silently produce the expected zero pair.
    """
    _check_pj_member(ctx, g, "g")
    _check_pj_member(ctx, h, "h")
    from .portrait import commutator

    c = commutator(g, h)
    direct = (N(c, ctx, 0), N(c, ctx, 1))
    ag, ah = g.root_activity, h.root_activity
    via_law = tuple(
        N(g, ctx, i) ^ N(g, ctx, i ^ ah) ^ N(h, ctx, i) ^ N(h, ctx, i ^ ag)
        for i in (0, 1)
    )
    if direct != via_law:
        raise RuntimeError(
            f"half-tree parity routes disagree on a commutator: {direct} vs {via_law}"
        )
    return direct


NOT_IN_DERIVED = "NOT_IN_DERIVED"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class CertificateVerdict:
    """One-sided membership verdict for [P_J, P_J].

    verdict NOT_IN_DERIVED carries the nonzero functional ("N0" or "N1") as
    the certificate; INCONCLUSIVE means the parity obstruction is silent,
    which is expected for genuine members and possible for non-members.
    """

    verdict: str
    certificate: str | None

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "certificate": self.certificate}


def derived_membership_certificate(ctx: JContext,
                                   x: FiniteAutomorphism) -> CertificateVerdict:
    """Parity obstruction to x lying in [P_J, P_J].

    Sound because both half-tree parities vanish on the derived subgroup;
    not complete, so a zero pair yields INCONCLUSIVE rather than a
    membership claim.
    """
    _check_pj_member(ctx, x, "x")
    if N(x, ctx, 0):
        return CertificateVerdict(NOT_IN_DERIVED, "N0")
    if N(x, ctx, 1):
        return CertificateVerdict(NOT_IN_DERIVED, "N1")
    return CertificateVerdict(INCONCLUSIVE, None)


def word_parities(word: Sequence[int], ctx: JContext) -> tuple[int, int]:
    """(N_0, N_1) of a product of standard generators, read off the word.

    An occurrence of a generator with index in J' counts toward N_0 or N_1
    according to the root activity of the suffix to its right (letters act
    rightmost-first): activity 0 means an even occurrence (N_0), activity 1
    an odd one (N_1).  Must agree with evaluating N on the composed product;
    the test suite holds the two routes against each other.
    """
    d = ctx.depth
    jprime = ctx.jprime
    n0 = n1 = 0
    suffix_root_activity = 0
    for idx in reversed(word):
        if not 0 <= idx < d:
            raise ValueError(f"generator index must be in 0..{d - 1}, got {idx}")
        if idx in jprime:
            if suffix_root_activity:
                n1 ^= 1
            else:
                n0 ^= 1
        if idx == 0:
            suffix_root_activity ^= 1
    return n0, n1


def word_to_element(word: Sequence[int], d: int) -> FiniteAutomorphism:
    """Compose a generator word left to right (rightmost letter acts first)."""
    acc = identity(d)
    for idx in word:
        acc = acc * generator(d, idx)
    return acc
