"""Subgroups of the depth-d tree group: enumeration and structure.

Two representations coexist:

* EnumeratedSubgroup: an explicit element set built by breadth-first
  closure, canonically ordered by the portrait byte encoding.
* PredicateSubgroup: a membership test without enumeration, covering the
  distinguished families: level-parity kernels P_J, last-level-stabilizer
  maximal subgroups M_V, the derived subgroup of the full group, level
  stabilizers, and intersections of these.

Enumeration-backed operations respect a hard element cap (default 2^26,
overridable per call or via the TREEGRP_CAP environment variable) and fail
loudly when it is exceeded.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import kernel
from .errors import EnumerationCapExceeded
from .portrait import FiniteAutomorphism, generators, heap_index

DEFAULT_CAP = 1 << 26


def resolve_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("TREEGRP_CAP")
    return int(env) if env else DEFAULT_CAP


def _stabilizer_mask(n: int) -> int:
    """Mask of all portrait bits on levels 0..n-1."""
    return (1 << ((1 << n) - 1)) - 1


class EnumeratedSubgroup:
    """An explicitly enumerated subgroup of the depth-d tree group."""

    __slots__ = ("depth", "generators", "_bits", "_sorted", "_genset")

    def __init__(self, depth: int, bits: frozenset[int],
                 gens: tuple[FiniteAutomorphism, ...] = (), _trusted: bool = False):
        if not _trusted:
            raise TypeError("use close() / from_elements() to build subgroups")
        self.depth = depth
        self.generators = gens
        self._bits = bits
        self._sorted: list[int] | None = None
        self._genset: tuple[FiniteAutomorphism, ...] | None = gens or None

    # -- constructors --------------------------------------------------------

    @classmethod
    def trivial(cls, d: int) -> "EnumeratedSubgroup":
        return cls(d, frozenset({0}), (), _trusted=True)

    @classmethod
    def from_element_bits(cls, depth: int, bits: Iterable[int],
                          gens: tuple[FiniteAutomorphism, ...] = ()) -> "EnumeratedSubgroup":
        """Wrap an element set already known to be closed (kernels, filters).

        Closure is the caller's responsibility; verify_closed() exists for
        tests that want to pay for the check.
        """
        return cls(depth, frozenset(bits), gens, _trusted=True)

    # -- basic queries --------------------------------------------------------

    @property
    def element_bits(self) -> frozenset[int]:
        return self._bits

    @property
    def order(self) -> int:
        return len(self._bits)

    def __len__(self) -> int:
        return len(self._bits)

    def contains(self, g: FiniteAutomorphism) -> bool:
        return g.depth == self.depth and g.bits in self._bits

    def __contains__(self, g: FiniteAutomorphism) -> bool:
        return self.contains(g)

    def sorted_bits(self) -> list[int]:
        """Element portraits in canonical order (by the byte encoding)."""
        if self._sorted is None:
            nb = ((1 << self.depth) - 1 + 7) // 8
            self._sorted = sorted(self._bits, key=lambda b: b.to_bytes(nb, "little"))
        return self._sorted

    def elements(self) -> Iterator[FiniteAutomorphism]:
        for b in self.sorted_bits():
            yield FiniteAutomorphism(self.depth, b)

    def __iter__(self) -> Iterator[FiniteAutomorphism]:
        return self.elements()

    def __eq__(self, other) -> bool:
        if not isinstance(other, EnumeratedSubgroup):
            return NotImplemented
        return self.depth == other.depth and self._bits == other._bits

    def __hash__(self) -> int:
        return hash((self.depth, self._bits))

    def __repr__(self):
        return f"EnumeratedSubgroup(depth={self.depth}, order={self.order})"

    def is_subgroup_of(self, other: "EnumeratedSubgroup") -> bool:
        return self.depth == other.depth and self._bits <= other._bits


def close(gens: Sequence[FiniteAutomorphism], *, depth: int | None = None,
          cap: int | None = None) -> EnumeratedSubgroup:
    """Least subgroup containing the generators (breadth-first closure)."""
    gens = list(gens)
    if gens:
        d = gens[0].depth
        for g in gens:
            if g.depth != d:
                raise ValueError(f"generator depth mismatch: {g.depth} vs {d}")
        if depth is not None and depth != d:
            raise ValueError(f"explicit depth {depth} disagrees with generators ({d})")
    elif depth is None:
        raise ValueError("empty generator list needs an explicit depth")
    else:
        d = depth
    bits = kernel.close(d, [g.bits for g in gens], resolve_cap(cap))
    return EnumeratedSubgroup.from_element_bits(d, bits, tuple(gens))


_FULL_GROUP_CACHE: dict[int, EnumeratedSubgroup] = {}


def full_group(d: int, cap: int | None = None) -> EnumeratedSubgroup:
    """The whole depth-d group, order 2^(2^d - 1)."""
    cap = resolve_cap(cap)
    order = 1 << ((1 << d) - 1)
    # Cap check precedes the cache so behavior does not depend on what
    # earlier calls happen to have enumerated.
    if order > cap:
        raise EnumerationCapExceeded(
            cap, order, hint=f"full depth-{d} group has order 2^{(1 << d) - 1}"
        )
    if d not in _FULL_GROUP_CACHE:
        _FULL_GROUP_CACHE[d] = close(generators(d), cap=cap)
    return _FULL_GROUP_CACHE[d]


def verify_closed(s: EnumeratedSubgroup) -> bool:
    """Full closure check (quadratic; meant for small groups in tests)."""
    d = s.depth
    bits = s._bits
    if 0 not in bits:
        return False
    return all(kernel.compose(x, y, d) in bits for x in bits for y in bits)


def order(s: EnumeratedSubgroup) -> int:
    return s.order


def contains(s: EnumeratedSubgroup, g: FiniteAutomorphism) -> bool:
    return s.contains(g)


def index(s: EnumeratedSubgroup, t: EnumeratedSubgroup) -> int:
    """[S : T], after verifying T really is a subgroup of S."""
    if not t.is_subgroup_of(s):
        raise ValueError("index undefined: T is not contained in S")
    q, r = divmod(s.order, t.order)
    if r:
        raise ValueError("element counts violate Lagrange; corrupted subgroup data")
    return q


def level_stabilizer(s: EnumeratedSubgroup, n: int) -> EnumeratedSubgroup:
    """Elements of S acting trivially on all words of length <= n."""
    if not 0 <= n <= s.depth:
        raise ValueError(f"stabilizer level must be in 0..{s.depth}, got {n}")
    mask = _stabilizer_mask(n)
    return EnumeratedSubgroup.from_element_bits(
        s.depth, (b for b in s.element_bits if not b & mask)
    )


def generating_set(s: EnumeratedSubgroup) -> tuple[FiniteAutomorphism, ...]:
    """A small generating set, extracted greedily in canonical element order."""
    if s._genset is not None:
        return s._genset
    d = s.depth
    current: set[int] = {0}
    chosen: list[int] = []
    for b in s.sorted_bits():
        if b in current:
            continue
        chosen.append(b)
        current = kernel.close(d, chosen, len(s))
    assert len(current) == len(s)
    s._genset = tuple(FiniteAutomorphism(d, b) for b in chosen)
    return s._genset


def derived_subgroup(s: EnumeratedSubgroup, cap: int | None = None) -> EnumeratedSubgroup:
    """Commutator subgroup [S, S].

    Seeds with commutators of generator pairs, saturates the seed set under
    conjugation by generators (and their inverses), then closes.  The
    saturated set is conjugation-invariant, so its closure is the normal
    closure of the seeds, which is [S, S].
    """
    cap = resolve_cap(cap)
    d = s.depth
    gens = [g.bits for g in (s.generators or generating_set(s))]
    conjugators = []
    for g in gens:
        conjugators.append(g)
        gi = kernel.invert(g, d)
        if gi != g:
            conjugators.append(gi)
    seeds = {kernel.commutator(x, y, d) for x in gens for y in gens}
    seeds.discard(0)
    saturated = set(seeds)
    queue = list(seeds)
    while queue:
        x = queue.pop()
        for c in conjugators:
            y = kernel.conjugate(x, c, d)
            if y not in saturated:
                if len(saturated) >= cap:
                    raise EnumerationCapExceeded(cap, len(saturated))
                saturated.add(y)
                queue.append(y)
    bits = kernel.close(d, sorted(saturated), cap)
    return EnumeratedSubgroup.from_element_bits(d, bits)


def derived_subgroup_allpairs(s: EnumeratedSubgroup, cap: int | None = None) -> EnumeratedSubgroup:
    """Oracle form of the derived subgroup: close all |S|^2 commutators.

    Quadratic in the group order; used to validate derived_subgroup on
    small groups, never as the production path.
    """
    d = s.depth
    bits = list(s.element_bits)
    comms = {kernel.commutator(x, y, d) for x in bits for y in bits}
    closed = kernel.close(d, sorted(comms), resolve_cap(cap))
    return EnumeratedSubgroup.from_element_bits(d, closed)


def orbit(s: EnumeratedSubgroup, v: str) -> set[str]:
    """Orbit of the vertex word v under S, by generator saturation."""
    if len(v) > s.depth:
        raise ValueError(f"vertex {v!r} too deep for depth {s.depth}")
    gens = s.generators or generating_set(s)
    seen = {v}
    queue = [v]
    while queue:
        w = queue.pop()
        for g in gens:
            u = g.apply(w)
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


def is_transitive_on_level(s: EnumeratedSubgroup, n: int) -> bool:
    if not 0 <= n <= s.depth:
        raise ValueError(f"level must be in 0..{s.depth}, got {n}")
    return len(orbit(s, "0" * n)) == 1 << n


# -- predicate-defined subgroups ---------------------------------------------


@dataclass(frozen=True)
class PredicateSubgroup:
    """A subgroup given by a membership predicate instead of an element list.

    kind is one of "PJ" (kernel of the level-parity functional over J),
    "MV" (last-level stabilizer cut by the parity over the vertex set V),
    "derived_of_full" (commutator subgroup of the whole depth-d group, via
    its level-parity characterization), "level_stabilizer", and
    "intersection".
    """

    depth: int
    kind: str
    J: frozenset[int] = frozenset()
    V: frozenset[str] = frozenset()
    n: int = 0
    parts: tuple["PredicateSubgroup", ...] = ()

    def contains(self, g: FiniteAutomorphism) -> bool:
        if g.depth != self.depth:
            raise ValueError(f"depth mismatch: {g.depth} vs {self.depth}")
        if self.kind == "PJ":
            return g.alpha(self.J) == 0
        if self.kind == "MV":
            if g.bits & _stabilizer_mask(self.depth - 1):
                return False
            return beta_V(g, self.V) == 0
        if self.kind == "derived_of_full":
            return in_derived_of_Gd(g)
        if self.kind == "level_stabilizer":
            return not g.bits & _stabilizer_mask(self.n)
        if self.kind == "intersection":
            return all(p.contains(g) for p in self.parts)
        raise ValueError(f"unknown predicate kind {self.kind!r}")

    def __contains__(self, g: FiniteAutomorphism) -> bool:
        return self.contains(g)

    def intersect(self, other: "PredicateSubgroup") -> "PredicateSubgroup":
        if other.depth != self.depth:
            raise ValueError("cannot intersect subgroups of different depths")
        return PredicateSubgroup(self.depth, "intersection", parts=(self, other))


def maximal_subgroup(d: int, J: Iterable[int]) -> PredicateSubgroup:
    """The index-2 subgroup P_J = kernel of the parity functional over levels J."""
    J = frozenset(J)
    if not J:
        raise ValueError("J must be a nonempty set of levels")
    if not J <= set(range(d)):
        raise ValueError(f"J must be contained in 0..{d - 1}, got {sorted(J)}")
    return PredicateSubgroup(d, "PJ", J=J)


def enumerate_PJ(d: int, J: Iterable[int], cap: int | None = None) -> EnumeratedSubgroup:
    """Explicit element set of P_J; order 2^(2^d - 2).  Needs d <= 4."""
    pred = maximal_subgroup(d, J)
    cap = resolve_cap(cap)
    order_pj = 1 << ((1 << d) - 2)
    if order_pj > cap:
        raise EnumerationCapExceeded(
            cap, order_pj,
            hint="use maximal_subgroup(d, J) for membership without enumeration",
        )
    grp = full_group(d, cap=cap)
    return EnumeratedSubgroup.from_element_bits(
        d, (b for b in grp.element_bits if pred.contains(FiniteAutomorphism(d, b)))
    )


def M_V(d: int, V: Iterable[str]) -> PredicateSubgroup:
    """Maximal subgroup of the level-(d-1) stabilizer cut out by the parity over V."""
    V = frozenset(V)
    if not V:
        raise ValueError("V must be a nonempty set of level-(d-1) vertices")
    for w in V:
        if len(w) != d - 1:
            raise ValueError(f"vertex {w!r} is not on level {d - 1}")
    return PredicateSubgroup(d, "MV", V=V)


def beta_V(g: FiniteAutomorphism, V: Iterable[str]) -> int:
    """Total activity of g over the vertex set V, mod 2."""
    acc = 0
    for w in V:
        acc ^= g.label(w)
    return acc


def conjugate_label_check(h: FiniteAutomorphism, g: FiniteAutomorphism) -> bool:
    """Check the conjugation law on last-level labels.

    For h stabilizing level d-1, the conjugate h^g must also stabilize
    level d-1 and carry, at each last-level vertex v, the label of h at
    g(v).  Returns whether that holds (it always should).
    """
    d = h.depth
    if g.depth != d:
        raise ValueError(f"depth mismatch: {h.depth} vs {g.depth}")
    if h.bits & _stabilizer_mask(d - 1):
        raise ValueError("h must stabilize level d-1")
    hg = h.conjugate_by(g)
    if hg.bits & _stabilizer_mask(d - 1):
        return False
    for off in range(1 << (d - 1)):
        v = format(off, "b").zfill(d - 1) if d > 1 else ""
        if hg.label(v) != h.label(g.apply(v)):
            return False
    return True


def in_derived_of_Gd(g: FiniteAutomorphism) -> bool:
    """Membership in the derived subgroup of the full depth-d group.

    The abelianization of the full group is elementary abelian of rank d,
    realized by the d single-level parity functionals, so the derived
    subgroup is exactly their common kernel.  Cross-checked against the
    enumerated derived subgroup in the test suite.
    """
    return all(g.alpha({j}) == 0 for j in range(g.depth))


@dataclass
class PresentationReport:
    """Outcome of checking the standard presentation relations at depth d."""

    d: int
    involution_failures: list[int] = field(default_factory=list)
    relation_failures: list[tuple[int, int, int]] = field(default_factory=list)
    order_checked: bool = False
    order_expected: int | None = None
    order_actual: int | None = None

    @property
    def passed(self) -> bool:
        return (
            not self.involution_failures
            and not self.relation_failures
            and (not self.order_checked or self.order_expected == self.order_actual)
        )

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "involution_failures": self.involution_failures,
            "relation_failures": [list(t) for t in self.relation_failures],
            "order_checked": self.order_checked,
            "order_expected": self.order_expected,
            "order_actual": self.order_actual,
            "passed": self.passed,
        }


def verify_presentation(d: int, cap: int | None = None) -> PresentationReport:
    """Check a_i^2 = 1 and [a_j^(a_i), a_k] = 1 (i < j, i < k), plus the
    group order for depths small enough to enumerate."""
    if d < 2:
        raise ValueError("presentation check needs depth >= 2")
    report = PresentationReport(d)
    gens = generators(d)
    e = FiniteAutomorphism.identity(d)
    for i, a in enumerate(gens):
        if a * a != e:
            report.involution_failures.append(i)
    from .portrait import commutator as comm

    for i in range(d):
        for j in range(i + 1, d):
            conj = gens[i] * gens[j] * gens[i]
            for k in range(i + 1, d):
                if comm(conj, gens[k]) != e:
                    report.relation_failures.append((i, j, k))
    expected = 1 << ((1 << d) - 1)
    if expected <= resolve_cap(cap):
        report.order_checked = True
        report.order_expected = expected
        report.order_actual = full_group(d, cap=cap).order
    return report


def all_subgroups_depth2() -> list[EnumeratedSubgroup]:
    """Every subgroup of the depth-2 group (ten of them).

    The depth-2 group has order 8, so all its subgroups are generated by at
    most two elements; closing all pairs is exhaustive.
    """
    g2 = full_group(2)
    els = [FiniteAutomorphism(2, b) for b in g2.sorted_bits()]
    seen: dict[frozenset[int], EnumeratedSubgroup] = {}
    for x in els:
        for y in els:
            s = close([x, y])
            seen.setdefault(s.element_bits, s)
    return sorted(seen.values(), key=lambda s: (s.order, s.sorted_bits()))


# -- JSON wire format ---------------------------------------------------------


def subgroup_to_json(s: EnumeratedSubgroup | PredicateSubgroup) -> dict:
    """Serialize to the subgroup JSON schema (hex portraits, level/vertex sets)."""
    if isinstance(s, EnumeratedSubgroup):
        gens = s.generators or generating_set(s)
        return {
            "d": s.depth,
            "kind": "generated",
            "generators": [g.to_hex() for g in gens],
        }
    if s.kind == "PJ":
        return {"d": s.depth, "kind": "PJ", "J": sorted(s.J)}
    if s.kind == "MV":
        return {"d": s.depth, "kind": "MV", "V": sorted(s.V)}
    raise ValueError(f"no JSON form for predicate kind {s.kind!r}")


def subgroup_from_json(doc: dict, cap: int | None = None
                       ) -> EnumeratedSubgroup | PredicateSubgroup:
    d = doc["d"]
    kind = doc["kind"]
    if kind == "generated":
        gens = [FiniteAutomorphism.from_hex(h, d) for h in doc["generators"]]
        return close(gens, depth=d, cap=cap)
    if kind == "PJ":
        return maximal_subgroup(d, doc["J"])
    if kind == "MV":
        return M_V(d, doc["V"])
    raise ValueError(f"unknown subgroup kind {kind!r}")
