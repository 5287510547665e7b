"""Automorphisms of the depth-d binary rooted tree, stored as portraits.

An automorphism of the finite binary tree with d+1 levels is determined by
its portrait: one parity bit per vertex of the first d levels, where bit 1
means "swap the two subtrees below this vertex".  Every assignment of bits
is a valid automorphism, so a depth-d element is exactly an integer with
2^d - 1 meaningful bits.

Vertices are words over {0, 1} and are indexed heap-style: the root (empty
word) is index 0 and the children of index i are 2i+1 and 2i+2.  Level j
then occupies the contiguous index range [2^j - 1, 2^(j+1) - 2], which makes
level and half-tree parity functionals single-mask popcounts.

Composition order: ``compose(h, g)`` (equivalently ``h * g``) applies g
first, i.e. (h*g)(w) = h(g(w)).  The label of h*g at vertex u is
label_h(g(u)) XOR label_g(u).  Getting this orientation wrong is the classic
bug in this domain; all code in this package sticks to "right factor acts
first".
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple

from . import kernel

#: Largest supported element depth; the portrait of a depth-24 element
#: occupies 2^24 - 1 bits (~2 MB).
MAX_DEPTH = 24


def check_word(w: str) -> str:
    if not all(c in "01" for c in w):
        raise ValueError(f"vertex word must consist of '0'/'1' symbols, got {w!r}")
    return w


def heap_index(word: str) -> int:
    """Heap index of a vertex word: 2^|w| - 1 + (w read as a binary number)."""
    check_word(word)
    idx = 0
    for c in word:
        idx = 2 * idx + 1 + (c == "1")
    return idx


def vertex_word(index: int) -> str:
    """Inverse of heap_index."""
    if index < 0:
        raise ValueError("negative heap index")
    level = (index + 1).bit_length() - 1
    offset = index - ((1 << level) - 1)
    return format(offset, "b").zfill(level) if level else ""


def level_of_index(index: int) -> int:
    return (index + 1).bit_length() - 1


@lru_cache(maxsize=None)
def level_mask(j: int) -> int:
    """Mask of the bits of level j (indices 2^j - 1 .. 2^(j+1) - 2)."""
    return ((1 << (1 << j)) - 1) << ((1 << j) - 1)


@lru_cache(maxsize=None)
def half_level_mask(j: int, i: int) -> int:
    """Mask of the level-j vertices whose word starts with symbol i (j >= 1)."""
    if j < 1:
        raise ValueError("level 0 has no half split")
    width = 1 << (j - 1)
    return ((1 << width) - 1) << ((1 << j) - 1 + i * width)


class DistanceResult(NamedTuple):
    """Metric value plus an explicit flag for full-depth agreement.

    The profinite metric is defined on infinite automorphisms; for stored
    finite-depth elements an equal pair yields value 0 together with
    agree_to_full_depth=True rather than a claim of genuine equality.
    """

    value: Fraction
    agree_to_full_depth: bool


@dataclass(frozen=True)
class FiniteAutomorphism:
    """A depth-d binary tree automorphism as an immutable bit-packed portrait."""

    depth: int
    bits: int

    def __post_init__(self):
        if not 1 <= self.depth <= MAX_DEPTH:
            raise ValueError(f"depth must be in 1..{MAX_DEPTH}, got {self.depth}")
        if not 0 <= self.bits < (1 << self.num_vertices):
            raise ValueError("portrait bits out of range for depth")

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, d: int) -> "FiniteAutomorphism":
        return cls(d, 0)

    @classmethod
    def generator(cls, d: int, i: int) -> "FiniteAutomorphism":
        """The standard generator a_i: single nontrivial label at vertex 0^i."""
        if not 0 <= i <= d - 1:
            raise ValueError(f"generator index must be in 0..{d - 1}, got {i}")
        return cls(d, 1 << ((1 << i) - 1))

    @classmethod
    def random(cls, d: int, rng: random.Random) -> "FiniteAutomorphism":
        """Uniformly random element (independent fair portrait bits)."""
        return cls(d, rng.getrandbits((1 << d) - 1))

    @classmethod
    def from_labels(cls, d: int, labels: dict[str, int]) -> "FiniteAutomorphism":
        bits = 0
        for word, bit in labels.items():
            if len(word) >= d:
                raise ValueError(f"vertex {word!r} too deep for depth {d}")
            if bit & 1:
                bits |= 1 << heap_index(word)
        return cls(d, bits)

    # -- serialization -----------------------------------------------------

    @classmethod
    def from_bytes(cls, data: bytes, d: int) -> "FiniteAutomorphism":
        n = (1 << d) - 1
        expected = (n + 7) // 8
        if len(data) != expected:
            raise ValueError(f"need {expected} bytes for depth {d}, got {len(data)}")
        bits = int.from_bytes(data, "little")
        if bits >> n:
            raise ValueError("trailing bits beyond the portrait must be zero")
        return cls(d, bits)

    @classmethod
    def from_hex(cls, s: str, d: int) -> "FiniteAutomorphism":
        return cls.from_bytes(bytes.fromhex(s), d)

    def to_bytes(self) -> bytes:
        """Little-endian packing: bit k of the stream is the heap-index-k label."""
        return self.bits.to_bytes((self.num_vertices + 7) // 8, "little")

    def to_hex(self) -> str:
        return self.to_bytes().hex()

    # -- basic structure ---------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return (1 << self.depth) - 1

    def label(self, v: str) -> int:
        """The portrait bit at vertex v (the activity of the element at v)."""
        if len(v) >= self.depth:
            raise ValueError(f"vertex {v!r} too deep for depth {self.depth}")
        return (self.bits >> heap_index(v)) & 1

    @property
    def root_activity(self) -> int:
        return self.bits & 1

    def support(self) -> tuple[str, ...]:
        """Vertex words carrying a nontrivial label."""
        out = []
        b = self.bits
        while b:
            low = b & -b
            out.append(vertex_word(low.bit_length() - 1))
            b ^= low
        return tuple(out)

    def is_identity(self) -> bool:
        return self.bits == 0

    # -- group operations --------------------------------------------------

    def __mul__(self, other: "FiniteAutomorphism") -> "FiniteAutomorphism":
        if not isinstance(other, FiniteAutomorphism):
            return NotImplemented
        if other.depth != self.depth:
            raise ValueError(f"depth mismatch: {self.depth} vs {other.depth}")
        return FiniteAutomorphism(self.depth, kernel.compose(self.bits, other.bits, self.depth))

    def __invert__(self) -> "FiniteAutomorphism":
        return FiniteAutomorphism(self.depth, kernel.invert(self.bits, self.depth))

    def conjugate_by(self, s: "FiniteAutomorphism") -> "FiniteAutomorphism":
        """s^-1 * self * s."""
        if s.depth != self.depth:
            raise ValueError(f"depth mismatch: {self.depth} vs {s.depth}")
        return FiniteAutomorphism(self.depth, kernel.conjugate(self.bits, s.bits, self.depth))

    # -- action on words ---------------------------------------------------

    def apply(self, w: str) -> str:
        """Image of the word w; symbol k is flipped by the label at the length-(k-1) prefix."""
        check_word(w)
        if len(w) > self.depth:
            raise ValueError(f"word of length {len(w)} too long for depth {self.depth}")
        bits = self.bits
        out = []
        node = 0
        for c in w:
            x = c == "1"
            out.append("1" if x ^ ((bits >> node) & 1) else "0")
            node = 2 * node + 1 + x
        return "".join(out)

    # -- sections and truncations ------------------------------------------

    def _gather(self, v0: int, k: int) -> int:
        """Bits of the k-level subtree portrait rooted at heap index v0."""
        bits = self.bits
        out = 0
        pos = 0
        for lvl in range(k):
            start = ((v0 + 1) << lvl) - 1
            width = 1 << lvl
            out |= ((bits >> start) & ((1 << width) - 1)) << pos
            pos += width
        return out

    def section(self, w: str) -> "FiniteAutomorphism":
        """The depth-(d-|w|) automorphism describing the action below vertex w."""
        check_word(w)
        if not len(w) < self.depth:
            raise ValueError(f"section vertex {w!r} too deep for depth {self.depth}")
        k = self.depth - len(w)
        return FiniteAutomorphism(k, self._gather(heap_index(w), k))

    def truncate(self, k: int) -> "FiniteAutomorphism":
        """Forget all labels below level k-1; a homomorphism onto the depth-k group."""
        if not 1 <= k <= self.depth:
            raise ValueError(f"truncation depth must be in 1..{self.depth}, got {k}")
        return FiniteAutomorphism(k, self.bits & ((1 << ((1 << k) - 1)) - 1))

    def subpattern(self, v: str, k: int) -> "FiniteAutomorphism":
        """The size-k pattern appearing at vertex v (section then truncate, in one gather)."""
        check_word(v)
        if len(v) + k > self.depth:
            raise ValueError(
                f"pattern of size {k} at vertex {v!r} exceeds depth {self.depth}"
            )
        return FiniteAutomorphism(k, self._gather(heap_index(v), k))

    # -- parity functionals --------------------------------------------------

    def alpha(self, J: Iterable[int]) -> int:
        """Total activity within the level set J, mod 2; a homomorphism to C_2."""
        bits = self.bits
        acc = 0
        for j in set(J):
            if not 0 <= j < self.depth:
                raise ValueError(f"level {j} out of range for depth {self.depth}")
            acc ^= (bits & level_mask(j)).bit_count() & 1
        return acc

    def __repr__(self):
        return f"FiniteAutomorphism(depth={self.depth}, hex={self.to_hex()!r})"


def from_sections(root_bit: int, g0: FiniteAutomorphism,
                  g1: FiniteAutomorphism) -> FiniteAutomorphism:
    """Assemble a depth-(m+1) element from a root label and two depth-m sections."""
    if g0.depth != g1.depth:
        raise ValueError(f"section depth mismatch: {g0.depth} vs {g1.depth}")
    m = g0.depth
    out = root_bit & 1
    pos = 0
    for lvl in range(m):
        width = 1 << lvl
        mask = (1 << width) - 1
        start = (1 << (lvl + 1)) - 1
        out |= ((g0.bits >> pos) & mask) << start
        out |= ((g1.bits >> pos) & mask) << (start + width)
        pos += width
    return FiniteAutomorphism(m + 1, out)


# -- module-level operation spellings ---------------------------------------


def identity(d: int) -> FiniteAutomorphism:
    return FiniteAutomorphism.identity(d)


def generator(d: int, i: int) -> FiniteAutomorphism:
    return FiniteAutomorphism.generator(d, i)


def generators(d: int) -> list[FiniteAutomorphism]:
    """The standard generating set a_0, ..., a_{d-1}."""
    return [FiniteAutomorphism.generator(d, i) for i in range(d)]


def compose(h: FiniteAutomorphism, g: FiniteAutomorphism) -> FiniteAutomorphism:
    """Product h∘g: g acts first."""
    return h * g


def invert(g: FiniteAutomorphism) -> FiniteAutomorphism:
    return ~g


def commutator(g: FiniteAutomorphism, h: FiniteAutomorphism) -> FiniteAutomorphism:
    """g^-1 h^-1 g h."""
    if g.depth != h.depth:
        raise ValueError(f"depth mismatch: {g.depth} vs {h.depth}")
    return FiniteAutomorphism(g.depth, kernel.commutator(g.bits, h.bits, g.depth))


def distance(g: FiniteAutomorphism, h: FiniteAutomorphism) -> DistanceResult:
    """Profinite metric value 1 / 2^(2^n - 1), n the first disagreement level."""
    if g.depth != h.depth:
        raise ValueError(f"depth mismatch: {g.depth} vs {h.depth}")
    diff = g.bits ^ h.bits
    if diff == 0:
        return DistanceResult(Fraction(0), True)
    n = level_of_index((diff & -diff).bit_length() - 1)
    return DistanceResult(Fraction(1, 1 << ((1 << n) - 1)), False)
