"""Pure-Python kernel for bit-packed portrait arithmetic.

A depth-d automorphism is a Python int whose bit k is the label (vertex
permutation, 0 or 1) at heap index k.  Heap indexing: the root is 0, the
children of vertex i are 2i+1 and 2i+2, so level j occupies the contiguous
bit range [2^j - 1, 2^(j+1) - 2].

Convention used throughout: compose(h, g) applies g FIRST, so the label of
the product at vertex u is  label_h(g(u)) XOR label_g(u).

The compiled kernel in _ckernel mirrors this module for depths whose
portrait fits in a 64-bit word; results must be bit-identical.
"""

from __future__ import annotations

from .errors import EnumerationCapExceeded


def vertex_perm(g: int, d: int) -> list[int]:
    """Action of g on all labeled vertices, as a heap-index permutation."""
    n = (1 << d) - 1
    perm = [0] * n
    # Internal (non-last-level) vertices are the first 2^(d-1) - 1 indices.
    for i in range((1 << (d - 1)) - 1):
        b = (g >> i) & 1
        base = 2 * perm[i] + 1
        j = 2 * i + 1
        perm[j] = base + b
        perm[j + 1] = base + 1 - b
    return perm


def compose(h: int, g: int, d: int) -> int:
    """Product h∘g (g applied first): pulls h's labels back along g's action."""
    perm = vertex_perm(g, d)
    r = g
    for u in range((1 << d) - 1):
        r ^= ((h >> perm[u]) & 1) << u
    return r


def invert(g: int, d: int) -> int:
    """Inverse: the label of g^-1 at g(v) equals the label of g at v."""
    perm = vertex_perm(g, d)
    r = 0
    for v in range((1 << d) - 1):
        r |= ((g >> v) & 1) << perm[v]
    return r


def conjugate(x: int, s: int, d: int) -> int:
    """s^-1 x s."""
    return compose(compose(invert(s, d), x, d), s, d)


def commutator(x: int, y: int, d: int) -> int:
    """x^-1 y^-1 x y."""
    return compose(compose(compose(invert(x, d), invert(y, d), d), x, d), y, d)


def _rmul_tables(g: int, d: int) -> tuple[list[list[int]], int]:
    """Byte-gather tables for the fixed bit permutation x -> x∘g.

    Right multiplication by a fixed g is a fixed permutation of x's bits
    followed by XOR with g, so it can be applied with one 256-entry table
    lookup per portrait byte.
    """
    n = (1 << d) - 1
    perm = vertex_perm(g, d)
    inv = [0] * n
    for u, p in enumerate(perm):
        inv[p] = u
    tables = []
    for b in range((n + 7) >> 3):
        base = b << 3
        singles = [(1 << inv[base + k]) if base + k < n else 0 for k in range(8)]
        tbl = [0] * 256
        for v in range(1, 256):
            low = v & -v
            tbl[v] = tbl[v ^ low] | singles[low.bit_length() - 1]
        tables.append(tbl)
    return tables, g


def _rmul(x: int, tables: list[list[int]], g: int) -> int:
    r = g
    for b, tbl in enumerate(tables):
        r ^= tbl[(x >> (b << 3)) & 255]
    return r


def close(d: int, gens: list[int], cap: int) -> set[int]:
    """Subgroup generated by gens, as a set of portrait ints.

    Generators are folded in one at a time; a generator already inside the
    current subgroup costs only a membership test, which keeps closure over
    large redundant generating sets (commutator saturations) cheap.
    """
    els = {0}
    accepted: list[tuple[list[list[int]], int]] = []
    for gb in gens:
        if gb in els:
            continue
        tab = _rmul_tables(gb, d)
        # Old elements are closed under old generators: only products with
        # the new generator can leave the current set.
        frontier = []
        for x in list(els):
            y = _rmul(x, *tab)
            if y not in els:
                els.add(y)
                frontier.append(y)
        accepted.append(tab)
        while frontier:
            if len(els) > cap:
                raise EnumerationCapExceeded(cap, len(els))
            nxt = []
            for x in frontier:
                for tab2 in accepted:
                    y = _rmul(x, *tab2)
                    if y not in els:
                        els.add(y)
                        nxt.append(y)
            frontier = nxt
        if len(els) > cap:
            raise EnumerationCapExceeded(cap, len(els))
    return els
