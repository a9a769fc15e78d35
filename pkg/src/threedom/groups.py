"""Free products, kernel ranks, and Stallings graphs.

The fundamental group of a manifold with no aspherical summand is a free
product F_l * Q_{l+1} * ... * Q_k.  Projecting onto the direct product of the
finite factors gives a finite-index free kernel; its rank is computed in
closed form from the Euler characteristic of the free product, and verified
independently by explicit coset enumeration (`reidemeister_schreier_rank_oracle`).

Subgroups of free groups are handled through Stallings graphs: words are
wedged at a base point and folded; the folded graph detects the index of the
subgroup, and index 1 certifies surjectivity onto the free group.

Word syntax: generators are lower-case letters 'a'..'z', inverses the
corresponding upper-case letters.  Words are kept freely reduced.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, NamedTuple, Optional


class OrderBoundExceeded(ValueError):
    """The brute-force oracle was asked for more cosets than its bound allows."""


# ---------------------------------------------------------------------------
# Free products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreeProductData:
    """The group F_l * Q_{l+1} * ... * Q_k, by free rank and finite-factor orders."""

    free_rank: int
    orders: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free_rank must be >= 0")
        orders = tuple(sorted(int(q) for q in self.orders))
        if any(q < 2 for q in orders):
            raise ValueError("finite factor orders must be >= 2")
        object.__setattr__(self, "orders", orders)


def free_product_euler_characteristic(d: FreeProductData) -> Fraction:
    """chi = 1 - l - sum (1 - 1/q), exact."""
    return (Fraction(1 - d.free_rank)
            - sum((1 - Fraction(1, q) for q in d.orders), Fraction(0)))


class FreeCover(NamedTuple):
    """A finite cover with free fundamental group: rank n, covering degree m."""

    rank: int
    degree: int


def free_cover_rank(d: FreeProductData) -> FreeCover:
    """Rank of the free kernel of the projection onto the finite factors.

    The kernel has index m = prod(orders), and Euler characteristics multiply
    under finite index, so 1 - n = m * chi.
    """
    m = prod(d.orders)
    n = 1 - m * free_product_euler_characteristic(d)
    if n.denominator != 1 or n < 0:
        raise RuntimeError(
            f"internal consistency failure: 1 - m*chi = {n} "
            "is not a non-negative integer")
    return FreeCover(int(n), m)


def nielsen_schreier_rank(rank: int, index: int) -> int:
    """Rank of an index-`index` subgroup of a free group of the given rank."""
    if rank < 0 or index < 1:
        raise ValueError("need rank >= 0 and index >= 1")
    return 1 + index * (rank - 1)


# ---------------------------------------------------------------------------
# Words in free groups
# ---------------------------------------------------------------------------

def invert_letter(ch: str) -> str:
    return ch.swapcase()


def free_reduce(word: str) -> str:
    """Freely reduce a word; 'aA' and 'Aa' cancel."""
    out: list[str] = []
    for ch in word:
        if not ch.isalpha():
            raise ValueError(f"invalid letter {ch!r} in word {word!r}")
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


# ---------------------------------------------------------------------------
# Stallings graphs
# ---------------------------------------------------------------------------

class SubgroupGraph:
    """A folded, base-pointed graph over a free-group alphabet.

    Vertices are 0..n-1 with base 0; `out[v][x]` is the endpoint of the edge
    labeled x leaving v.  Instances are produced by `stallings_fold` already
    folded and canonically relabeled (breadth-first from the base, edges in
    alphabetical order), so equal subgroups give equal graphs.
    """

    def __init__(self, alphabet: tuple[str, ...], out: dict[int, dict[str, int]]):
        self.alphabet = tuple(alphabet)
        self.out = out
        self.inc: dict[int, dict[str, int]] = {v: {} for v in out}
        for v, edges in out.items():
            for x, w in edges.items():
                self.inc[w][x] = v
        self.base = 0

    def vertex_count(self) -> int:
        return len(self.out)

    def edge_count(self) -> int:
        return sum(len(edges) for edges in self.out.values())

    def rank(self) -> int:
        """First Betti number edges - vertices + 1 (the graph is connected)."""
        return self.edge_count() - self.vertex_count() + 1

    def is_complete(self) -> bool:
        """Every vertex has one outgoing and one incoming edge per generator."""
        return all(
            x in self.out[v] and x in self.inc[v]
            for v in self.out for x in self.alphabet
        )

    def index(self) -> Optional[int]:
        """Subgroup index: the vertex count if complete, else None (infinite)."""
        return self.vertex_count() if self.is_complete() else None

    def reads(self, word: str) -> bool:
        """True iff the (reduced) word closes up at the base point."""
        v = self.base
        for ch in free_reduce(word):
            if ch.islower():
                if ch not in self.out[v]:
                    return False
                v = self.out[v][ch]
            else:
                x = ch.lower()
                if x not in self.inc[v]:
                    return False
                v = self.inc[v][x]
        return v == self.base

    def __eq__(self, other) -> bool:
        return (isinstance(other, SubgroupGraph)
                and self.alphabet == other.alphabet and self.out == other.out)

    def __repr__(self):
        return (f"SubgroupGraph(alphabet={self.alphabet}, "
                f"vertices={self.vertex_count()}, edges={self.edge_count()})")


def stallings_fold(words: Iterable[str],
                   alphabet: Optional[Iterable[str]] = None,
                   _rng: Optional[random.Random] = None) -> SubgroupGraph:
    """Folded base-pointed graph of the subgroup generated by the words.

    The alphabet defaults to the letters occurring in the words.  Folds are
    processed in lexicographic (vertex id, label) order; `_rng` randomizes
    that order instead, which must not change the result (folding is
    confluent) and is exercised by the property tests.
    """
    reduced = [free_reduce(w) for w in words]
    if alphabet is None:
        letters = sorted({ch.lower() for w in reduced for ch in w})
    else:
        letters = sorted(set(alphabet))
    if not letters:
        raise ValueError("empty generator alphabet")
    if any(not (len(x) == 1 and x.islower()) for x in letters):
        raise ValueError("generators must be single lower-case letters")

    # Wedge of loops at vertex 0, one loop per word.
    edges: list[tuple[int, str, int]] = []
    fresh = 1
    for w in reduced:
        prev = 0
        for i, ch in enumerate(w):
            nxt = 0 if i == len(w) - 1 else fresh
            if nxt == fresh:
                fresh += 1
            if ch.islower():
                edges.append((prev, ch, nxt))
            else:
                edges.append((nxt, ch.lower(), prev))
            prev = nxt

    parent = list(range(fresh))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            # Keep the smaller id as representative, for determinism.
            if ra > rb:
                ra, rb = rb, ra
            parent[rb] = ra

    # Fold until no vertex has two same-labeled outgoing or incoming edges.
    while True:
        out_seen: dict[tuple[int, str], int] = {}
        in_seen: dict[tuple[int, str], int] = {}
        conflicts: list[tuple[int, str, int, int]] = []
        for u, x, v in edges:
            u, v = find(u), find(v)
            if (u, x) in out_seen and out_seen[(u, x)] != v:
                conflicts.append((u, x, out_seen[(u, x)], v))
            else:
                out_seen[(u, x)] = v
            if (v, x) in in_seen and in_seen[(v, x)] != u:
                conflicts.append((v, x, in_seen[(v, x)], u))
            else:
                in_seen[(v, x)] = u
        if not conflicts:
            break
        conflicts.sort()
        if _rng is not None:
            _rng.shuffle(conflicts)
        _, _, a, b = conflicts[0]
        union(a, b)

    # Deduplicate parallel edges and relabel canonically by BFS from the base.
    edge_set = {(find(u), x, find(v)) for u, x, v in edges}
    out_map: dict[int, dict[str, int]] = {}
    in_map: dict[int, dict[str, int]] = {}
    for u, x, v in edge_set:
        out_map.setdefault(u, {})[x] = v
        in_map.setdefault(v, {})[x] = u
    order = [find(0)]
    seen = {find(0)}
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for x in letters:
            for nbr_map in (out_map, in_map):
                w = nbr_map.get(v, {}).get(x)
                if w is not None and w not in seen:
                    seen.add(w)
                    order.append(w)
    relabel = {v: i for i, v in enumerate(order)}
    out: dict[int, dict[str, int]] = {relabel[v]: {} for v in order}
    for u, x, v in edge_set:
        out[relabel[u]][x] = relabel[v]
    return SubgroupGraph(tuple(letters), out)


def subgroup_index(g: SubgroupGraph) -> Optional[int]:
    """Index of the subgroup in the ambient free group; None means infinite."""
    return g.index()


# ---------------------------------------------------------------------------
# Brute-force kernel rank oracle
# ---------------------------------------------------------------------------

def reidemeister_schreier_rank_oracle(d: FreeProductData,
                                      max_order: int = 10_000) -> int:
    """Rank of the free kernel, by explicit coset enumeration.

    The finite factors are realized as cyclic groups of the given orders; the
    closed rank formula depends only on the orders, so this loses nothing.
    The m cosets of the kernel are the elements of the product of the cyclic
    factors, enumerated by breadth-first search from the identity.  On the
    Schreier graph (one edge per coset per generator of F_l and of each
    cyclic factor) each cyclic generator traces q_i-cycles that bound the
    lifted relator disks x_i^{q_i}; dropping one edge per such cycle leaves a
    graph homotopy equivalent to the kernel's classifying space, whose first
    Betti number edges - vertices + 1 is the rank.
    """
    l, orders = d.free_rank, d.orders
    k = len(orders)

    # Enumerate cosets: elements of Z_{q_1} x ... x Z_{q_k}, via BFS.
    identity = (0,) * k
    index_of = {identity: 0}
    vertices = [identity]
    i = 0
    while i < len(vertices):
        v = vertices[i]
        i += 1
        for j in range(k):
            w = v[:j] + ((v[j] + 1) % orders[j],) + v[j + 1:]
            if w not in index_of:
                if len(vertices) >= max_order:
                    raise OrderBoundExceeded(
                        f"coset enumeration exceeds bound {max_order}")
                index_of[w] = len(vertices)
                vertices.append(w)
    m = len(vertices)
    if m > max_order:
        raise OrderBoundExceeded(f"coset enumeration exceeds bound {max_order}")

    edges: list[tuple[int, int]] = []
    # Free generators map to the identity: m loops each.
    for _ in range(l):
        edges.extend((v, v) for v in range(m))
    # Cyclic generators step one coordinate; drop one edge per orbit cycle.
    for j in range(k):
        step = {}
        for v, tup in enumerate(vertices):
            w = tup[:j] + ((tup[j] + 1) % orders[j],) + tup[j + 1:]
            step[v] = index_of[w]
        visited = set()
        for start in range(m):
            if start in visited:
                continue
            cycle = [start]
            visited.add(start)
            v = step[start]
            while v != start:
                visited.add(v)
                cycle.append(v)
                v = step[v]
            # The relator disk fills this cycle: keep it as a path.
            for a in cycle[:-1]:
                edges.append((a, step[a]))
    return len(edges) - m + 1
