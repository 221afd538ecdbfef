"""The lattice of non-crossing partitions of {1, ..., n}.

A partition is stored canonically: blocks ordered by their minimum, elements
ascending inside each block.  The partial order is refinement, the join is
the non-crossing closure of the set-partition join, and the Mobius function
is obtained by inverting the zeta function of the lattice, never from a
closed product formula.  All values are exact integers.

Enumeration follows the first-block recursion: the block containing 1 cuts
the remaining points into independent gaps, each of which carries its own
non-crossing partition.  This never generates a crossing candidate, so no
filtering step is involved.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb

from .errors import CapacityError, DomainError, StructuralError

# Enumeration refuses beyond this order; NC(15) already has ~9.7e6 elements.
ORDER_CAP = 15

Blocks = tuple  # tuple[tuple[int, ...], ...] in canonical form


def catalan_number(m):
    """Number of non-crossing partitions of an m-element set."""
    if m < 0:
        raise DomainError("catalan_number needs m >= 0")
    return comb(2 * m, m) // (m + 1)


def _canonical_blocks(n, blocks):
    """Validate that ``blocks`` is a set partition of {1..n}; return it in
    canonical form.  Raises StructuralError otherwise."""
    seen = set()
    canon = []
    for block in blocks:
        b = tuple(sorted(block))
        if not b:
            raise StructuralError("empty block")
        for x in b:
            if not isinstance(x, int) or isinstance(x, bool):
                raise StructuralError("block elements must be integers, got %r" % (x,))
            if x < 1 or x > n:
                raise StructuralError("element %r outside 1..%d" % (x, n))
            if x in seen:
                raise StructuralError("element %d appears in two blocks" % x)
            seen.add(x)
        canon.append(b)
    if len(seen) != n:
        missing = sorted(set(range(1, n + 1)) - seen)
        raise StructuralError("not a partition of 1..%d, missing %r" % (n, missing))
    canon.sort(key=lambda b: b[0])
    return tuple(canon)


def _block_index(n, blocks):
    """Array mapping position i (1-based) to the index of its block."""
    idx = [0] * (n + 1)
    for j, block in enumerate(blocks):
        for x in block:
            idx[x] = j
    return idx


def _is_noncrossing_canonical(n, blocks):
    # Stack scan: walking left to right, a block may only resume while it is
    # the innermost open one.  Linear in n once the block index is built.
    if len(blocks) <= 1:
        return True
    idx = _block_index(n, blocks)
    remaining = [len(b) for b in blocks]
    stack = []
    opened = [False] * len(blocks)
    for pos in range(1, n + 1):
        b = idx[pos]
        if opened[b]:
            if stack[-1] != b:
                return False
        else:
            opened[b] = True
            stack.append(b)
        remaining[b] -= 1
        while stack and remaining[stack[-1]] == 0:
            stack.pop()
    return True


def is_noncrossing(blocks):
    """True when the given set partition has no crossing pair of blocks.

    ``blocks`` must be a valid set partition of {1..n} where n is the total
    number of elements; anything else raises StructuralError.
    """
    n = sum(len(tuple(b)) for b in blocks)
    canon = _canonical_blocks(n, blocks)
    return _is_noncrossing_canonical(n, canon)


class NcPartition:
    """A non-crossing partition of {1, ..., n}.

    Immutable and hashable; the constructor canonicalizes and rejects
    crossing or malformed block families.
    """

    __slots__ = ("n", "blocks")

    def __init__(self, n, blocks):
        canon = _canonical_blocks(n, blocks)
        if not _is_noncrossing_canonical(n, canon):
            raise StructuralError("crossing blocks: %r" % (canon,))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "blocks", canon)

    @classmethod
    def _trusted(cls, n, canon):
        # internal: canon is already canonical and non-crossing
        self = object.__new__(cls)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "blocks", canon)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("NcPartition is immutable")

    def num_blocks(self):
        return len(self.blocks)

    def block_containing(self, i):
        for block in self.blocks:
            if i in block:
                return block
        raise DomainError("%d is not in 1..%d" % (i, self.n))

    def __eq__(self, other):
        return (
            isinstance(other, NcPartition)
            and self.n == other.n
            and self.blocks == other.blocks
        )

    def __hash__(self):
        return hash((self.n, self.blocks))

    def __lt__(self, other):
        # canonical serialization order, used for deterministic listings
        return (self.n, self.blocks) < (other.n, other.blocks)

    def __repr__(self):
        return "NcPartition(%d, %r)" % (self.n, self.blocks)

    def __str__(self):
        return "|".join(" ".join(str(x) for x in b) for b in self.blocks)


def singletons(n):
    """The minimum of NC(n): every point alone."""
    return NcPartition._trusted(n, tuple((i,) for i in range(1, n + 1)))


def full(n):
    """The maximum of NC(n): one block."""
    return NcPartition._trusted(n, (tuple(range(1, n + 1)),))


def _shift_blocks(blocks, offset):
    return tuple(tuple(x + offset for x in b) for b in blocks)


@lru_cache(maxsize=None)
def _nc_blocks(n):
    """All canonical block tuples of NC(n), sorted lexicographically."""
    if n == 0:
        return ((),)
    out = []
    for size in range(0, n):
        for tail in itertools.combinations(range(2, n + 1), size):
            first = (1,) + tail
            # gaps between consecutive members of the first block
            gaps = []
            for a, b in zip(first, first[1:] + (n + 1,)):
                if b - a > 1:
                    gaps.append((a, b - a - 1))  # (left endpoint, width)
            if not gaps:
                out.append((first,))
                continue
            choices = [
                [_shift_blocks(sub, left) for sub in _nc_blocks(width)]
                for left, width in gaps
            ]
            for parts in itertools.product(*choices):
                merged = (first,)
                for part in parts:
                    merged += part
                out.append(merged)
    out.sort()
    return tuple(out)


def enumerate_nc(n):
    """All non-crossing partitions of {1..n} in canonical lexicographic
    order.  Counts match the Catalan numbers."""
    if n < 1:
        raise DomainError("enumerate_nc needs n >= 1")
    if n > ORDER_CAP:
        raise CapacityError("order %d exceeds cap %d" % (n, ORDER_CAP))
    return [NcPartition._trusted(n, blocks) for blocks in _nc_blocks(n)]


def _check_same_ground(p, q):
    if not isinstance(p, NcPartition) or not isinstance(q, NcPartition):
        raise StructuralError("expected NcPartition arguments")
    if p.n != q.n:
        raise StructuralError("ground sets differ: %d vs %d" % (p.n, q.n))


def leq(p, q):
    """Refinement order: every block of p lies inside a block of q."""
    _check_same_ground(p, q)
    idx = _block_index(q.n, q.blocks)
    for block in p.blocks:
        j = idx[block[0]]
        for x in block[1:]:
            if idx[x] != j:
                return False
    return True


def join(p, q):
    """Least upper bound of p and q in NC(n).

    Computed as the set-partition join followed by repeatedly merging any
    two blocks that cross; the scan that finds a crossing pair is the same
    stack walk used for validation.
    """
    _check_same_ground(p, q)
    n = p.n
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for part in (p, q):
        for block in part.blocks:
            for x in block[1:]:
                union(block[0], x)

    groups = {}
    for x in range(1, n + 1):
        groups.setdefault(find(x), []).append(x)
    blocks = sorted((tuple(b) for b in groups.values()), key=lambda b: b[0])

    # close under merging crossing pairs
    while True:
        crossing = _find_crossing_pair(n, blocks)
        if crossing is None:
            break
        i, j = crossing
        merged = tuple(sorted(blocks[i] + blocks[j]))
        blocks = [b for k, b in enumerate(blocks) if k not in (i, j)]
        blocks.append(merged)
        blocks.sort(key=lambda b: b[0])
    return NcPartition._trusted(n, tuple(blocks))


def _find_crossing_pair(n, blocks):
    idx = _block_index(n, blocks)
    remaining = [len(b) for b in blocks]
    stack = []
    opened = [False] * len(blocks)
    for pos in range(1, n + 1):
        b = idx[pos]
        if opened[b]:
            if stack[-1] != b:
                return (min(b, stack[-1]), max(b, stack[-1]))
        else:
            opened[b] = True
            stack.append(b)
        remaining[b] -= 1
        while stack and remaining[stack[-1]] == 0:
            stack.pop()
    return None


def meet(p, q):
    """Greatest lower bound: blockwise intersection (already non-crossing)."""
    _check_same_ground(p, q)
    idx_p = _block_index(p.n, p.blocks)
    idx_q = _block_index(q.n, q.blocks)
    groups = {}
    for x in range(1, p.n + 1):
        groups.setdefault((idx_p[x], idx_q[x]), []).append(x)
    blocks = sorted((tuple(b) for b in groups.values()), key=lambda b: b[0])
    return NcPartition._trusted(p.n, tuple(blocks))


# ---------------------------------------------------------------------------
# Mobius function by inversion of the zeta function.
#
# mu is multiplicative over the blocks of the upper partition, so every
# query reduces to mu(tau, top) for a relabeled partition tau of {1..m}.
# Those values are memoized on the canonical shape of tau and computed from
# sum_{tau <= rho <= top} mu(tau, rho) = 0 whenever tau < top.
# ---------------------------------------------------------------------------


def _restrict_relabel(blocks, members):
    """Blocks of a partition restricted to the set ``members`` (which is a
    union of whole blocks), relabeled to {1..len(members)} canonically."""
    relabel = {x: i + 1 for i, x in enumerate(sorted(members))}
    sub = [tuple(relabel[x] for x in b) for b in blocks if b[0] in members]
    sub.sort(key=lambda b: b[0])
    return tuple(sub)


def _set_partitions(items):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for sub in _set_partitions(rest):
        yield ((first,),) + sub
        for i in range(len(sub)):
            yield sub[:i] + ((first,) + sub[i],) + sub[i + 1 :]


def _coarsenings_below_top(blocks, n):
    """All non-crossing rho with blocks <= rho < top, as canonical tuples."""
    if len(blocks) == n:
        # blocks is the minimum; rho ranges over all of NC(n) except top
        for rho in _nc_blocks(n):
            if len(rho) > 1:
                yield rho
        return
    for grouping in _set_partitions(tuple(range(len(blocks)))):
        if len(grouping) == 1:
            continue
        merged = sorted(
            (tuple(sorted(itertools.chain.from_iterable(blocks[i] for i in group))))
            for group in grouping
        )
        merged = tuple(sorted(merged, key=lambda b: b[0]))
        if _is_noncrossing_canonical(n, merged):
            yield merged


@lru_cache(maxsize=None)
def _mu_to_top(blocks):
    """mu(tau, top) for a canonical non-crossing tau of {1..m}."""
    if len(blocks) == 1:
        return 1
    n = max(b[-1] for b in blocks)
    acc = 0
    for rho in _coarsenings_below_top(blocks, n):
        term = 1
        for block in rho:
            term *= _mu_to_top(_restrict_relabel(blocks, set(block)))
        acc += term
    return -acc


def mobius(p, q):
    """Mobius function mu(p, q) of the non-crossing partition lattice.

    Exact integer; raises DomainError when p is not a refinement of q
    (the function is undefined there, not zero).
    """
    _check_same_ground(p, q)
    if not leq(p, q):
        raise DomainError("mobius undefined: %s is not below %s" % (p, q))
    result = 1
    for block in q.blocks:
        result *= _mu_to_top(_restrict_relabel(p.blocks, set(block)))
    return result


def interval(p, q):
    """All partitions rho with p <= rho <= q, in canonical order."""
    _check_same_ground(p, q)
    if not leq(p, q):
        raise DomainError("empty interval: %s is not below %s" % (p, q))
    return [r for r in enumerate_nc(p.n) if leq(p, r) and leq(r, q)]
