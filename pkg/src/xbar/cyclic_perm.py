"""Exact arithmetic on the cyclic shift group over n class ids.

The generator sends class i to (i + 1) mod n.  Its powers, their
disjoint-cycle decompositions, and the grouping of those cycles by
smallest element (the Q partition) are the raw material from which
crosspoint-array layouts are built.

Permutations are stored as the pair (n, j) and the mapping is computed
on demand, so very large n stays cheap.
"""

from dataclasses import dataclass
from math import gcd


@dataclass(frozen=True, slots=True)
class Permutation:
    """The j-th power of the cyclic shift on {0, ..., n-1}: i -> (i + j) mod n.

    j runs from 1 to n; j == n is the identity.
    """

    n: int
    j: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least 2 classes, got n={self.n}")
        if not 1 <= self.j <= self.n:
            raise ValueError(f"exponent must lie in 1..{self.n}, got j={self.j}")

    def apply(self, i: int) -> int:
        return (i + self.j) % self.n

    def mapping(self) -> tuple[int, ...]:
        """The images of 0..n-1 in order."""
        return tuple((i + self.j) % self.n for i in range(self.n))

    @property
    def is_identity(self) -> bool:
        return self.j == self.n


@dataclass(frozen=True, slots=True)
class Cycle:
    """One cycle of a shift power, rotated so the smallest class id comes first.

    `exponent` is the j of the owning power; consecutive elements differ
    by j mod n.
    """

    elements: tuple[int, ...]
    exponent: int

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def first(self) -> int:
        return self.elements[0]


@dataclass(frozen=True, slots=True)
class QPartition:
    """Cycles of the powers 1..n/2, grouped by their smallest element.

    ``sets[i]`` holds every cycle whose first element is i, ordered by
    ascending exponent; the unique 2-element cycle (from the n/2-th power)
    is therefore always last in its group.
    """

    n: int
    sets: tuple[tuple[Cycle, ...], ...]


def power(n: int, j: int) -> Permutation:
    """The j-th power of the cyclic shift on n class ids (1 <= j <= n)."""
    return Permutation(n, j)


def cycle_decomposition(perm: Permutation) -> list[Cycle]:
    """Disjoint cycles of `perm`, each written smallest-element-first.

    There are exactly gcd(n, j) cycles and their smallest elements are
    0..gcd(n, j)-1, so the returned list is ordered by first element.
    """
    n, j = perm.n, perm.j
    cycles = []
    for start in range(gcd(n, j)):
        elems = [start]
        cur = (start + j) % n
        while cur != start:
            elems.append(cur)
            cur = (cur + j) % n
        cycles.append(Cycle(tuple(elems), j))
    return cycles


def partition_Q(n: int) -> QPartition:
    """Group the cycles of the first n/2 shift powers by smallest element.

    Requires even n >= 4.  Every cycle of the powers 1..n/2 starts at a
    class id below n/2, so exactly n/2 groups come out, and each group
    ends with its single 2-element cycle.
    """
    if n % 2:
        raise ValueError(f"Q partition is defined for even n, got {n}")
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    return _partition_q(n)


def _partition_q(n: int) -> QPartition:
    # Internal variant that also accepts the degenerate n == 2 frame
    # needed when extending an even layout to n == 3 classes.
    sets: list[list[Cycle]] = [[] for _ in range(n // 2)]
    for j in range(1, n // 2 + 1):
        for cyc in cycle_decomposition(Permutation(n, j)):
            sets[cyc.first].append(cyc)
    return QPartition(n, tuple(tuple(group) for group in sets))
