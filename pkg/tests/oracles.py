"""Brute-force reference computations the tests check the library against.

Everything here is deliberately naive and independent of the library's
own code paths.
"""

from collections import Counter


def oracle_ranks(values):
    """rank(i) = #{k: A[k] < A[i]} + #{k < i: A[k] = A[i]}."""
    return [
        sum(1 for k, v in enumerate(values) if v < values[i] or (v == values[i] and k < i))
        for i in range(len(values))
    ]


def argmin_index(values):
    """First index holding the minimum (ties go to the smaller index)."""
    return min(range(len(values)), key=lambda i: (values[i], i))


def argmax_index(values):
    """Last index holding the maximum (ties go to the larger index)."""
    return max(range(len(values)), key=lambda i: (values[i], i))


def pair_counts(slots):
    """How often each unordered class pair sits on a crosspoint."""
    return Counter(
        (min(a, b), max(a, b)) for a, b in zip(slots, slots[1:]) if a != b
    )


def brute_cycles(n, j):
    """Cycles of i -> (i+j) mod n found by scanning every start element."""
    seen = set()
    cycles = []
    for start in range(n):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        cur = (start + j) % n
        while cur != start:
            cyc.append(cur)
            seen.add(cur)
            cur = (cur + j) % n
        pivot = cyc.index(min(cyc))
        cycles.append(tuple(cyc[pivot:] + cyc[:pivot]))
    return sorted(cycles)
