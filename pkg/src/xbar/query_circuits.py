"""Gate-level query circuits over the comparison matrix.

Everything here reads the n x n matrix a sorting run leaves behind:
row i holds a 1 for every element that lost to element i, so the row of
the minimum is all zeros, the row of the maximum is all ones off the
diagonal, and each row's popcount is its element's rank.

Circuits provided:

* one-hot -> binary encoder (OR per output bit), plus a priority variant
  that lets the smallest hot index win;
* min / max index finders (one NOR / AND per row, then the encoder);
* exact-count rank counters built from threshold-gate pairs: the m-th
  detector ANDs "at least m ones" with "not at least m+1 ones", and the
  resulting one-hot feeds the encoder;
* popcount adder trees built from fan-in-2 carry-prefix adders
  (HALF_ADD sum cells, AND/OR carry cells), used both to rank rows and
  to select the row whose rank equals a target via two's-complement
  subtraction and a zero detector;
* a probabilistic rank-at-least-j test that sums row bits in k-wide
  chunks, with its exact miss probability as a fraction.

Depth accounting comes from `xbar.netlist.depth`; unit-delay THRESHOLD
gates are reported with their fan-in so the optimism is visible.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .array_builder import Layout
from .netlist import DepthReport, NetBuilder, Netlist, depth, evaluate, legalize
from .pe_simulator import ComparisonMatrix, RankVector

__all__ = [
    "RankQueryResult",
    "build_encoder",
    "build_priority_encoder",
    "build_min_circuit",
    "build_max_circuit",
    "build_ones_counter",
    "build_rank_circuit_threshold",
    "build_popcount_tree",
    "rank_via_adder_tree",
    "select_rank",
    "rank_at_least_probabilistic",
    "search",
    "min_index",
    "max_index",
    "matrix_assignments",
    "row_assignments",
    "decode_bits",
    "depth",
    "evaluate",
    "legalize",
    "DepthReport",
    "Netlist",
    "ADDER_TREE_DEPTH_MARGIN",
]

# Per-adder depth margin of the carry-prefix cell structure, measured once
# on the built popcount trees: depth(tree for n inputs) never exceeds
# ceil(lg n) * (2 * ceil(lg ceil(lg n)) + this constant).
ADDER_TREE_DEPTH_MARGIN = 2


@dataclass(frozen=True, slots=True)
class RankQueryResult:
    """Outcome of an index query; `exact` is False only for probabilistic tests."""

    index: int | None
    exact: bool


def _encoder(nb: NetBuilder, wires: list, with_valid: bool):
    """OR-gate encoder: output bit j ORs the inputs whose index has bit j set."""
    n = len(wires)
    nbits = max(1, (n - 1).bit_length())
    bits = [
        nb.or_(*[wires[i] for i in range(n) if (i >> j) & 1])
        for j in range(nbits)
    ]
    valid = nb.or_(*wires) if with_valid else None
    return bits, valid


def build_encoder(n: int, with_valid: bool = True) -> Netlist:
    """n-input one-hot to binary encoder with ceil(lg n) output bits.

    With `with_valid`, a companion `valid` output ORs all inputs; the
    index outputs are meaningless while it is low.  Callers that can
    guarantee exactly one hot input drop the valid wire.
    """
    if n < 2:
        raise ValueError(f"encoder needs n >= 2, got {n}")
    nb = NetBuilder(f"encoder{n}")
    wires = [nb.input(f"x{i}") for i in range(n)]
    bits, valid = _encoder(nb, wires, with_valid)
    for k, b in enumerate(bits):
        nb.output(f"bit{k}", b)
    if with_valid:
        nb.output("valid", valid)
    return nb.build()


def build_priority_encoder(n: int) -> Netlist:
    """Encoder variant where the smallest hot input wins.

    Input i is masked by a NOR over all lower inputs before the plain
    encoder stage; `valid` ORs the raw inputs.
    """
    if n < 2:
        raise ValueError(f"encoder needs n >= 2, got {n}")
    nb = NetBuilder(f"priority_encoder{n}")
    m = [nb.input(f"m{i}") for i in range(n)]
    masked = [m[0]]
    masked += [nb.and_(m[i], nb.nor_(*m[:i])) for i in range(1, n)]
    bits, _ = _encoder(nb, masked, with_valid=False)
    for k, b in enumerate(bits):
        nb.output(f"bit{k}", b)
    nb.output("valid", nb.or_(*m))
    return nb.build()


def build_min_circuit(n: int) -> Netlist:
    """Index of the all-zero matrix row: one NOR per row, then the encoder.

    Inputs are the n(n-1) off-diagonal bits row-major (`t_<row>_<col>`).
    The row flags are one-hot for any matrix produced by a full sort, so
    no valid wire is needed.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    nb = NetBuilder(f"min{n}")
    rows = [
        [nb.input(f"t_{i}_{k}") for k in range(n) if k != i]
        for i in range(n)
    ]
    flags = [nb.nor_(*row) for row in rows]
    bits, _ = _encoder(nb, flags, with_valid=False)
    for k, b in enumerate(bits):
        nb.output(f"bit{k}", b)
    return nb.build()


def build_max_circuit(n: int) -> Netlist:
    """Index of the all-ones row (diagonal treated as constant 1): AND per row."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    nb = NetBuilder(f"max{n}")
    rows = [
        [nb.input(f"t_{i}_{k}") for k in range(n) if k != i]
        for i in range(n)
    ]
    flags = [nb.and_(*row) for row in rows]
    bits, _ = _encoder(nb, flags, with_valid=False)
    for k, b in enumerate(bits):
        nb.output(f"bit{k}", b)
    return nb.build()


def _exact_count_onehot(nb: NetBuilder, wires: list) -> list:
    """Exactly-m detectors for m = 0..len(wires)-1, one threshold pair each.

    Detector m fires when at least m inputs are high but not m+1; the
    m = 0 case needs only the inverted at-least-1 gate.
    """
    n = len(wires)
    es = []
    for m in range(n):
        upper = nb.not_(nb.threshold(list(wires), m + 1))
        if m == 0:
            es.append(upper)
        else:
            es.append(nb.and_(upper, nb.threshold(list(wires), m)))
    return es


def build_ones_counter(n: int) -> Netlist:
    """Population counter for an n-bit string via threshold-gate pairs.

    Outputs the one-hot `e0..e<n-1>` (exactly-m detectors) and the
    encoded count `bit*`.  Constant depth: threshold, inverter, AND,
    encoder OR.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    nb = NetBuilder(f"ones_counter{n}")
    wires = [nb.input(f"b{i}") for i in range(n)]
    es = _exact_count_onehot(nb, wires)
    for m, e in enumerate(es):
        nb.output(f"e{m}", e)
    bits, _ = _encoder(nb, es, with_valid=False)
    for k, b in enumerate(bits):
        nb.output(f"bit{k}", b)
    return nb.build()


def build_rank_circuit_threshold(n: int) -> Netlist:
    """All n ranks at once: one exact-count counter + encoder per matrix row.

    Inputs are the full n^2 matrix bits (`t_<row>_<col>`, diagonal
    included); outputs are `rank<i>_bit<k>` for every row i.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    nb = NetBuilder(f"rank_threshold{n}")
    rows = [
        [nb.input(f"t_{i}_{k}") for k in range(n)]
        for i in range(n)
    ]
    for i, row in enumerate(rows):
        es = _exact_count_onehot(nb, row)
        bits, _ = _encoder(nb, es, with_valid=False)
        for k, b in enumerate(bits):
            nb.output(f"rank{i}_bit{k}", b)
    return nb.build()


def _bk_carries(nb: NetBuilder, g: list, p: list) -> list:
    """Carry-prefix network (sparse two-sweep form); returns carry-out per position."""
    w = len(g)
    G = list(g)
    P = list(p)
    d = 1
    while d < w:
        for i in range(2 * d - 1, w, 2 * d):
            G[i] = nb.or_(G[i], nb.and_(P[i], G[i - d]))
            P[i] = nb.and_(P[i], P[i - d])
        d *= 2
    d //= 2
    while d >= 1:
        for i in range(3 * d - 1, w, 2 * d):
            G[i] = nb.or_(G[i], nb.and_(P[i], G[i - d]))
        d //= 2
    return G


def _bk_add(nb: NetBuilder, a_bits: list, b_bits: list, cin=0) -> list:
    """Add two little-endian bit vectors with a carry-prefix adder.

    Operands may mix wires and constant bits; the result has
    max(len(a), len(b)) + 1 bits including the carry out.
    """
    w = max(len(a_bits), len(b_bits))
    a = list(a_bits) + [0] * (w - len(a_bits))
    b = list(b_bits) + [0] * (w - len(b_bits))
    p = [nb.xor2(a[i], b[i]) for i in range(w)]
    g = [nb.and_(a[i], b[i]) for i in range(w)]
    g[0] = nb.or_(g[0], nb.and_(p[0], cin))
    carries = _bk_carries(nb, g, p)
    sums = [nb.xor2(p[0], cin)]
    sums += [nb.xor2(p[i], carries[i - 1]) for i in range(1, w)]
    sums.append(carries[w - 1])
    return sums


def _popcount_bits(nb: NetBuilder, wires: list) -> list:
    """Sum of single bits through ceil(lg n) levels of pairwise adders."""
    values = [[w] for w in wires]
    while len(values) > 1:
        nxt = [
            _bk_add(nb, values[i], values[i + 1])
            for i in range(0, len(values) - 1, 2)
        ]
        if len(values) % 2:
            nxt.append(values[-1])
        values = nxt
    return values[0]


def build_popcount_tree(n: int) -> Netlist:
    """Adder tree summing n input bits `b0..b<n-1>` into a binary count.

    Every cell has fan-in at most 2, so the bounded and unbounded depth
    of this netlist coincide.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    nb = NetBuilder(f"popcount{n}")
    wires = [nb.input(f"b{i}") for i in range(n)]
    total = _popcount_bits(nb, wires)
    for k, bit in enumerate(total):
        nb.output(f"bit{k}", bit)
    return nb.build()


def rank_via_adder_tree(t: ComparisonMatrix) -> tuple[RankVector, DepthReport]:
    """Rank every row by evaluating the popcount adder tree on it.

    Returns the ranks together with the measured critical-path depth of
    the tree at fan-in 2.
    """
    n = t.n
    net = build_popcount_tree(n)
    ranks = []
    for i in range(n):
        out = evaluate(net, {f"b{k}": t.bits[i][k] for k in range(n)})
        ranks.append(decode_bits(out))
    return RankVector(tuple(ranks)), depth(net, 2)


def select_rank(t: ComparisonMatrix, r: int) -> RankQueryResult:
    """Index of the unique row whose popcount equals r.

    Circuit route: per-row popcount tree, add the two's complement of r
    over ceil(lg n) + 1 bits, NOR the difference bits into a zero flag,
    encode the one-hot flags.  Valid on any matrix from a full sort,
    where ranks form a permutation.
    """
    n = t.n
    if not 0 <= r <= n - 1:
        raise ValueError(f"rank {r} outside 0..{n - 1}")
    width = (n - 1).bit_length() + 1
    comp = (~r) & ((1 << width) - 1)
    comp_bits = [(comp >> b) & 1 for b in range(width)]
    nb = NetBuilder(f"select_rank{n}")
    flags = []
    for i in range(n):
        row = [nb.input(f"t_{i}_{k}") for k in range(n)]
        total = (_popcount_bits(nb, row) + [0] * width)[:width]
        diff = _bk_add(nb, total, comp_bits, cin=1)[:width]
        flags.append(nb.nor_(*diff))
    bits, _ = _encoder(nb, flags, with_valid=False)
    for k, b in enumerate(bits):
        nb.output(f"bit{k}", b)
    out = evaluate(nb.build(), matrix_assignments(t))
    return RankQueryResult(index=decode_bits(out), exact=True)


def rank_at_least_probabilistic(
    row: Sequence[int], j: int, k: int
) -> tuple[bool, Fraction]:
    """Chunked test for "this row holds at least j ones", plus its miss odds.

    The row is zero-padded to a multiple of k and split into k-bit
    chunks; the verdict is True when some single chunk already holds at
    least j ones, which can under-report when the ones are spread out.
    The returned Fraction is the exact probability that a uniform random
    row of the padded length shows no qualifying chunk:
    (sum_{i<j} C(k,i))^(n/k) / 2^n.
    """
    if k < 1:
        raise ValueError(f"chunk width must be >= 1, got {k}")
    if not 1 <= j <= k:
        raise ValueError(f"need 1 <= j <= k; no {k}-bit chunk can hold {j} ones")
    bits = [int(b) for b in row]
    if any(b not in (0, 1) for b in bits):
        raise ValueError("row must be 0/1 valued")
    if len(bits) % k:
        bits += [0] * (k - len(bits) % k)
    n = len(bits)
    verdict = any(sum(bits[i:i + k]) >= j for i in range(0, n, k))
    quiet_chunks = sum(comb(k, i) for i in range(j))
    miss = Fraction(quiet_chunks ** (n // k), 2 ** n)
    return verdict, miss


def search(layout: Layout, values: Sequence[int], key) -> RankQueryResult:
    """Find the smallest class index whose element equals `key`.

    One replicate per class suffices: each designated slot tests its
    loaded value against the broadcast key, and the n-bit match vector
    feeds the priority encoder.  Returns index None when the key is
    absent (the encoder's valid wire stays low).
    """
    if len(values) != layout.n:
        raise ValueError(f"got {len(values)} values for {layout.n} classes")
    matches = [1 if values[i] == key else 0 for i in range(layout.n)]
    net = build_priority_encoder(layout.n)
    out = evaluate(net, {f"m{i}": matches[i] for i in range(layout.n)})
    if not out["valid"]:
        return RankQueryResult(index=None, exact=True)
    return RankQueryResult(index=decode_bits(out), exact=True)


def min_index(t: ComparisonMatrix) -> int:
    """Evaluate the min circuit on a matrix."""
    out = evaluate(build_min_circuit(t.n), matrix_assignments(t, diagonal=False))
    return decode_bits(out)


def max_index(t: ComparisonMatrix) -> int:
    """Evaluate the max circuit on a matrix."""
    out = evaluate(build_max_circuit(t.n), matrix_assignments(t, diagonal=False))
    return decode_bits(out)


def matrix_assignments(t: ComparisonMatrix, diagonal: bool = True) -> dict[str, int]:
    """Bind matrix bits to the `t_<row>_<col>` input wires."""
    return {
        f"t_{i}_{k}": t.bits[i][k]
        for i in range(t.n)
        for k in range(t.n)
        if diagonal or i != k
    }


def row_assignments(bits: Sequence[int], prefix: str = "b") -> dict[str, int]:
    """Bind a bit string to `b0..b<n-1>` input wires."""
    return {f"{prefix}{i}": int(b) for i, b in enumerate(bits)}


def decode_bits(outputs: dict, prefix: str = "bit") -> int:
    """Reassemble an integer from `bit0, bit1, ...` outputs (LSB first)."""
    total = 0
    k = 0
    while f"{prefix}{k}" in outputs:
        total += int(outputs[f"{prefix}{k}"]) << k
        k += 1
    return total
