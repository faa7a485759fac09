"""Zero-error analysis.

Builds confusability graphs from pairwise output-overlap tests, takes
strong graph powers for block codes, computes exact maximum independent
sets by branch and bound, and turns independence numbers into zero-error
rate lower bounds.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .channels import QuantumChannel, apply
from .errors import InvalidParameter, InvalidState, TooLarge
from .qmath import DensityMatrix, from_bloch

OVERLAP_TOL = 1e-10
_PRODUCT_VERTEX_LIMIT = 100000
_EXACT_MIS_LIMIT = 130


class ConfusabilityGraph:
    """Undirected graph whose edges join inputs the channel can confuse."""

    __slots__ = ("labels", "adjacency")

    def __init__(self, labels: Sequence[str], adjacency):
        labels = tuple(str(x) for x in labels)
        adj = np.array(adjacency, dtype=bool)
        n = len(labels)
        if adj.shape != (n, n):
            raise InvalidParameter(
                f"adjacency shape {adj.shape} does not match {n} labels"
            )
        if not np.array_equal(adj, adj.T):
            raise InvalidParameter("adjacency must be symmetric")
        if adj.diagonal().any():
            raise InvalidParameter("adjacency must have an empty diagonal")
        adj.setflags(write=False)
        self.labels = labels
        self.adjacency = adj

    @property
    def vertex_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    def degree(self, v: int) -> int:
        return int(self.adjacency[v].sum())

    def is_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i, j])

    def edges(self):
        idx_i, idx_j = np.nonzero(np.triu(self.adjacency, 1))
        return [(int(i), int(j)) for i, j in zip(idx_i, idx_j)]

    def __repr__(self):
        return f"ConfusabilityGraph({self.vertex_count} vertices, {self.edge_count} edges)"


@dataclass(frozen=True)
class ZeroErrorReport:
    """Lower bound on the zero-error capacity from n channel uses."""

    n: int
    K: int
    rate: float
    witness: Tuple[str, ...] = ()
    notes: tuple = field(default_factory=tuple)


def non_adjacent(channel: QuantumChannel, rho1, rho2) -> bool:
    """True when the two inputs stay perfectly distinguishable.

    Tests whether the output overlap Tr(N(rho1) N(rho2)) vanishes, which
    holds exactly when the outputs have orthogonal supports.
    """
    out1 = apply(channel, rho1).matrix
    out2 = apply(channel, rho2).matrix
    overlap = float(np.trace(out1 @ out2).real)
    return overlap <= OVERLAP_TOL


def pauli_eigenstates():
    """The six single-qubit Pauli eigenstates, labeled +z,-z,+x,-x,+y,-y."""
    vectors = {
        "+z": (0.0, 0.0, 1.0),
        "-z": (0.0, 0.0, -1.0),
        "+x": (1.0, 0.0, 0.0),
        "-x": (-1.0, 0.0, 0.0),
        "+y": (0.0, 1.0, 0.0),
        "-y": (0.0, -1.0, 0.0),
    }
    return [(name, from_bloch(r)) for name, r in vectors.items()]


def confusability_graph(
    channel: QuantumChannel,
    states: Optional[Sequence[DensityMatrix]] = None,
    labels: Optional[Sequence[str]] = None,
) -> ConfusabilityGraph:
    """Graph over candidate inputs with edges between confusable pairs.

    The default candidate alphabet is the six Pauli eigenstates; two
    vertices are joined exactly when the channel outputs overlap.
    """
    if states is None:
        named = pauli_eigenstates()
        labels = [name for name, _ in named]
        states = [rho for _, rho in named]
    states = list(states)
    if not states:
        raise InvalidState("need at least one candidate state")
    if labels is None:
        labels = [f"s{k}" for k in range(len(states))]
    outs = [apply(channel, rho).matrix for rho in states]
    n = len(outs)
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            overlap = float(np.trace(outs[i] @ outs[j]).real)
            adj[i, j] = adj[j, i] = overlap > OVERLAP_TOL
    return ConfusabilityGraph(labels, adj)


def strong_product(g: ConfusabilityGraph, n: int) -> ConfusabilityGraph:
    """n-fold strong power: codewords are n-tuples of single-use inputs.

    Two distinct tuples are adjacent exactly when every coordinate pair
    is adjacent or equal, i.e. no coordinate distinguishes them.
    """
    if n < 1:
        raise InvalidParameter(f"need n >= 1, got {n}")
    size = g.vertex_count**n
    if size > _PRODUCT_VERTEX_LIMIT:
        raise TooLarge(
            f"{g.vertex_count}^{n} = {size} vertices exceeds {_PRODUCT_VERTEX_LIMIT}"
        )
    loop = g.adjacency | np.eye(g.vertex_count, dtype=bool)
    acc = loop.astype(np.uint8)
    for _ in range(n - 1):
        acc = np.kron(acc, loop.astype(np.uint8))
    adj = acc.astype(bool)
    np.fill_diagonal(adj, False)
    labels = [
        "(" + ",".join(combo) + ")"
        for combo in itertools.product(g.labels, repeat=n)
    ]
    return ConfusabilityGraph(labels, adj)


def _greedy_independent_set(full: int, masks) -> int:
    """Min-degree greedy independent set, used to seed the exact search."""
    chosen = 0
    cand = full
    while cand:
        best_v, best_deg = -1, None
        rest = cand
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length() - 1
            deg = (masks[v] & cand).bit_count()
            if best_deg is None or deg < best_deg:
                best_v, best_deg = v, deg
        chosen |= 1 << best_v
        cand &= ~masks[best_v] & ~(1 << best_v)
    return chosen


def max_independent_set(g: ConfusabilityGraph) -> Tuple[int, Tuple[int, ...]]:
    """Exact independence number with one witness set.

    Runs as a max-clique search on the complement graph over bitsets: at
    every node the candidates are greedily colored (each color class is a
    clique of the original graph, so the color count bounds how much the
    independent set can still grow) and branching walks the colors from
    the top. Seeded with a min-degree greedy solution. Vertex order is
    fixed, so results are deterministic; the witness is re-verified
    edge-free before returning.
    """
    nv = g.vertex_count
    if nv > _EXACT_MIS_LIMIT:
        raise TooLarge(f"{nv} vertices exceeds the exact-search limit {_EXACT_MIS_LIMIT}")
    if nv == 0:
        return 0, ()

    order = sorted(range(nv), key=lambda v: (-g.degree(v), v))
    pos = {v: k for k, v in enumerate(order)}
    masks = [0] * nv
    for i, j in g.edges():
        masks[pos[i]] |= 1 << pos[j]
        masks[pos[j]] |= 1 << pos[i]
    full = (1 << nv) - 1
    comp = [full & ~masks[v] & ~(1 << v) for v in range(nv)]

    best_mask = _greedy_independent_set(full, masks)
    best_size = best_mask.bit_count()

    def color_sort(cand: int):
        """Candidates in ascending greedy-color order with their colors."""
        vs, colors = [], []
        color = 0
        rest = cand
        while rest:
            color += 1
            avail = rest
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail ^= low
                avail &= ~comp[v]
                rest ^= low
                vs.append(v)
                colors.append(color)
        return vs, colors

    def expand(cur_mask: int, cur_size: int, cand: int):
        nonlocal best_size, best_mask
        vs, colors = color_sort(cand)
        for i in range(len(vs) - 1, -1, -1):
            if cur_size + colors[i] <= best_size:
                return
            v = vs[i]
            bit = 1 << v
            new_cand = cand & comp[v]
            if new_cand:
                expand(cur_mask | bit, cur_size + 1, new_cand)
            elif cur_size + 1 > best_size:
                best_size = cur_size + 1
                best_mask = cur_mask | bit
            cand &= ~bit

    expand(0, 0, full)

    witness = tuple(sorted(order[k] for k in range(nv) if best_mask >> k & 1))
    for a, b in itertools.combinations(witness, 2):
        if g.is_edge(a, b):
            raise AssertionError("witness is not independent")
    return best_size, witness


def zero_error_lower_bound(
    g: ConfusabilityGraph, n: int, hsw_upper: Optional[float] = None
) -> ZeroErrorReport:
    """Zero-error rate achievable with n uses: log2 alpha(G^n) / n.

    Always a lower bound on the zero-error capacity, which is itself at
    most the classical capacity; pass hsw_upper to have that ordering
    recorded against a concrete capacity value.
    """
    if n < 1:
        raise InvalidParameter(f"need n >= 1, got {n}")
    g_n = strong_product(g, n) if n > 1 else g
    alpha, witness = max_independent_set(g_n)
    rate = math.log2(alpha) / n
    notes = ["lower bound from finite block length; rate <= zero-error capacity"]
    if hsw_upper is not None:
        if rate <= hsw_upper + 1e-3:
            notes.append(f"ordering holds: rate <= classical capacity {hsw_upper:.6f}")
        else:
            notes.append(
                f"ordering violated: rate {rate:.6f} exceeds classical capacity {hsw_upper:.6f}"
            )
    return ZeroErrorReport(
        n=n,
        K=alpha,
        rate=rate,
        witness=tuple(g_n.labels[v] for v in witness),
        notes=tuple(notes),
    )


def pentagon_graph() -> ConfusabilityGraph:
    """The 5-cycle: each vertex confusable with its two cyclic neighbors."""
    adj = np.zeros((5, 5), dtype=bool)
    for i in range(5):
        adj[i, (i + 1) % 5] = adj[(i + 1) % 5, i] = True
    return ConfusabilityGraph([f"v{i}" for i in range(5)], adj)


def graph_to_json(g: ConfusabilityGraph) -> dict:
    return {"labels": list(g.labels), "edges": [[i, j] for i, j in g.edges()]}


def graph_from_json(data: dict) -> ConfusabilityGraph:
    labels = data.get("labels")
    if not labels:
        raise InvalidParameter("graph JSON needs a non-empty 'labels' list")
    n = len(labels)
    adj = np.zeros((n, n), dtype=bool)
    for pair in data.get("edges", []):
        i, j = int(pair[0]), int(pair[1])
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise InvalidParameter(f"bad edge {pair}")
        adj[i, j] = adj[j, i] = True
    return ConfusabilityGraph(labels, adj)
