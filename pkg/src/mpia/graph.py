"""Bipartite factor graph over precoders, receive filters and leakage terms.

Nodes are (kind, index) tuples with kind in {"U", "V", "f", "g"}: receive
filter variables U_i, precoder variables V_j, receiver-side leakage functions
f_i and transmitter-side leakage functions g_j. Edges follow the functional
dependencies of the leakage terms:

  f_i -- U_i        always
  f_i -- V_j        for j != i where mask[i, j]
  g_j -- V_j        always
  g_j -- U_i        for i != j where mask[i, j]

There are no self-interference edges, so with full connectivity each function
node has exactly K neighbors and the graph carries 2*K^2 edges.
"""

from __future__ import annotations

from dataclasses import dataclass

from .channel import ChannelSet

Node = tuple[str, int]

VARIABLE_KINDS = ("U", "V")
FUNCTION_KINDS = ("f", "g")
_KIND_RANK = {"U": 0, "V": 1, "f": 2, "g": 3}


def node_key(node: Node) -> tuple[int, int]:
    """Stable total order on nodes: kind rank, then user index."""
    kind, idx = node
    return (_KIND_RANK[kind], idx)


def is_variable(node: Node) -> bool:
    return node[0] in VARIABLE_KINDS


@dataclass(frozen=True)
class FactorGraph:
    """Adjacency view of the alignment factor graph for one ChannelSet."""

    channels: ChannelSet
    adjacency: dict[Node, tuple[Node, ...]]

    @property
    def nodes(self) -> list[Node]:
        return sorted(self.adjacency, key=node_key)

    @property
    def variable_nodes(self) -> list[Node]:
        return [n for n in self.nodes if is_variable(n)]

    @property
    def function_nodes(self) -> list[Node]:
        return [n for n in self.nodes if not is_variable(n)]

    @property
    def edges(self) -> list[tuple[Node, Node]]:
        """Undirected edges, listed once as (variable, function)."""
        out = []
        for var in self.variable_nodes:
            for fn in self.adjacency[var]:
                out.append((var, fn))
        return out

    def message_dim(self, var: Node) -> int:
        """Side length of the quadratic forms carried on edges at this variable."""
        if var[0] == "U":
            return self.channels.N
        if var[0] == "V":
            return self.channels.M
        raise ValueError(f"message dimension is defined per variable node, got {var}")


def build_graph(channels: ChannelSet) -> FactorGraph:
    """Construct the factor graph induced by the connectivity mask."""
    K = channels.K
    adjacency: dict[Node, list[Node]] = {}
    for kind in ("U", "V", "f", "g"):
        for i in range(K):
            adjacency[(kind, i)] = []

    def connect(a: Node, b: Node) -> None:
        adjacency[a].append(b)
        adjacency[b].append(a)

    for i in range(K):
        connect(("U", i), ("f", i))
        connect(("V", i), ("g", i))
    for i in range(K):
        for j in range(K):
            if i != j and channels.mask[i, j]:
                connect(("V", j), ("f", i))
                connect(("U", i), ("g", j))

    frozen = {node: tuple(sorted(nbrs, key=node_key)) for node, nbrs in adjacency.items()}
    return FactorGraph(channels=channels, adjacency=frozen)


def neighbors(graph: FactorGraph, node: Node) -> tuple[Node, ...]:
    """Neighbor set of a node, sorted by (kind, index)."""
    try:
        return graph.adjacency[node]
    except KeyError:
        raise KeyError(f"node {node} is not in the graph") from None
