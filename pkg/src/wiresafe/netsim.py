"""
Acyclic multicast networks with linear network coding over GF(2).

Packets are GF(2^m) symbols; every node forwards GF(2)-combinations (XORs) of the packets it
receives, so each edge carries (global coding vector)·X for the source packets X.
"""

from __future__ import annotations

import json
import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import CyclicNetworkError, DimensionMismatchError, InfeasibleSinkError
from .gf import BaseMatrix, ExtVector, FieldElement, FieldSpec, expand, flatten, rank_base_matrix, solve

logger = logging.getLogger(__name__)

__all__ = [
    "BUILTIN_TOPOLOGIES",
    "Edge",
    "LinearNetworkCode",
    "Network",
    "Packet",
    "WiretapSet",
    "assign_code",
    "assign_random_code",
    "attach_headers",
    "butterfly",
    "butterfly_xor_code",
    "decode_from_headers",
    "diamond",
    "edge_payloads",
    "feasible_fraction",
    "is_feasible",
    "line",
    "load_network",
    "mincut",
    "sink_decode",
    "sink_packets",
    "topological_edges",
    "transfer_matrix",
    "transmit",
    "wiretap_matrix",
]

GlobalVector = Tuple[int, ...]


@dataclass(frozen=True)
class Edge:
    """A unit-capacity directed edge with a stable id."""

    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class Network:
    """A directed acyclic multigraph with one source and one or more sinks.

    Edge order is the declaration order; it fixes the order of transfer-matrix rows and of
    wiretap-matrix rows.
    """

    nodes: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    source: str
    sinks: Tuple[str, ...]
    name: str = "custom"

    def __post_init__(self) -> None:
        known = set(self.nodes)
        if len(known) != len(self.nodes):
            raise ValueError("node names must be unique")
        if self.source not in known:
            raise ValueError(f"source '{self.source}' is not a node")
        if not self.sinks:
            raise ValueError("a network needs at least one sink")
        for sink in self.sinks:
            if sink not in known:
                raise ValueError(f"sink '{sink}' is not a node")
            if sink == self.source:
                raise ValueError("the source cannot also be a sink")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise ValueError("edge ids must be unique")
        for e in self.edges:
            if e.tail not in known or e.head not in known:
                raise ValueError(f"edge '{e.id}' joins unknown nodes")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def edge_ids(self) -> Tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(f"no edge with id '{edge_id}'")

    def in_edges(self, node: str) -> Tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.head == node)

    def out_edges(self, node: str) -> Tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.tail == node)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], name: str = "custom") -> Network:
        return cls(
            nodes=tuple(str(v) for v in data["nodes"]),
            edges=tuple(Edge(str(e["id"]), str(e["from"]), str(e["to"])) for e in data["edges"]),
            source=str(data["source"]),
            sinks=tuple(str(t) for t in data["sinks"]),
            name=str(data.get("name", name)),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "nodes": list(self.nodes),
            "edges": [{"id": e.id, "from": e.tail, "to": e.head} for e in self.edges],
            "source": self.source,
            "sinks": list(self.sinks),
        }

    @classmethod
    def load(cls, path: Union[str, Path]) -> Network:
        path = Path(path)
        return cls.from_dict(json.loads(path.read_text()), name=path.stem)

    def dump(self, path: Union[str, Path]) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))


def butterfly() -> Network:
    """Seven-edge butterfly: the relay c XORs what it hears from s and b and feeds both sinks."""
    edges = [("e1", "s", "t1"), ("e2", "s", "b"), ("e3", "s", "c"), ("e4", "b", "t2"), ("e5", "b", "c")]
    edges += [("e6", "c", "t1"), ("e7", "c", "t2")]
    return Network(
        nodes=("s", "b", "c", "t1", "t2"),
        edges=tuple(Edge(*e) for e in edges),
        source="s",
        sinks=("t1", "t2"),
        name="butterfly",
    )


def line(length: int = 3) -> Network:
    """A single path s -> v1 -> ... -> t of `length` edges."""
    if length < 1:
        raise ValueError("a line needs at least one edge")
    nodes = ["s"] + [f"v{i}" for i in range(1, length)] + ["t"]
    edges = tuple(Edge(f"e{i + 1}", nodes[i], nodes[i + 1]) for i in range(length))
    return Network(nodes=tuple(nodes), edges=edges, source="s", sinks=("t",), name="line")


def diamond() -> Network:
    """Two disjoint two-hop paths from s to t."""
    edges = (Edge("e1", "s", "a"), Edge("e2", "s", "b"), Edge("e3", "a", "t"), Edge("e4", "b", "t"))
    return Network(nodes=("s", "a", "b", "t"), edges=edges, source="s", sinks=("t",), name="diamond")


BUILTIN_TOPOLOGIES: Dict[str, Callable[[], Network]] = {
    "butterfly": butterfly,
    "line": line,
    "diamond": diamond,
}


def load_network(name_or_path: str) -> Network:
    """A built-in topology by name, or a network read from a JSON file."""
    if name_or_path in BUILTIN_TOPOLOGIES:
        return BUILTIN_TOPOLOGIES[name_or_path]()
    return Network.load(name_or_path)


def topological_edges(net: Network) -> Tuple[Edge, ...]:
    """Edges ordered so every edge comes after all edges entering its tail.

    Raises:
        CyclicNetworkError: If the graph has a directed cycle.
    """
    indegree = {v: 0 for v in net.nodes}
    for e in net.edges:
        indegree[e.head] += 1
    ready = deque(v for v in net.nodes if indegree[v] == 0)
    order: List[str] = []
    while ready:
        v = ready.popleft()
        order.append(v)
        for e in net.out_edges(v):
            indegree[e.head] -= 1
            if indegree[e.head] == 0:
                ready.append(e.head)
    if len(order) != len(net.nodes):
        raise CyclicNetworkError(f"network '{net.name}' has a directed cycle")
    rank = {v: i for i, v in enumerate(order)}
    return tuple(sorted(net.edges, key=lambda e: rank[e.tail]))


def _max_flow(net: Network, sink: str) -> int:
    """Edmonds-Karp on unit-capacity multi-edges."""
    residual: Dict[str, Dict[str, int]] = defaultdict(lambda: defaultdict(int))
    for e in net.edges:
        residual[e.tail][e.head] += 1
        residual[e.head][e.tail] += 0
    flow = 0
    while True:
        parent: Dict[str, Optional[str]] = {net.source: None}
        queue = deque([net.source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v, capacity in residual[u].items():
                if capacity > 0 and v not in parent:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            return flow
        # unit capacities: every augmenting path carries one unit
        v = sink
        while parent[v] is not None:
            u = parent[v]
            assert u is not None
            residual[u][v] -= 1
            residual[v][u] += 1
            v = u
        flow += 1


def mincut(net: Network) -> int:
    """Smallest source-to-sink max-flow over all sinks."""
    return min(_max_flow(net, sink) for sink in net.sinks)


@dataclass(frozen=True)
class WiretapSet:
    """Edges observed by the wiretapper, in network edge order."""

    edge_ids: Tuple[str, ...]

    @classmethod
    def of(cls, net: Network, edge_ids: Iterable[str]) -> WiretapSet:
        wanted = set(edge_ids)
        unknown = wanted - set(net.edge_ids)
        if unknown:
            raise KeyError(f"unknown edges: {sorted(unknown)}")
        return cls(tuple(e for e in net.edge_ids if e in wanted))

    @property
    def mu(self) -> int:
        return len(self.edge_ids)


@dataclass(frozen=True)
class LinearNetworkCode:
    """Local and global coding vectors for every edge.

    Local coefficients of an edge leaving the source multiply the n source packets; those of any
    other edge multiply the packets on the in-edges of its tail, in edge order.
    """

    network: Network
    n: int
    local: Dict[str, GlobalVector] = field(hash=False)
    global_vectors: Dict[str, GlobalVector] = field(hash=False)

    def global_vector(self, edge_id: str) -> GlobalVector:
        return self.global_vectors[edge_id]

    def transfer_matrix(self, sink: str) -> BaseMatrix:
        return transfer_matrix(self, sink)


def assign_code(net: Network, n: int, local: Mapping[str, Sequence[int]]) -> LinearNetworkCode:
    """Build a network code from per-edge local coefficients and derive the global vectors.

    Raises:
        CyclicNetworkError: If the graph has a directed cycle.
        DimensionMismatchError: If an edge has the wrong number of local coefficients.
    """
    globals_: Dict[str, GlobalVector] = {}
    locals_: Dict[str, GlobalVector] = {}
    for e in topological_edges(net):
        coefficients = tuple(int(c) & 1 for c in local[e.id])
        if e.tail == net.source:
            expected = n
            vector = coefficients
        else:
            inputs = net.in_edges(e.tail)
            expected = len(inputs)
            vector = (0,) * n
            for c, incoming in zip(coefficients, inputs):
                if c:
                    vector = tuple(a ^ b for a, b in zip(vector, globals_[incoming.id]))
        if len(coefficients) != expected:
            raise DimensionMismatchError(f"edge '{e.id}' needs {expected} local coefficients, got {len(coefficients)}")
        locals_[e.id] = coefficients
        globals_[e.id] = vector
    logger.debug(f"Assigned a {n}-packet code to the {net.edge_count} edges of network '{net.name}'")
    return LinearNetworkCode(net, n, locals_, globals_)


def assign_random_code(net: Network, n: int, seed: int) -> LinearNetworkCode:
    """Draw every local coefficient uniformly from GF(2) under `seed`.

    Raises:
        CyclicNetworkError: If the graph has a directed cycle.
    """
    rng = np.random.default_rng(seed)
    local: Dict[str, Tuple[int, ...]] = {}
    for e in topological_edges(net):
        width = n if e.tail == net.source else len(net.in_edges(e.tail))
        local[e.id] = tuple(int(c) for c in rng.integers(0, 2, size=width))
    return assign_code(net, n, local)


def butterfly_xor_code() -> LinearNetworkCode:
    """The textbook butterfly code: the relay forwards x1 + x2 to both sinks."""
    local = {"e1": (1, 0), "e2": (0, 1), "e3": (1, 0), "e4": (1,), "e5": (1,), "e6": (1, 1), "e7": (1, 1)}
    return assign_code(butterfly(), 2, local)


def transfer_matrix(code: LinearNetworkCode, sink: str) -> BaseMatrix:
    """Rows are the global vectors of the sink's in-edges."""
    rows = [code.global_vectors[e.id] for e in code.network.in_edges(sink)]
    return BaseMatrix([list(r) for r in rows], cols=code.n)


def _sink_feasible(code: LinearNetworkCode, sink: str) -> bool:
    return rank_base_matrix(transfer_matrix(code, sink)) == code.n


def is_feasible(code: LinearNetworkCode) -> bool:
    """Whether every sink's transfer matrix has rank n over GF(2)."""
    return all(_sink_feasible(code, sink) for sink in code.network.sinks)


def feasible_fraction(net: Network, n: int, seeds: Iterable[int]) -> Fraction:
    """Share of random codes (one per seed) that are feasible."""
    outcomes = [is_feasible(assign_random_code(net, n, seed)) for seed in seeds]
    if not outcomes:
        raise ValueError("no seeds given")
    return Fraction(sum(outcomes), len(outcomes))


def edge_payloads(code: LinearNetworkCode, x: ExtVector) -> Dict[str, FieldElement]:
    """Simulate one transmission edge by edge; each edge XORs the inputs its local vector selects."""
    if len(x) != code.n:
        raise DimensionMismatchError(f"expected {code.n} source packets, got {len(x)}")
    net = code.network
    sent: Dict[str, int] = {}
    for e in topological_edges(net):
        inputs = x.to_list() if e.tail == net.source else [sent[i.id] for i in net.in_edges(e.tail)]
        payload = 0
        for c, value in zip(code.local[e.id], inputs):
            if c:
                payload ^= value
        sent[e.id] = payload
    return {edge_id: FieldElement(x.field, value) for edge_id, value in sent.items()}


def transmit(code: LinearNetworkCode, x: ExtVector) -> Dict[str, ExtVector]:
    """Packets received by each sink, one per in-edge in edge order."""
    payloads = edge_payloads(code, x)
    return {
        sink: ExtVector(x.field, [payloads[e.id].coeffs for e in code.network.in_edges(sink)])
        for sink in code.network.sinks
    }


def sink_decode(code: LinearNetworkCode, sink: str, y: ExtVector) -> ExtVector:
    """Recover the source packets at `sink` by solving A·X = Y over GF(2^m).

    Raises:
        InfeasibleSinkError: If the sink's transfer matrix has rank below n.
    """
    a = transfer_matrix(code, sink)
    if rank_base_matrix(a) != code.n:
        raise InfeasibleSinkError(f"sink '{sink}' has a rank-deficient transfer matrix")
    return solve(a, y)


def wiretap_matrix(code: LinearNetworkCode, wiretap: Union[WiretapSet, Iterable[str]]) -> BaseMatrix:
    """B: the global vectors of the tapped edges, in edge order; may be rank-deficient."""
    if not isinstance(wiretap, WiretapSet):
        wiretap = WiretapSet.of(code.network, wiretap)
    rows = [list(code.global_vectors[e]) for e in wiretap.edge_ids]
    return BaseMatrix(rows, cols=code.n)


@dataclass(frozen=True)
class Packet:
    """A packet of n + m bits: the global coding vector followed by the payload coordinates."""

    header: GlobalVector
    payload: FieldElement

    @property
    def bits(self) -> Tuple[int, ...]:
        coordinates = expand(ExtVector(self.payload.field, [self.payload.coeffs])).bits[0]
        return self.header + tuple(int(b) for b in coordinates)

    @classmethod
    def from_bits(cls, bits: Sequence[int], n: int, field: FieldSpec) -> Packet:
        if len(bits) != n + field.m:
            raise DimensionMismatchError(f"expected {n + field.m} bits, got {len(bits)}")
        payload = flatten(BaseMatrix([list(bits[n:])]), field)[0]
        return cls(tuple(int(b) for b in bits[:n]), payload)

    def __xor__(self, other: Packet) -> Packet:
        return Packet(tuple(a ^ b for a, b in zip(self.header, other.header)), self.payload + other.payload)


def attach_headers(code: LinearNetworkCode, x: ExtVector) -> Dict[str, Packet]:
    """Send headered packets: the source prefixes packet i with e_i and nodes combine whole packets.

    Headers are never looked up from the code; they accumulate in transit, so a sink can decode
    without knowing the network code.
    """
    if len(x) != code.n:
        raise DimensionMismatchError(f"expected {code.n} source packets, got {len(x)}")
    net = code.network
    zero = Packet((0,) * code.n, x.field.zero)
    originals = [Packet(tuple(int(i == j) for j in range(code.n)), x[i]) for i in range(code.n)]
    sent: Dict[str, Packet] = {}
    for e in topological_edges(net):
        inputs = originals if e.tail == net.source else [sent[i.id] for i in net.in_edges(e.tail)]
        packet = zero
        for c, incoming in zip(code.local[e.id], inputs):
            if c:
                packet = packet ^ incoming
        sent[e.id] = packet
    return sent


def decode_from_headers(packets: Sequence[Packet], n: int, field: FieldSpec) -> ExtVector:
    """Rebuild the transfer matrix from headers and solve for the source packets.

    Raises:
        InfeasibleSinkError: If the headers have rank below n.
    """
    a = BaseMatrix([list(p.header) for p in packets], cols=n)
    if rank_base_matrix(a) != n:
        raise InfeasibleSinkError("received headers do not span all source packets")
    return solve(a, ExtVector(field, [p.payload.coeffs for p in packets]))


def sink_packets(code: LinearNetworkCode, sink: str, packets: Mapping[str, Packet]) -> List[Packet]:
    """The headered packets arriving at `sink`, in edge order."""
    return [packets[e.id] for e in code.network.in_edges(sink)]
