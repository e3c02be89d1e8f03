"""Acyclic linear networks with a global edge order.

Edges are numbered ``1..k``; that numbering is also the time order in which
symbols are sent during one use of the network.  Each edge carries one
field symbol, computed by a fixed linear combination of the symbols on the
in-edges of its tail (and of Alice's input coordinates when the tail is the
source).  Eve may wiretap a set of edges and add errors on another set.
On an edge that is both wiretapped and injected she reads the symbol first
and then adds her error, so an injection never reaches her own reading of
the same or an earlier edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .field import FieldSpec, parse_field
from .linalg import FqMatrix, rank

__all__ = [
    "Edge",
    "LinearNetwork",
    "AdversaryPlacement",
    "TransferMatrices",
    "ChannelParams",
    "NetworkError",
    "OrderViolation",
    "NetworkFile",
    "derive_transfer",
    "evaluate",
    "node_to_edge",
    "channel_params",
    "parse_network",
    "format_network",
]


class NetworkError(ValueError):
    pass


class OrderViolation(NetworkError):
    """An edge reads (or its tail receives) an edge that comes later."""

    def __init__(self, edge: int, later: int):
        self.pair = (edge, later)
        super().__init__(f"edge {edge} depends on later edge {later}")


@dataclass(frozen=True)
class Edge:
    index: int
    tail: str
    head: str


InputRef = tuple  # ("x", i) source coordinate or ("e", j) in-edge, 1-based


@dataclass(frozen=True, eq=False)
class LinearNetwork:
    """Graph plus per-edge coding rows.

    Parameters
    ----------
    field : FieldSpec
        Symbol alphabet.
    nodes : sequence of str
        Node names; ``source`` and ``sink`` must be among them.
    edges : sequence of Edge
        Ordered so that ``edges[i].index == i + 1``.
    coding : mapping
        ``coding[e]`` maps input references to coefficients: ``("x", i)``
        for Alice's ``i``-th coordinate, ``("e", j)`` for edge ``j``.
    sink_reads : sequence of int
        Edges whose symbols Bob reads, in the order of ``Y_B``'s rows.
    m3 : int
        Dimension of Alice's input.
    """

    field: FieldSpec
    nodes: tuple
    source: str
    sink: str
    edges: tuple
    coding: Mapping
    sink_reads: tuple
    m3: int
    _in_edges: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "sink_reads", tuple(self.sink_reads))
        coding = {int(e): {tuple(k): self.field.coerce(v) for k, v in row.items()} for e, row in self.coding.items()}
        object.__setattr__(self, "coding", coding)
        names = set(self.nodes)
        if len(names) != len(self.nodes):
            raise NetworkError("duplicate node names")
        if self.source not in names or self.sink not in names:
            raise NetworkError("source and sink must be declared nodes")
        if self.source == self.sink:
            raise NetworkError("source and sink must differ")
        in_edges: dict[str, list[int]] = {v: [] for v in self.nodes}
        for pos, e in enumerate(self.edges, start=1):
            if e.index != pos:
                raise NetworkError(f"edge indices must be 1..k in order (got {e.index} at {pos})")
            if e.tail not in names or e.head not in names:
                raise NetworkError(f"edge {e.index} uses an unknown node")
            if e.tail == e.head:
                raise NetworkError(f"edge {e.index} is a self-loop")
            in_edges[e.head].append(e.index)
        object.__setattr__(self, "_in_edges", in_edges)
        for e in self.edges:
            # topological order: everything entering the tail is already sent
            for j in in_edges[e.tail]:
                if j >= e.index:
                    raise OrderViolation(e.index, j)
            for ref in coding.get(e.index, {}):
                kind, i = ref
                if kind == "x":
                    if e.tail != self.source:
                        raise NetworkError(f"edge {e.index} reads input x{i} but its tail is not the source")
                    if not 1 <= i <= self.m3:
                        raise NetworkError(f"input x{i} out of range 1..{self.m3}")
                elif kind == "e":
                    if not 1 <= i <= len(self.edges):
                        raise NetworkError(f"edge {e.index} reads unknown edge {i}")
                    if i >= e.index:
                        raise OrderViolation(e.index, i)
                    if self.edges[i - 1].head != e.tail:
                        raise NetworkError(f"edge {e.index} reads e{i}, which does not enter node {e.tail}")
                else:
                    raise NetworkError(f"bad input reference {ref!r}")
        for j in coding:
            if not 1 <= j <= len(self.edges):
                raise NetworkError(f"coding row for unknown edge {j}")
        for j in self.sink_reads:
            if not 1 <= j <= len(self.edges):
                raise NetworkError(f"sink reads unknown edge {j}")
            if self.edges[j - 1].head != self.sink:
                raise NetworkError(f"sink reads e{j}, which does not enter the sink")

    @property
    def k(self) -> int:
        return len(self.edges)

    @property
    def m4(self) -> int:
        return len(self.sink_reads)

    def in_edges(self, node: str) -> list[int]:
        return list(self._in_edges[node])

    def out_edges(self, node: str) -> list[int]:
        return [e.index for e in self.edges if e.tail == node]

    @property
    def intermediate_nodes(self) -> list[str]:
        return [v for v in self.nodes if v not in (self.source, self.sink)]


@dataclass(frozen=True)
class AdversaryPlacement:
    """Eve's wiretap set (``zeta``) and injection set (``eta``), 1-based."""

    wiretap: tuple = ()
    inject: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "wiretap", tuple(int(e) for e in self.wiretap))
        object.__setattr__(self, "inject", tuple(int(e) for e in self.inject))
        for name, seq in (("wiretap", self.wiretap), ("inject", self.inject)):
            if any(b <= a for a, b in zip(seq, seq[1:])):
                raise ValueError(f"{name} edges must be strictly increasing")
            if seq and seq[0] < 1:
                raise ValueError(f"{name} edges are 1-based")

    @property
    def m5(self) -> int:
        return len(self.inject)

    @property
    def m6(self) -> int:
        return len(self.wiretap)

    def check(self, k: int):
        for e in self.wiretap + self.inject:
            if e > k:
                raise ValueError(f"edge {e} outside 1..{k}")


@dataclass(frozen=True)
class TransferMatrices:
    """``Y_B = K_B X + H_B Z``, ``Y_E = K_E X + H_E Z``."""

    K_B: FqMatrix
    K_E: FqMatrix
    H_B: FqMatrix
    H_E: FqMatrix

    @property
    def field(self) -> FieldSpec:
        return self.K_B.field

    @property
    def m3(self) -> int:
        return self.K_B.ncols

    @property
    def m4(self) -> int:
        return self.K_B.nrows

    @property
    def m5(self) -> int:
        return self.H_B.ncols

    @property
    def m6(self) -> int:
        return self.K_E.nrows

    def causal(self, adv: AdversaryPlacement) -> bool:
        """``H_E[j][i] == 0`` whenever ``eta(i) >= zeta(j)``."""
        for j, zj in enumerate(adv.wiretap):
            for i, ei in enumerate(adv.inject):
                if ei >= zj and self.H_E.entry(j, i):
                    return False
        return True

    def lift(self, target: FieldSpec) -> "TransferMatrices":
        return TransferMatrices(*(M.lift(target) for M in (self.K_B, self.K_E, self.H_B, self.H_E)))


@dataclass(frozen=True)
class ChannelParams:
    m0: int
    m1: int
    m2: int
    m3: int
    m4: int
    m5: int
    m6: int

    def as_dict(self) -> dict:
        return {f"m{i}": getattr(self, f"m{i}") for i in range(7)}


def _propagate(net: LinearNetwork, adv: AdversaryPlacement) -> tuple[list, list]:
    """Linear forms of every edge symbol over (x_1..x_m3, z_1..z_m5).

    Returns the forms seen by Eve (before her own injection on that edge)
    and the forms after injection, indexed by edge (0-based).
    """
    F = net.field
    width = net.m3 + adv.m5
    inj_pos = {e: i for i, e in enumerate(adv.inject)}
    before, after = [], []
    for e in net.edges:
        v = [0] * width
        for (kind, i), c in net.coding.get(e.index, {}).items():
            if kind == "x":
                v[i - 1] = F.add(v[i - 1], c)
            else:
                src = after[i - 1]
                v = [F.add(a, F.mul(c, b)) if b else a for a, b in zip(v, src)]
        before.append(v)
        if e.index in inj_pos:
            v = list(v)
            pos = net.m3 + inj_pos[e.index]
            v[pos] = F.add(v[pos], 1)
        after.append(v)
    return before, after


def derive_transfer(net: LinearNetwork, adv: AdversaryPlacement) -> TransferMatrices:
    """Transfer matrices of ``net`` under placement ``adv``."""
    adv.check(net.k)
    F = net.field
    before, after = _propagate(net, adv)
    m3 = net.m3
    bob = [after[j - 1] for j in net.sink_reads]
    eve = [before[j - 1] for j in adv.wiretap]
    K_B = FqMatrix(F, [r[:m3] for r in bob], m3)
    H_B = FqMatrix(F, [r[m3:] for r in bob], adv.m5)
    K_E = FqMatrix(F, [r[:m3] for r in eve], m3)
    H_E = FqMatrix(F, [r[m3:] for r in eve], adv.m5)
    tm = TransferMatrices(K_B, K_E, H_B, H_E)
    assert tm.causal(adv)
    return tm


def evaluate(net: LinearNetwork, adv: AdversaryPlacement, x: Sequence[int], z: Sequence[int]):
    """Send one input through the network edge by edge.

    Returns ``(y_B, y_E)`` as int lists.  This is a direct symbol-level
    evaluation, independent of :func:`derive_transfer`.
    """
    F = net.field
    inj = dict(zip(adv.inject, z))
    sym: dict[int, int] = {}
    seen: dict[int, int] = {}
    for e in net.edges:
        s = 0
        for (kind, i), c in net.coding.get(e.index, {}).items():
            s = F.add(s, F.mul(c, x[i - 1] if kind == "x" else sym[i]))
        seen[e.index] = s
        sym[e.index] = F.add(s, inj.get(e.index, 0))
    return [sym[j] for j in net.sink_reads], [seen[j] for j in adv.wiretap]


def node_to_edge(net: LinearNetwork, attacked: Iterable[str]) -> AdversaryPlacement:
    """Edge placement for an adversary occupying ``attacked`` nodes.

    Every edge touching an occupied node is wiretapped; only the edges an
    occupied node sends on are injectable.
    """
    attacked = set(attacked)
    for v in attacked:
        if v not in net.nodes:
            raise NetworkError(f"unknown node {v!r}")
        if v in (net.source, net.sink):
            raise NetworkError(f"cannot attack endpoint {v!r}")
    wt = sorted({e.index for e in net.edges if e.tail in attacked or e.head in attacked})
    inj = sorted({e.index for e in net.edges if e.tail in attacked})
    return AdversaryPlacement(tuple(wt), tuple(inj))


def channel_params(tm: TransferMatrices) -> ChannelParams:
    return ChannelParams(
        m0=rank(tm.K_B),
        m1=rank(tm.H_B),
        m2=rank(tm.K_E),
        m3=tm.m3,
        m4=tm.m4,
        m5=tm.m5,
        m6=tm.m6,
    )


# ---------------------------------------------------------------------------
# network description files


@dataclass
class NetworkFile:
    """Parsed network file: the network plus any adversary directives."""

    network: LinearNetwork
    wiretap: "tuple | None" = None
    inject: "tuple | None" = None
    attack_nodes: tuple = ()

    def placement(self, attack_nodes: "Iterable[str] | None" = None) -> AdversaryPlacement:
        """Resolve Eve's edges: node conversion, then explicit overrides."""
        nodes = tuple(self.attack_nodes if attack_nodes is None else attack_nodes)
        derived = node_to_edge(self.network, nodes)
        wt = derived.wiretap if self.wiretap is None else self.wiretap
        inj = derived.inject if self.inject is None else self.inject
        return AdversaryPlacement(tuple(sorted(set(wt))), tuple(sorted(set(inj))))


def parse_network(text: str) -> NetworkFile:
    """Parse the line-oriented network format.

    ::

        field GF(2)
        node alice source
        node bob sink
        node r
        inputs 2                 # optional; default = largest x<i> used
        edge 1 alice r
        coef 1 x1=1
        edge 2 r bob
        coef 2 e1=1
        sink-read 2
        wiretap 1
        inject 2
        attack-nodes r
    """
    F = None
    nodes: list[str] = []
    source = sink = None
    edges: list[Edge] = []
    coding: dict[int, dict] = {}
    reads: list[int] = []
    wiretap = inject = None
    attack: list[str] = []
    m3 = None
    max_x = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        args = rest.split()
        try:
            if word == "field":
                F = parse_field(rest)
            elif word == "node":
                name = args[0]
                nodes.append(name)
                for role in args[1:]:
                    if role == "source":
                        source = name
                    elif role == "sink":
                        sink = name
                    else:
                        raise NetworkError(f"unknown node role {role!r}")
            elif word == "edge":
                edges.append(Edge(int(args[0]), args[1], args[2]))
            elif word == "coef":
                if F is None:
                    raise NetworkError("'field' must precede 'coef'")
                e = int(args[0])
                row = coding.setdefault(e, {})
                for tok in args[1:]:
                    ref, val = tok.split("=")
                    kind, idx = ref[0], int(ref[1:])
                    if kind not in "xe":
                        raise NetworkError(f"bad input reference {ref!r}")
                    if kind == "x":
                        max_x = max(max_x, idx)
                    row[(kind, idx)] = F.coerce(int(val))
            elif word == "inputs":
                m3 = int(args[0])
            elif word == "sink-read":
                reads.extend(int(a) for a in args)
            elif word == "wiretap":
                wiretap = tuple(sorted(set(wiretap or ()) | {int(a) for a in args}))
            elif word == "inject":
                inject = tuple(sorted(set(inject or ()) | {int(a) for a in args}))
            elif word == "attack-nodes":
                attack.extend(args)
            else:
                raise NetworkError(f"unknown directive {word!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, NetworkError):
                raise NetworkError(f"line {lineno}: {exc}") from exc
            raise NetworkError(f"line {lineno}: cannot parse {raw.strip()!r}") from exc
    if F is None:
        raise NetworkError("missing 'field' line")
    if source is None or sink is None:
        raise NetworkError("need one source and one sink node")
    edges.sort(key=lambda e: e.index)
    net = LinearNetwork(F, nodes, source, sink, edges, coding, reads, max_x if m3 is None else m3)
    return NetworkFile(net, wiretap, inject, tuple(attack))


def format_network(net: LinearNetwork, adv: "AdversaryPlacement | None" = None) -> str:
    from .field import format_field

    F = net.field
    lines = [f"field {format_field(F)}"]
    for v in net.nodes:
        role = " source" if v == net.source else " sink" if v == net.sink else ""
        lines.append(f"node {v}{role}")
    lines.append(f"inputs {net.m3}")
    for e in net.edges:
        lines.append(f"edge {e.index} {e.tail} {e.head}")
        row = net.coding.get(e.index)
        if row:
            terms = " ".join(f"{k}{i}={c}" for (k, i), c in sorted(row.items(), key=lambda kv: (kv[0][0] != "x", kv[0][1])))
            lines.append(f"coef {e.index} {terms}")
    lines.append("sink-read " + " ".join(map(str, net.sink_reads)))
    if adv is not None:
        if adv.wiretap:
            lines.append("wiretap " + " ".join(map(str, adv.wiretap)))
        if adv.inject:
            lines.append("inject " + " ".join(map(str, adv.inject)))
    return "\n".join(lines) + "\n"
