"""Scenario builders, parameter reductions and the experiment runner.

The circle network routes ``2l`` vertex-disjoint paths between two nodes of
a ring where every node links to the ``l`` nodes after it.  QKD links are
modelled as one-time-padded edges with ideal keys, so each edge behaves as a
noiseless ``F_q`` channel.
"""

from __future__ import annotations

import configparser
import itertools
import math
import re
import time
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import binomtest

from .attack import RandomStrategy, ReplaceStrategy, ScriptedStrategy, passive, simulate
from .field import FieldSpec, make_extension_field, make_prime_field, parse_field
from .linalg import FqMatrix, rank
from .network import (
    AdversaryPlacement,
    ChannelParams,
    Edge,
    LinearNetwork,
    NetworkFile,
    channel_params,
    derive_transfer,
    node_to_edge,
    parse_network,
)
from .privacy import (
    HashSpec,
    RobustInnerCode,
    SecureCode,
    SystematicCode,
    ToeplitzSeed,
    leakage_bound,
    leakage_bound_whp,
    rates,
)
from .robust import DecodeFailure, RobustCodeParams, decode, encode, failure_bound, keygen, lift_block
from .secrecy import linear_leakage_rank, secure_code_maps

__all__ = [
    "circle_paths",
    "circle_network",
    "otp_edge",
    "otp_decrypt",
    "Table2Row",
    "Table2Report",
    "parse_expect",
    "format_expect",
    "table2_validate",
    "shipped_table2",
    "MulticastParams",
    "multicast_reduce",
    "RankTable",
    "rank_table_from_blocks",
    "multiple_multicast_params",
    "multiple_multicast_min_m0",
    "multiple_multicast_report",
    "ScenarioConfig",
    "ConfigResult",
    "TrialReport",
    "run_experiment",
    "seed_search",
    "load_audit",
]


# ---------------------------------------------------------------------------
# circle networks


def node_name(i: int) -> str:
    return f"v({i})"


def circle_paths(k: int, l: int, alice: int, bob: int) -> list[list[int]]:
    """The ``2l`` routes from ``alice`` to ``bob``, as 1-based node lists.

    Route ``r`` in each direction visits offsets ``r, r + l, r + 2l, ...``
    strictly between the endpoints, so routes occupy distinct residue
    classes and never share an intermediate node.
    """
    if not k > l > 0:
        raise ValueError("need k > l > 0")
    if not (1 <= alice <= k and 1 <= bob <= k):
        raise ValueError("endpoints must lie in 1..k")
    D = (bob - alice) % k
    if min(D, k - D) < l:
        raise ValueError(f"alice and bob must be at least {l} apart around the ring")
    paths = []
    for sign, dist in ((-1, k - D), (1, D)):
        for r in range(1, l + 1):
            offs = list(range(r, dist, l))
            paths.append([alice] + [(alice - 1 + sign * o) % k + 1 for o in offs] + [bob])
    return paths


def circle_network(k: int, l: int, alice: int, bob: int, field: "FieldSpec | None" = None) -> LinearNetwork:
    """Forwarding network over the routes of :func:`circle_paths`.

    Path ``p`` carries input ``x_p``; edges are ordered hop by hop across
    all paths and Bob reads the last edge of each path.  Ring links that no
    route uses are omitted since they carry nothing.
    """
    F = field or make_prime_field(2)
    paths = circle_paths(k, l, alice, bob)
    hops = max(len(p) for p in paths) - 1
    edges, coding, last = [], {}, {}
    for h in range(hops):
        for pi, p in enumerate(paths):
            if h + 1 >= len(p):
                continue
            idx = len(edges) + 1
            edges.append(Edge(idx, node_name(p[h]), node_name(p[h + 1])))
            coding[idx] = {("x", pi + 1): 1} if h == 0 else {("e", last[pi]): 1}
            last[pi] = idx
    nodes = [node_name(i) for i in range(1, k + 1)]
    reads = [last[pi] for pi in range(len(paths))]
    return LinearNetwork(F, nodes, node_name(alice), node_name(bob), edges, coding, reads, len(paths))


def otp_edge(x: int, key: int, field: FieldSpec) -> int:
    """Symbol sent on a key-protected edge."""
    return field.add(field.coerce(x), field.coerce(key))


def otp_decrypt(y: int, key: int, field: FieldSpec) -> int:
    return field.sub(field.coerce(y), field.coerce(key))


# ---------------------------------------------------------------------------
# reference rank-table validation


@dataclass(frozen=True)
class Table2Row:
    nodes: tuple
    rank_KE: int
    rank_HB: int

    def label(self) -> str:
        return " & ".join(self.nodes)


_EXPECT = re.compile(r"^(?P<nodes>[^:]+):\s*(?P<ke>\d+)\s*,\s*(?P<hb>\d+)\s*$")


def parse_expect(text: str) -> list[Table2Row]:
    """Lines like ``v(6) & v(8): 4, 2``; ``#`` starts a comment."""
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _EXPECT.match(line)
        if not m:
            raise ValueError(f"bad expectation line {raw!r}")
        nodes = tuple(v.strip() for v in m["nodes"].split("&"))
        rows.append(Table2Row(nodes, int(m["ke"]), int(m["hb"])))
    return rows


def format_expect(rows: Iterable[Table2Row]) -> str:
    return "".join(f"{r.label()}: {r.rank_KE}, {r.rank_HB}\n" for r in rows)


@dataclass
class Table2Report:
    m0: int
    rows: list  # (Table2Row, got_KE, got_HB, ok)

    @property
    def ok(self) -> bool:
        return all(r[3] for r in self.rows)

    def lines(self) -> list[str]:
        out = [f"m0={self.m0}"]
        for row, ke, hb, ok in self.rows:
            out.append(
                f"row={row.label()} expect_KE={row.rank_KE} expect_HB={row.rank_HB} "
                f"got_KE={ke} got_HB={hb} verdict={'pass' if ok else 'fail'}"
            )
        out.append(f"result={'pass' if self.ok else 'fail'}")
        return out


def table2_validate(netfile: "NetworkFile | str", expected: Sequence[Table2Row]) -> Table2Report:
    if isinstance(netfile, str):
        netfile = parse_network(netfile)
    net = netfile.network
    base = derive_transfer(net, AdversaryPlacement((), ()))
    out = []
    for row in expected:
        p = channel_params(derive_transfer(net, node_to_edge(net, row.nodes)))
        out.append((row, p.m2, p.m1, (p.m2, p.m1) == (row.rank_KE, row.rank_HB)))
    return Table2Report(rank(base.K_B), out)


def shipped_table2() -> tuple[str, str]:
    """The bundled non-normative network file and the reference rank table."""
    pkg = resources.files("securenc") / "data"
    return (pkg / "table2_network.txt").read_text(), (pkg / "table2_expected.txt").read_text()


# ---------------------------------------------------------------------------
# multicast


@dataclass(frozen=True)
class MulticastParams:
    m0: int
    m1: int
    m4: int
    m2: int
    m3: int

    @property
    def rate(self) -> int:
        return rates(self.m0, self.m1, self.m2).robust_secure


def multicast_reduce(receivers: Sequence[tuple], m2: int, m3: int) -> MulticastParams:
    """Worst case over receivers: min ``m0``, max ``m1``, max ``m4``."""
    if not receivers:
        raise ValueError("need at least one receiver")
    m0 = min(r[0] for r in receivers)
    m1 = max(r[1] for r in receivers)
    m4 = max(r[2] for r in receivers)
    return MulticastParams(m0, m1, m4, m2, m3)


@dataclass
class RankTable:
    """Ranks indexed by sender ``i`` and receiver ``(i, j)``.

    ``own[(i, j)]``: rank of ``K_{i,j;i}``.
    ``cross[(i, j)]``: rank of the crossing from all other senders.
    ``leak[(i, i2, j2)]``: rank leaked from sender ``i`` to receiver ``(i2, j2)``.
    """

    own: dict
    cross: dict
    leak: dict


def rank_table_from_blocks(K: dict) -> RankTable:
    """Ranks from blocks ``K[(i, j, i')]`` mapping sender ``i'`` to receiver ``(i, j)``."""
    receivers = sorted({(i, j) for i, j, _ in K})
    senders = sorted({s for _, _, s in K} | {i for i, _ in receivers})
    own, cross, leak = {}, {}, {}
    for i, j in receivers:
        own[(i, j)] = rank(K[(i, j, i)]) if (i, j, i) in K else 0
        others = [K[(i, j, s)] for s in senders if s != i and (i, j, s) in K]
        cross[(i, j)] = rank(FqMatrix.hstack(*others)) if others else 0
    for s in senders:
        for i2, j2 in receivers:
            if i2 != s and (i2, j2, s) in K:
                leak[(s, i2, j2)] = rank(K[(i2, j2, s)])
    return RankTable(own, cross, leak)


def multiple_multicast_params(table: RankTable) -> dict:
    """Per-sender ``(m0, m1, m2)``, each the max over the relevant receivers.

    ``m0`` uses max as written, unlike the min used for a single multicast;
    :func:`multiple_multicast_min_m0` gives the min-based value for comparison.
    """
    senders = sorted({i for i, _ in table.own} | {s for s, _, _ in table.leak})
    out = {}
    for i in senders:
        m0 = max((r for (a, _), r in table.own.items() if a == i), default=0)
        m1 = max((r for (a, _), r in table.cross.items() if a == i), default=0)
        m2 = max((r for (s, _, _), r in table.leak.items() if s == i), default=0)
        out[i] = (m0, m1, m2)
    return out


def multiple_multicast_min_m0(table: RankTable) -> dict:
    senders = sorted({i for i, _ in table.own})
    return {i: min(r for (a, _), r in table.own.items() if a == i) for i in senders}


def multiple_multicast_report(table: RankTable) -> list[str]:
    """One line per sender; flags senders whose max-based and min-based ``m0`` differ."""
    params = multiple_multicast_params(table)
    low = multiple_multicast_min_m0(table)
    out = []
    for i, (m0, m1, m2) in params.items():
        lo = low.get(i, m0)
        out.append(
            f"sender={i} m0={m0} m0_min={lo} m1={m1} m2={m2} "
            f"rate={rates(m0, m1, m2).robust_secure} m0_rule_mismatch={'yes' if lo != m0 else 'no'}"
        )
    return out


# ---------------------------------------------------------------------------
# experiments


@dataclass
class ScenarioConfig:
    """Experiment description, read from an INI file.

    Sections: ``[network]`` (``builder`` = circle | identity | file),
    ``[adversary]`` (``nodes``, ``wiretap``/``inject``, or ``subsets``),
    ``[code]`` (``mode`` = robust | secrecy, ``n``, ``t``, ``l``) and
    ``[run]`` (``trials``, ``seed``, ``strategy``, ``report``).
    """

    network: dict
    adversary: dict
    code: dict
    run: dict
    base_dir: Path = dc_field(default_factory=Path.cwd)

    @classmethod
    def from_text(cls, text: str, base_dir: "Path | None" = None) -> "ScenarioConfig":
        cp = configparser.ConfigParser()
        cp.read_string(text)
        sec = {s: dict(cp[s]) for s in cp.sections()}
        cfg = cls(sec.get("network", {}), sec.get("adversary", {}), sec.get("code", {}), sec.get("run", {}), base_dir or Path.cwd())
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        path = Path(path)
        return cls.from_text(path.read_text(), path.parent)

    def validate(self):
        b = self.network.get("builder")
        if b not in ("circle", "identity", "file"):
            raise ValueError("network.builder must be circle, identity or file")
        if b == "file" and "path" not in self.network:
            raise ValueError("network.path is required for builder=file")
        if int(self.run.get("trials", 1)) < 1:
            raise ValueError("run.trials must be >= 1")
        if self.code.get("mode", "robust") not in ("robust", "secrecy"):
            raise ValueError("code.mode must be robust or secrecy")

    # -------------------------------------------------------------- pieces
    def build_network(self) -> NetworkFile:
        nw = self.network
        F = parse_field(nw.get("field", "GF(2)"))
        b = nw["builder"]
        if b == "circle":
            net = circle_network(int(nw["k"]), int(nw["l"]), int(nw["alice"]), int(nw["bob"]), F)
            return NetworkFile(net)
        if b == "identity":
            m = int(nw.get("m", 1))
            edges = [Edge(i, "alice", "bob") for i in range(1, m + 1)]
            net = LinearNetwork(F, ("alice", "bob"), "alice", "bob", edges, {i: {("x", i): 1} for i in range(1, m + 1)}, range(1, m + 1), m)
            return NetworkFile(net)
        return parse_network((self.base_dir / nw["path"]).read_text())

    def placements(self, nf: NetworkFile) -> list[tuple[str, AdversaryPlacement]]:
        adv = self.adversary
        net = nf.network
        if "subsets" in adv:
            c = int(adv["subsets"])
            out = []
            inter = net.intermediate_nodes
            for size in range(1, c + 1):
                for nodes in itertools.combinations(inter, size):
                    out.append((" & ".join(nodes), node_to_edge(net, nodes)))
            return out
        if "nodes" in adv:
            nodes = adv["nodes"].split()
            return [(" & ".join(nodes), node_to_edge(net, nodes))]
        if "wiretap" in adv or "inject" in adv:
            wt = tuple(int(v) for v in adv.get("wiretap", "").split())
            inj = tuple(int(v) for v in adv.get("inject", "").split())
            return [(f"edges wiretap={list(wt)} inject={list(inj)}", AdversaryPlacement(wt, inj))]
        return [("file", nf.placement())]


@dataclass
class ConfigResult:
    label: str
    params: ChannelParams
    robust_rate: int
    secrecy_rate: int
    mode: str
    feasible: bool
    trials: int = 0
    successes: int = 0
    conditions_held: int = 0
    ci: tuple = (0.0, 0.0)
    failure_bound: "float | None" = None
    leakage_units: "int | None" = None
    leakage_bits: "float | None" = None
    leakage_bound: "float | None" = None
    leakage_bound_whp: "float | None" = None
    block: dict = dc_field(default_factory=dict)
    seconds: "float | None" = None
    note: str = ""
    key_symbols_per_use: int = 0

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    @property
    def passed(self) -> bool:
        """Infeasible rates are reported, not failed."""
        if not self.feasible:
            return True
        if self.leakage_units not in (None, 0):
            return False
        if self.mode == "secrecy":
            return self.leakage_units == 0 and self.successes == self.trials
        if self.trials and self.failure_bound is not None:
            b = min(1.0, self.failure_bound)
            return 1 - self.success_rate <= b + 3 * math.sqrt(b * (1 - b) / self.trials)
        return True

    def lines(self) -> list[str]:
        p = self.params
        out = [f"adversary={self.label}"]
        out += [f"{k}={v}" for k, v in p.as_dict().items()]
        out += [f"rate_robust={self.robust_rate}", f"rate_secrecy={self.secrecy_rate}", f"mode={self.mode}"]
        out.append(f"feasible={'yes' if self.feasible else 'no'}")
        out.append(f"qkd_key_symbols_per_use={self.key_symbols_per_use}")
        if self.note:
            out.append(f"note={self.note}")
        for k, v in self.block.items():
            out.append(f"{k}={v}")
        if self.trials:
            out += [
                f"trials={self.trials}",
                f"successes={self.successes}",
                f"success_rate={self.success_rate:.6f}",
                f"ci95_low={self.ci[0]:.6f}",
                f"ci95_high={self.ci[1]:.6f}",
            ]
            if self.mode == "robust":
                out.append(f"conditions_held={self.conditions_held}")
        if self.failure_bound is not None:
            out.append(f"failure_bound={self.failure_bound:.6g}")
        if self.leakage_units is not None:
            out += [f"leakage_logq={self.leakage_units}", f"leakage_bits={self.leakage_bits:.6f}"]
        if self.leakage_bound is not None:
            out.append(f"leakage_bound_nats={self.leakage_bound:.6g}")
        if self.leakage_bound_whp is not None:
            out.append(f"leakage_bound_whp={self.leakage_bound_whp:.6g}")
        if self.seconds is not None:
            out.append(f"wall_clock_s={self.seconds:.3f}")
        out.append(f"verdict={'pass' if self.passed else 'fail'}")
        return out


@dataclass
class TrialReport:
    results: list

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def format(self) -> str:
        chunks = []
        for n, r in enumerate(self.results, start=1):
            chunks.append(f"[config {n}]\n" + "\n".join(r.lines()) + "\n")
        return "\n".join(chunks)


def seed_search(code_factory, spec: HashSpec, field: FieldSpec, K_E: FqMatrix, rng, attempts: int = 256):
    """Draw seeds until the composed code leaks nothing; ``(seed, tries)`` or ``(None, attempts)``."""
    for tries in range(1, attempts + 1):
        seed = ToeplitzSeed.random(field, spec, rng)
        A, B = secure_code_maps(code_factory(seed), K_E)
        if linear_leakage_rank(A, B) == 0:
            return seed, tries
    return None, attempts


def _strategy(kind: str, adv, n, F, seed, base_dir):
    if kind == "passive":
        return passive()
    if kind == "random":
        return RandomStrategy(seed, F)
    if kind == "replace":
        return ReplaceStrategy(adv, n, F, seed)
    if kind.startswith("script:"):
        return ScriptedStrategy.loads((base_dir / kind[7:]).read_text(), default=0)
    raise ValueError(f"unknown strategy {kind!r}")


def _ceil_sqrt(l: int) -> int:
    return math.isqrt(l - 1) + 1 if l > 0 else 0


def _run_robust(cfg: ScenarioConfig, tm, adv, p: ChannelParams, res: ConfigResult, ss: np.random.SeedSequence):
    F = tm.field
    n = int(cfg.code.get("n", 4))
    if "t" in cfg.code:
        t = int(cfg.code["t"])
        E = make_extension_field(F, t) if t > 1 else F
    else:
        t, _, E = lift_block(F, n, p.m0)
    params = RobustCodeParams(E, n, p.m0, p.m1, p.m3, p.m4)
    tmE = tm.lift(E) if E != F else tm
    trials = int(cfg.run.get("trials", 100))
    kind = cfg.run.get("strategy", "replace")
    res.block = {"n": n, "t": t, "q_ext": E.order, "l": t * n, "side_info_symbols": params.side_info_size}
    res.failure_bound = failure_bound(n, p.m0, p.m1, E.order)
    ok = held = 0
    from .robust import check_conditions, reduce_HZ

    for child in ss.spawn(trials):
        rng = np.random.default_rng(child)
        inst = keygen(params, rng)
        M = FqMatrix.random(E, params.message_rows, n, rng)
        X, side = encode(M, inst, params)
        strat = _strategy(kind, adv, n, E, int(rng.integers(2**63)), cfg.base_dir)
        out = simulate(tmE, adv, X, strat)
        H_hat, Z_hat = reduce_HZ(tmE.H_B, out.Z)
        held += check_conditions(inst, params, tmE.K_B, H_hat, M, Z_hat).all
        try:
            ok += decode(out.Y_B, side, params) == M
        except DecodeFailure:
            pass
    res.trials, res.successes, res.conditions_held = trials, ok, held
    res.ci = tuple(binomtest(ok, trials).proportion_ci(0.95))
    # leakage of the hashed code for one key, zero-leakage seed by search
    if cfg.code.get("leakage", "yes") == "yes":
        l = t * n
        k = params.message_rows * n * t
        kbar = k - p.m2 * l - _ceil_sqrt(l)
        if kbar <= 0:
            res.note = "block too short for hashing at this n"
            return
        spec = HashSpec(k, kbar)
        inst = keygen(params, np.random.default_rng(ss.spawn(1)[0]))
        inner = RobustInnerCode(params, F, inst)
        seed, tries = seed_search(lambda s: SecureCode(inner, spec, s), spec, F, tm.K_E, np.random.default_rng(ss.spawn(1)[0]))
        res.block.update(k=k, kbar=kbar, seed_tries=tries)
        if seed is not None:
            A, B = secure_code_maps(SecureCode(inner, spec, seed), tm.K_E)
            u = linear_leakage_rank(A, B)
            res.leakage_units, res.leakage_bits = u, u * math.log2(F.order)
        res.leakage_bound = leakage_bound(1.0, kbar, k, l, p.m2, F.order)
        res.leakage_bound_whp = leakage_bound_whp(l, p.m6, p.m3, F.order)


def _run_secrecy(cfg: ScenarioConfig, tm, adv, p: ChannelParams, res: ConfigResult, ss: np.random.SeedSequence):
    F = tm.field
    l = int(cfg.code.get("l", 4))
    if rank(tm.K_B) != p.m3:
        res.note = "systematic inner code needs K_B of full column rank"
        res.feasible = False
        return
    inner = SystematicCode(F, p.m3, l, tm.K_B)
    k = inner.k
    kbar = k - p.m2 * l - _ceil_sqrt(l)
    if kbar <= 0:
        res.note = "block too short for hashing at this l"
        res.feasible = False
        return
    spec = HashSpec(k, kbar)
    attempts = int(cfg.code.get("seed_attempts", 256))
    seed, tries = seed_search(lambda s: SecureCode(inner, spec, s), spec, F, tm.K_E, np.random.default_rng(ss.spawn(1)[0]), attempts)
    res.block = {"l": l, "k": k, "kbar": kbar, "seed_tries": tries}
    res.leakage_bound = leakage_bound(1.0, kbar, k, l, p.m2, F.order)
    res.leakage_bound_whp = leakage_bound_whp(l, p.m6, p.m3, F.order)
    if seed is None:
        res.note = "no zero-leakage seed found"
        return
    code = SecureCode(inner, spec, seed)
    A, B = secure_code_maps(code, tm.K_E)
    u = linear_leakage_rank(A, B)
    res.leakage_units, res.leakage_bits = u, u * math.log2(F.order)
    from .privacy import secure_decode, secure_encode

    trials = int(cfg.run.get("trials", 100))
    ok = 0
    for child in ss.spawn(trials):
        rng = np.random.default_rng(child)
        Mbar = [F.random(rng) for _ in range(kbar)]
        L = [F.random(rng) for _ in range(spec.d)]
        X, aux = secure_encode(Mbar, L, code)
        out = simulate(tm, adv, X, passive())
        ok += secure_decode(out.Y_B, code, aux) == Mbar
    res.trials, res.successes = trials, ok
    res.ci = tuple(binomtest(ok, trials).proportion_ci(0.95))


def run_experiment(cfg: ScenarioConfig, timing: bool = False) -> TrialReport:
    """Run every adversary configuration; deterministic for a fixed ``run.seed``."""
    nf = cfg.build_network()
    root = np.random.SeedSequence(int(cfg.run.get("seed", 0)))
    mode = cfg.code.get("mode", "robust")
    results = []
    placements = cfg.placements(nf)
    for (label, adv), ss in zip(placements, root.spawn(len(placements))):
        t0 = time.perf_counter()
        tm = derive_transfer(nf.network, adv)
        p = channel_params(tm)
        r = rates(p.m0, p.m1, p.m2)
        feasible = r.robust_feasible if mode == "robust" else r.secrecy_feasible
        res = ConfigResult(label, p, r.robust_secure, r.secrecy_only, mode, feasible)
        res.key_symbols_per_use = nf.network.k  # one pad symbol per edge
        if not feasible:
            res.note = "m1 + m2 < m0 fails" if mode == "robust" else "m2 < m0 fails"
        elif mode == "robust":
            _run_robust(cfg, tm, adv, p, res, ss)
        else:
            _run_secrecy(cfg, tm, adv, p, res, ss)
        if timing:
            res.seconds = time.perf_counter() - t0
        results.append(res)
    return TrialReport(results)


def load_audit(path) -> list:
    """Run every ``[instance NAME]`` section of an audit config.

    Keys: ``network`` (file path, with ``wiretap``/``inject`` or
    ``attack-nodes`` directives), ``gm`` and ``gl`` (matrix literals mapping
    message and scramble into Alice's input), optional ``n`` and ``order``.
    """
    from .linalg import parse_matrix
    from .secrecy import AuditCode, theorem1_audit

    path = Path(path)
    cp = configparser.ConfigParser()
    cp.read_string(path.read_text())
    jobs = []
    for sec in cp.sections():
        if not sec.startswith("instance"):
            continue
        s = cp[sec]
        nf = parse_network((path.parent / s["network"]).read_text())
        F = nf.network.field
        adv = nf.placement()
        tm = derive_transfer(nf.network, adv)
        n = int(s.get("n", 1))
        code = AuditCode.linear(F, parse_matrix(s["gm"], F), parse_matrix(s.get("gl", ""), F) if s.get("gl") else FqMatrix.zeros(F, nf.network.m3, 0), n)
        rep = theorem1_audit(code, tm, adv, n=n, order=s.get("order", "transmission"))
        jobs.append((sec.partition(" ")[2] or sec, rep))
    return jobs
