"""Eve's causal strategies and the sequential n-transmission simulator.

A strategy is asked for one injected symbol per *slot* ``(u, i)``:
transmission ``u`` (1-based) and injection position ``i`` (1-based, the
``i``-th edge of ``E_A``).  It receives the *prefix*: the tuple of every
wiretapped symbol Eve has seen strictly before that slot, in time order.
The simulator alone decides what the prefix contains, so a strategy cannot
peek at the future.

Two time orders are supported:

``"transmission"`` (default)
    Events ordered by (transmission, edge).  Eve uses everything from
    earlier transmissions plus the edges already sent in the current one.
``"edge"``
    Events ordered by (edge, transmission): each edge carries its whole
    n-symbol block at once, and the injected block on an edge may depend on
    the full blocks of all wiretapped edges up to and including it.  The
    closed-form strategy count ``q^(n * sum_i q^(n T_i))`` is the count for
    this order.
"""

from __future__ import annotations

import hashlib
import itertools
import re
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .field import FieldSpec
from .linalg import FqMatrix
from .network import AdversaryPlacement, TransferMatrices

__all__ = [
    "Strategy",
    "PassiveStrategy",
    "ConstantStrategy",
    "FunctionStrategy",
    "TableStrategy",
    "RandomStrategy",
    "ReplaceStrategy",
    "RecordingStrategy",
    "ScriptedStrategy",
    "TransmissionOutcome",
    "EnumerationCapExceeded",
    "passive",
    "random_strategy",
    "simulate",
    "prefix_layout",
    "slot_prefix_lengths",
    "strategy_count",
    "closed_form_count",
    "enumerate_strategies",
    "prefix_hash",
    "DEFAULT_ENUMERATION_CAP",
]

ORDERS = ("transmission", "edge")
DEFAULT_ENUMERATION_CAP = 2**20


class Strategy:
    """Base class: map ``(slot, prefix)`` to an injected field element (int)."""

    def decide(self, slot: tuple[int, int], prefix: tuple[int, ...]) -> int:
        raise NotImplementedError

    def __call__(self, slot, prefix) -> int:
        return self.decide(slot, tuple(prefix))


class PassiveStrategy(Strategy):
    def decide(self, slot, prefix):
        return 0

    def __repr__(self):
        return "passive"


def passive() -> Strategy:
    """The all-zero strategy (pure eavesdropping)."""
    return PassiveStrategy()


class ConstantStrategy(Strategy):
    def __init__(self, value: int):
        self.value = int(value)

    def decide(self, slot, prefix):
        return self.value


class FunctionStrategy(Strategy):
    def __init__(self, fn: Callable[[tuple, tuple], int], name: str = "fn"):
        self.fn = fn
        self.name = name

    def decide(self, slot, prefix):
        return int(self.fn(slot, prefix))

    def __repr__(self):
        return f"FunctionStrategy({self.name})"


class TableStrategy(Strategy):
    """Explicit decision table; missing entries inject ``default``."""

    def __init__(self, table: dict, default: int = 0):
        self.table = table
        self.default = default

    def decide(self, slot, prefix):
        return self.table.get((slot, prefix), self.default)

    def key(self) -> tuple:
        return tuple(sorted(self.table.items()))


class RandomStrategy(Strategy):
    """Uniformly random decision table, materialized lazily.

    The value for a ``(slot, prefix)`` pair is derived from the seed and the
    pair itself, so it does not depend on the order of queries.
    """

    def __init__(self, seed: int, field: FieldSpec):
        self.seed = int(seed)
        self.field = field
        self._memo: dict = {}

    def decide(self, slot, prefix):
        key = (slot, prefix)
        v = self._memo.get(key)
        if v is None:
            rng = np.random.default_rng(np.random.SeedSequence([self.seed, *slot, len(prefix), *prefix]))
            v = self._memo[key] = int(rng.integers(self.field.order))
        return v


def random_strategy(seed: int, adv: AdversaryPlacement, field: FieldSpec) -> RandomStrategy:
    return RandomStrategy(seed, field)


class ReplaceStrategy(Strategy):
    """Overwrite each injectable edge with a fresh uniform symbol.

    Where the injected edge is also wiretapped Eve subtracts what she read,
    so Bob receives pure noise on that edge (a replacement attack expressed
    additively).  Otherwise she adds uniform noise.
    """

    def __init__(self, adv: AdversaryPlacement, n: int, field: FieldSpec, seed: int, order: str = "transmission"):
        self.adv = adv
        self.n = n
        self.field = field
        self.order = order
        self.rng = np.random.default_rng(seed)
        self._pos: dict = {}

    def decide(self, slot, prefix):
        u, i = slot
        F = self.field
        noise = F.random(self.rng)
        edge = self.adv.inject[i - 1]
        if edge not in self.adv.wiretap:
            return noise
        if slot not in self._pos:
            layout = prefix_layout(self.adv, self.n, slot, self.order)
            j = self.adv.wiretap.index(edge) + 1
            self._pos[slot] = layout.index((u, j))
        return F.sub(noise, prefix[self._pos[slot]])


def prefix_hash(prefix: tuple) -> str:
    return hashlib.sha256(",".join(map(str, prefix)).encode()).hexdigest()[:16]


class RecordingStrategy(Strategy):
    """Wrap a strategy and keep every decision it makes."""

    def __init__(self, inner: Strategy):
        self.inner = inner
        self.trace: list = []

    def decide(self, slot, prefix):
        v = self.inner(slot, prefix)
        self.trace.append((slot, prefix_hash(prefix), v))
        return v

    def dump(self) -> str:
        lines = ["# strategy-table v1"]
        for (u, i), h, v in self.trace:
            lines.append(f"slot ({u},{i}): {h} -> {v}")
        return "\n".join(lines) + "\n"


_SCRIPT_LINE = re.compile(r"^slot\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*:\s*([0-9a-f]+)\s*->\s*(\d+)\s*$")


class ScriptedStrategy(Strategy):
    """Replay a ``slot (u,i): prefix-hash -> value`` table.

    An unlisted ``(slot, prefix)`` raises ``KeyError`` unless ``default``
    is given.
    """

    def __init__(self, table: dict, default: "int | None" = None):
        self.table = table
        self.default = default

    @classmethod
    def loads(cls, text: str, default: "int | None" = None) -> "ScriptedStrategy":
        table = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = _SCRIPT_LINE.match(line)
            if not m:
                raise ValueError(f"bad strategy table line {raw!r}")
            u, i, h, v = m.groups()
            table[((int(u), int(i)), h)] = int(v)
        return cls(table, default)

    def decide(self, slot, prefix):
        key = (slot, prefix_hash(prefix))
        if key in self.table:
            return self.table[key]
        if self.default is None:
            raise KeyError(f"no scripted decision for slot {slot}")
        return self.default


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransmissionOutcome:
    Y_B: FqMatrix
    Y_E: FqMatrix
    Z: FqMatrix


def _events(adv: AdversaryPlacement, n: int, order: str):
    if order not in ORDERS:
        raise ValueError(f"order must be one of {ORDERS}")
    ev = []
    for u in range(1, n + 1):
        for j, e in enumerate(adv.wiretap, start=1):
            key = (u, e, 0) if order == "transmission" else (e, 0, u)
            ev.append((key, "obs", u, j))
        for i, e in enumerate(adv.inject, start=1):
            key = (u, e, 1) if order == "transmission" else (e, 1, u)
            ev.append((key, "inj", u, i))
    ev.sort()
    return ev


def prefix_layout(adv: AdversaryPlacement, n: int, slot: tuple[int, int], order: str = "transmission") -> list:
    """Labels ``(u', j)`` of the observations visible at ``slot``, in order."""
    out = []
    for _, kind, u, j in _events(adv, n, order):
        if kind == "inj" and (u, j) == tuple(slot):
            return out
        if kind == "obs":
            out.append((u, j))
    raise ValueError(f"slot {slot} not in range")


def simulate(
    tm: TransferMatrices,
    adv: AdversaryPlacement,
    X: FqMatrix,
    strategy: Strategy,
    order: str = "transmission",
) -> TransmissionOutcome:
    """Run ``n = X.ncols`` transmissions against a causal adversary."""
    F = tm.field
    if X.field != F:
        raise ValueError("input matrix over the wrong field")
    if X.nrows != tm.m3:
        raise ValueError(f"X has {X.nrows} rows, network expects {tm.m3}")
    if adv.m5 != tm.m5 or adv.m6 != tm.m6:
        raise ValueError("placement does not match transfer matrix dimensions")
    n = X.ncols
    add, mul = F.add, F.mul
    KEX = tm.K_E @ X
    Z = [[0] * n for _ in range(tm.m5)]
    YE = [[0] * n for _ in range(tm.m6)]
    HE = tm.H_E.to_ints()
    prefix: list[int] = []
    for _, kind, u, idx in _events(adv, n, order):
        c = u - 1
        if kind == "obs":
            j = idx - 1
            v = KEX.entry(j, c)
            for i, h in enumerate(HE[j]):
                if h:
                    v = add(v, mul(h, Z[i][c]))
            YE[j][c] = v
            prefix.append(v)
        else:
            Z[idx - 1][c] = F.coerce(strategy((u, idx), tuple(prefix)))
    Zm = FqMatrix(F, Z, n)
    YB = tm.K_B @ X + tm.H_B @ Zm
    return TransmissionOutcome(YB, FqMatrix(F, YE, n), Zm)


# ---------------------------------------------------------------------------
# strategy spaces


class EnumerationCapExceeded(RuntimeError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} strategies exceed the enumeration cap {cap}")


def _counted(adv: AdversaryPlacement, i: int) -> bool:
    # injections at or after the last wiretapped edge never reach Eve's view
    return bool(adv.wiretap) and adv.inject[i - 1] < adv.wiretap[-1]


def slot_prefix_lengths(
    adv: AdversaryPlacement, n: int, order: str = "transmission", include_uncounted: bool = False
) -> list[tuple[tuple[int, int], int]]:
    """Decision-table rows: ``(slot, prefix length)`` for each counted slot."""
    out = []
    for u in range(1, n + 1):
        for i in range(1, adv.m5 + 1):
            if include_uncounted or _counted(adv, i):
                out.append(((u, i), len(prefix_layout(adv, n, (u, i), order))))
    out.sort()
    return out


def strategy_count(
    adv: AdversaryPlacement, n: int, q: int, order: str = "transmission", include_uncounted: bool = False
) -> int:
    """Number of distinct deterministic decision tables."""
    entries = sum(q**length for _, length in slot_prefix_lengths(adv, n, order, include_uncounted))
    return q**entries


def closed_form_count(adv: AdversaryPlacement, n: int, q: int) -> int:
    """``q^(n * sum_{i: eta(i) < zeta(m6)} q^(n T_i))``, T_i = max{j : eta(i) >= zeta(j)}."""
    total = 0
    for i, e in enumerate(adv.inject, start=1):
        if not _counted(adv, i):
            continue
        T = max((j for j, z in enumerate(adv.wiretap, start=1) if e >= z), default=0)
        total += q ** (n * T)
    return q ** (n * total)


def enumerate_strategies(
    adv: AdversaryPlacement,
    n: int,
    field: FieldSpec,
    order: str = "transmission",
    include_uncounted: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Iterator[TableStrategy]:
    """Every causal deterministic strategy, each exactly once.

    Slots that cannot influence Eve's view (injections at or after her last
    wiretapped edge) are fixed to zero unless ``include_uncounted``.
    Raises :class:`EnumerationCapExceeded` before yielding anything if the
    space is larger than ``cap``.
    """
    q = field.order
    count = strategy_count(adv, n, q, order, include_uncounted)
    if count > cap:
        raise EnumerationCapExceeded(count, cap)
    keys = []
    for slot, length in slot_prefix_lengths(adv, n, order, include_uncounted):
        for prefix in itertools.product(range(q), repeat=length):
            keys.append((slot, prefix))
    return (TableStrategy(dict(zip(keys, values))) for values in itertools.product(range(q), repeat=len(keys)))
