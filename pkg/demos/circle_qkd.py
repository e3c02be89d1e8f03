"""Trusted-relay QKD ring: what rates survive one or two compromised relays?

Run:  python demos/circle_qkd.py
"""

import itertools

import numpy as np

from securenc.network import AdversaryPlacement, channel_params, derive_transfer, node_to_edge
from securenc.privacy import HashSpec, SecureCode, SystematicCode, rates, secure_decode, secure_encode
from securenc.attack import passive, simulate
from securenc.scenarios import circle_network, circle_paths, seed_search

K, L, ALICE, BOB = 12, 2, 1, 8

print("routing paths:")
for p in circle_paths(K, L, ALICE, BOB):
    print("  " + " -> ".join(f"v({v})" for v in p))

net = circle_network(K, L, ALICE, BOB)
print("m0 =", channel_params(derive_transfer(net, AdversaryPlacement((), ()))).m0)

for size in (1, 2):
    worst = None
    for nodes in itertools.combinations(net.intermediate_nodes, size):
        p = channel_params(derive_transfer(net, node_to_edge(net, nodes)))
        r = rates(p.m0, p.m1, p.m2)
        if worst is None or r.secrecy_only < worst[1].secrecy_only:
            worst = (nodes, r, p)
    nodes, r, p = worst
    print(f"{size} relay(s), worst case {' & '.join(nodes)}: m1={p.m1} m2={p.m2} "
          f"robust rate={r.robust_secure} secrecy rate={r.secrecy_only}")

# one concrete secret transmission with relay v(4) listening
adv = node_to_edge(net, ["v(4)"])
tm = derive_transfer(net, adv)
p = channel_params(tm)
l = 4
inner = SystematicCode(net.field, p.m3, l, tm.K_B)
spec = HashSpec(inner.k, inner.k - p.m2 * l - 2)
rng = np.random.default_rng(0)
seed, tries = seed_search(lambda s: SecureCode(inner, spec, s), spec, net.field, tm.K_E, rng)
code = SecureCode(inner, spec, seed)
msg = [int(v) for v in rng.integers(0, 2, spec.kbar)]
X, aux = secure_encode(msg, [int(v) for v in rng.integers(0, 2, spec.d)], code)
out = simulate(tm, adv, X, passive())
print(f"sent {spec.kbar} secret bits over {l} uses (seed found after {tries} tries); "
      f"decoded ok: {secure_decode(out.Y_B, code, aux) == msg}")
