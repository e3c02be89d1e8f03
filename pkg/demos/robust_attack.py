"""A relay rewrites one of two parallel paths; Bob still recovers the message.

Run:  python demos/robust_attack.py
"""

import numpy as np

from securenc.attack import ReplaceStrategy, simulate
from securenc.field import make_extension_field, make_prime_field
from securenc.linalg import FqMatrix
from securenc.network import AdversaryPlacement, channel_params, derive_transfer, parse_network
from securenc.robust import DecodeFailure, RobustCodeParams, decode, encode, failure_bound, keygen

NET = """
field GF(2)
node alice source
node r1
node r2
node bob sink
inputs 2
edge 1 alice r1
coef 1 x1=1
edge 2 alice r2
coef 2 x2=1
edge 3 r1 bob
coef 3 e1=1
edge 4 r2 bob
coef 4 e2=1
sink-read 3 4
"""

net = parse_network(NET).network
adv = AdversaryPlacement(wiretap=(3,), inject=(3,))
E = make_extension_field(make_prime_field(2), 12)
tm = derive_transfer(net, adv).lift(E)
p = channel_params(tm)
n = 4
params = RobustCodeParams(E, n, p.m0, p.m1, p.m3, p.m4)
print(f"channel: m0={p.m0} m1={p.m1}; field GF(2^12); n={n}")

rng = np.random.default_rng(1)
trials, fails = 500, 0
for _ in range(trials):
    inst = keygen(params, rng)
    M = FqMatrix.random(E, params.message_rows, n, rng)
    X, side = encode(M, inst, params)
    out = simulate(tm, adv, X, ReplaceStrategy(adv, n, E, int(rng.integers(2**32))))
    try:
        fails += decode(out.Y_B, side, params) != M
    except DecodeFailure:
        fails += 1
print(f"failures: {fails}/{trials}  (bound {failure_bound(n, p.m0, p.m1, E.order):.4f})")
print(f"side info per block: {params.side_info_size} symbols of GF(2^12)")
