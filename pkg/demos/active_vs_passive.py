"""Every causal injection strategy leaks exactly what passive listening does.

Run:  python demos/active_vs_passive.py
"""

from securenc.field import make_prime_field
from securenc.linalg import parse_matrix
from securenc.network import AdversaryPlacement, Edge, LinearNetwork, derive_transfer
from securenc.secrecy import AuditCode, theorem1_audit

F = make_prime_field(2)
nodes = ["alice", "r1", "r2", "bob"]
edges = [Edge(1, "alice", "r1"), Edge(2, "r1", "r2"), Edge(3, "r2", "bob")]
coding = {1: {("x", 1): 1}, 2: {("e", 1): 1}, 3: {("e", 2): 1}}
net = LinearNetwork(F, nodes, "alice", "bob", edges, coding, [3], 1)

cases = {
    "read edge 1, inject on edge 2": AdversaryPlacement((1,), (2,)),
    "inject on edge 1, read edge 2": AdversaryPlacement((2,), (1,)),
    "read and inject on edge 2": AdversaryPlacement((2,), (2,)),
}
for masked in (True, False):
    code = AuditCode.linear(F, parse_matrix("1", F), parse_matrix("1" if masked else "0", F), n=2)
    print("encoder:", "x = m + l" if masked else "x = m")
    for name, adv in cases.items():
        rep = theorem1_audit(code, derive_transfer(net, adv), adv, n=2)
        print(f"  {name}: {len(rep.records)} strategies, passive leakage "
              f"{rep.passive_leakage.bits:.3f} bits, all equal: {rep.ok}")
