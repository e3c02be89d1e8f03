"""Small networks shared by several test modules."""

from securenc.field import make_prime_field
from securenc.network import AdversaryPlacement, Edge, LinearNetwork, parse_network

TWO_PATHS = """\
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


def two_paths(field_literal: str = "GF(2)"):
    return parse_network(TWO_PATHS.replace("GF(2)", field_literal)).network


def line(field=None, hops: int = 2, m3: int = 1):
    """alice -> r1 -> ... -> bob carrying ``x1 + ... + x_m3`` on the first edge."""
    F = field or make_prime_field(2)
    names = ["alice"] + [f"r{i}" for i in range(1, hops)] + ["bob"]
    edges = [Edge(i + 1, names[i], names[i + 1]) for i in range(hops)]
    coding = {1: {("x", j): 1 for j in range(1, m3 + 1)}}
    for i in range(2, hops + 1):
        coding[i] = {("e", i - 1): 1}
    return LinearNetwork(F, names, "alice", "bob", edges, coding, [hops], m3)


BUTTERFLY = """\
# butterfly: bob reads x1 and x1 + x2
field GF(2)
node s source
node a
node b
node c
node d
node t sink
inputs 2
edge 1 s a
coef 1 x1=1
edge 2 s b
coef 2 x2=1
edge 3 a c
coef 3 e1=1
edge 4 b c
coef 4 e2=1
edge 5 a t
coef 5 e1=1
edge 6 b d
coef 6 e2=1
edge 7 c d
coef 7 e3=1 e4=1
edge 8 d t
coef 8 e7=1
sink-read 5 8
"""
