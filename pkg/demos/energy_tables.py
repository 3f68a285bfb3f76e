"""Energy tables for small tensor products of type A2(1) B^{1,1}.

Prints D, the intrinsic energy and the backward Demazure walk length for
every vertex, then the perfectness verdicts for the level-one crystals.
"""
from krcrystals import cartan as ct
from krcrystals.crystal_core import serialize
from krcrystals.energy import backward_walk, composite, d_composite, intrinsic_energy
from krcrystals.kr_crystals import KRSpec, is_perfect, kr

A2 = ct.make_spec("A1", 2)

for copies in (2, 3):
    comp = composite([KRSpec(A2, 1, 1)] * copies)
    D = d_composite(comp)
    E = intrinsic_energy(comp, 1)
    u = comp.ground_state(1)
    print(f"{comp.name()}  u_B = {serialize(u)}  D(u_B) = {D[u]}")
    print("vertex\tD\tE\twalk")
    for b in comp.graph.vertices:
        _, steps = backward_walk(comp.graph, 1, b)
        print(f"{serialize(b)}\t{D[b]}\t{E[b]}\t{steps}")
    print()

for fam in ("A1", "B1", "C1"):
    g = kr(KRSpec(ct.make_spec(fam, 2), 1, 1))
    print(f"{g.cartan.name()} B^{{1,1}} perfect of level 1: {bool(is_perfect(g, 1))}")
