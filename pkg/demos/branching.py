"""Plus-minus diagrams for the D4 -> D3 branching of B(omega_3 + omega_4)."""
from krcrystals import pm_branching as pm

for p in pm.enumerate_pm("D", 4, (3,)):
    column = pm.pm_to_highest(p)[0]
    print(f"column {column}: plus={p.plus} minus={p.minus} inner={p.inner} color={p.color}")
