"""Macdonald polynomials at t = 0 as graded characters of KR tensor products."""
from krcrystals.demazure_macdonald import describe_subset, macdonald_E_t0, macdonald_P_t0

for lam in ((0, 0, 2), (0, 1, 2), (1, 1, 1)):
    print(f"P_{lam} =", macdonald_P_t0("A1", 2, lam))

E, subset = macdonald_E_t0(2, (0, 2, 0), return_subset=True)
print("E_(0,2,0) =", E)
print("Demazure subset:", " ".join(sorted(describe_subset(subset))))

print("type D4, P_(-1,-1,0,0):", macdonald_P_t0("D1", 4, (-1, -1, 0, 0)))
