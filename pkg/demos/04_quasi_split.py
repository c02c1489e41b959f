"""The quasi-split exact sequence r(x) -> x -> s(H_0^V x) for cubes in M(f_U; f_V)(p)."""

from koszulkit.koszul import MMParams, quasi_split_witness, random_mm_cube
from koszulkit.suite import LABELS, SPLITS, sequence

fs = sequence(0, 3)
print("sequence:", fs)
for U in SPLITS:
    V = tuple(k for k in LABELS if k not in U)
    x = random_mm_cube(fs, U, seed=3)
    rep = quasi_split_witness(x, MMParams(frozenset(U), V, len(U)), fs)
    print(f"U={''.join(U) or '-':3} V={''.join(V) or '-':3}  exact={rep.exact}  H_0^V r(x)=0: {rep.r_trivial}  "
          f"r(x) in category: {rep.r_member}  unique α, β: {rep.alpha_beta}")
