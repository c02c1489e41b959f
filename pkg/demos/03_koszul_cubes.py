"""Koszul cubes: the typical cube, totalization, and the quotient quasi-isomorphism."""

from koszulkit.complexes import homology
from koszulkit.cubes import is_admissible, totalize, verify_totisom
from koszulkit.koszul import (
    MMParams,
    RegularSequence,
    is_in_MM,
    is_koszul_cube,
    random_koszul_cube,
    typ_cube,
    wgp_check,
)
from koszulkit.rings import parse_ring

R = parse_ring("QQ[x,y,z]")
fs = RegularSequence(R, {"a": "x^2", "b": "y", "c": "z + x"})

x = typ_cube(fs, {"a": 1, "b": 2, "c": 1})
T = totalize(x)
print("typ cube on", fs)
print("  Tot ranks:", [T.rank(n) for n in T.degrees()])
print("  Koszul cube:", is_koszul_cube(x, fs), " admissible:", is_admissible(x))
rep = verify_totisom(x)
print("  higher homology vanishes:", rep.higher_vanish, " H_0(Tot) = H_0^S:", rep.h0_iso)
print("  H_1(Tot) zero:", homology(T, 1).is_zero())

# a random twisted sum of typical cubes
y = random_koszul_cube(fs, seed=11)
print()
print("random cube: vertex ranks", {"".join(y.ordered(S)) or "-": y.rank(S) for S in y.subsets()})
print("  Koszul:", is_koszul_cube(y, fs))
print("  in M(∅; S)(0):", is_in_MM(y, MMParams(frozenset(), fs.labels, 0), fs))
w = wgp_check(y, fs)
print("  Tot y -> H_0^S(y) is a quasi-isomorphism:", w.passed)
