"""Exact arithmetic: Groebner bases, ideal membership, regular sequences, Smith form."""

from koszulkit import matrix as mx
from koszulkit.groebner import Ideal, is_regular_sequence, radical_membership
from koszulkit.rings import ZZ, parse_ring
from koszulkit.snf import smith_normal_form

R = parse_ring("QQ[x,y,z]")
x, y, z = R.gens
I = Ideal(R, [x**2 - y, x * y - z])
print("ideal:", [R.format(g) for g in I.generators])
print("reduced Groebner basis (grevlex):", [R.format(g) for g in I.groebner])
print("y^2 - x*z in I?", I.contains(y**2 - x * z))
print("x + y in I?", I.contains(x + y))
print("x in sqrt(x^3, y)?", radical_membership(x, Ideal(R, [x**3, y])))

print()
print("(x, y, z) regular:", is_regular_sequence([x, y, z]))
print("(x*y, x) regular:", is_regular_sequence([x * y, x]))

M = mx.from_lists(ZZ, [[2, 4, 4], [-6, 6, 12], [10, -4, -16]], 3, 3)
U, D, V = smith_normal_form(M, ZZ)
print()
print("Smith form of", mx.to_lists(M))
print("  D =", mx.to_lists(D))
print("  U M V == D:", mx.equal(mx.mul(ZZ, mx.mul(ZZ, U, M), V), D))
