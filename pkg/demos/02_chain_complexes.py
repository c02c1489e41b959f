"""Chain complexes: cones, cylinders, homology and splitting off a retract."""

import random

from koszulkit import matrix as mx
from koszulkit.complexes import (
    ChainComplex,
    ChainMap,
    cone,
    cylinder,
    euler_characteristic,
    homology,
    is_quasi_iso,
    null_homotopy,
    retraction_splitting,
)
from koszulkit.rings import ZZ, parse_ring
from koszulkit.snf import module_type
from koszulkit.suite import random_retraction

# [Z --2--> Z] has H_0 = Z/2
K = ChainComplex(ZZ, {0: 1, 1: 1}, {1: mx.matrix(ZZ, [[2]])})
print("H_0 of [Z -2-> Z]:", module_type(homology(K, 0)), " (free rank, torsion)")

# multiplication by 2 kills H_0 = Z/2, so it is not a quasi-isomorphism
f = ChainMap(K, K, {0: mx.matrix(ZZ, [[2]]), 1: mx.matrix(ZZ, [[2]])})
print("2: K -> K quasi-iso?", is_quasi_iso(f))
Cf = cone(f)
print("cone ranks:", {n: Cf.rank(n) for n in Cf.degrees()}, " χ =", euler_characteristic(Cf),
      " H_1 =", module_type(homology(Cf, 1)))
print("identity on K null-homotopic?", null_homotopy(ChainMap.identity(K)) is not None)
print("identity on Cone(id) null-homotopic?", null_homotopy(ChainMap.identity(cone(ChainMap.identity(K)))) is not None)

cy = cylinder(f)
print("cylinder: β ∘ j1 == f:", cy.beta @ cy.j1 == f)

# a strict retraction y -> x, hidden by a change of basis, split as y ≃ x ⊕ Cone i
i, p = random_retraction(4)
sp = retraction_splitting(i, p)
print()
print("retraction over", i.ring, ": x ranks", {n: i.domain.rank(n) for n in i.domain.degrees()},
      " y ranks", {n: i.codomain.rank(n) for n in i.codomain.degrees()})
print("splitting verified:", sp.verify())
