"""Weak-equivalence certificates for double complexes, written out and checked again."""

from koszulkit import witness as wt
from koszulkit.document import Document, parse_text
from koszulkit.rings import ZZ

X = wt.random_double_complex(0)
print("double complex: outer degrees", list(X.degrees()),
      " entry ranks", {n: [X.entry(n).rank(i) for i in X.entry(n).degrees()] for n in X.degrees()})

cert = wt.zigzag_to_tot(X)
print("zig-zag to the total complex:", " ".join(f"{o}{t}" for o, t in cert.tags()))
print("header:", cert.header)

doc = Document(ZZ)
doc.add("Z", "certificate", cert)
text = doc.serialize()
print(f"serialized certificate: {len(text.splitlines())} lines")
again = parse_text(text).get("Z")
print("re-parsed certificate verifies:", again.verify())

F = wt.random_double_map(4)
cc = wt.cone_compare(F)
print()
print("Cone^B f -> . <- Cone^A f:", " ".join(f"{o}{t}" for o, t in cc.tags()), " verified:", cc.verify())

G = wt.random_lw_map(2)
sw = wt.solid_witness(G)
print("solid witness for a levelwise quasi-iso:", " ".join(f"{o}{t}" for o, t in sw.tags()),
      " end levelwise acyclic:", sw.end.is_levelwise_acyclic())
