"""BS(2,3) maps onto itself with a nontrivial kernel, so it is not residually finite.

    python demos/non_hopfian.py
"""

from fqforge import construct as C
from fqforge.presentations import GeneratorMap
from fqforge.quotients import hopf_witness, low_index_subgroups

bs = C.bs23()
o = C.bs23_oracle()
print(f"group {bs.name}: gens {' '.join(bs.generators)}, relator {bs.format(bs.relators[0])}")

phi = GeneratorMap.from_strings(bs, bs, {"a": "a^2", "t": "t"})
print("phi: a -> a^2, t -> t")
for r in bs.relators:
    print(f"  phi(relator) = {bs.format(phi(r))} -> {o.equal(phi(r)).value}")

# a is in the image: phi(t^-1 a t a^-1) = t^-1 a^2 t a^-2 = a^3 a^-2 = a
pre = bs.word("t^-1 a t a^-1")
print(f"  phi({bs.format(pre)}) equals a: {o.equal(phi(pre), bs.word('a')).value}")

k = bs.word("[a, t^-1 a t]")
print(f"kernel candidate {bs.format(k)}")
print(f"  Britton form {bs.format(o.britton_reduce(k))}, trivial? {o.equal(k).value}")
print(f"  phi(k) = {bs.format(phi(k))}, trivial? {o.equal(phi(k)).value}")

w = hopf_witness(phi, {0: pre, 1: bs.word("t")}, k, o)
print(f"non-Hopfian witness holds: {w.non_hopfian}")

li = low_index_subgroups(bs, 3)
print(f"it still has finite quotients: {len(li.subgroups)} subgroup classes of index <= 3")
