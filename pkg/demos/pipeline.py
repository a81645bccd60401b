"""Embed a group into one with no finite quotients found, and look at the certificates.

    python demos/pipeline.py            # G trivial
    python demos/pipeline.py Z          # G = <c>
"""

import sys
import time

from fqforge import construct as C
from fqforge.metrics import Embedding, check_isometric
from fqforge.presentations import Presentation
from fqforge.quotients import abelianization, certify_no_finite_quotients

G = Presentation("Z", ("c",), ()) if sys.argv[1:] == ["Z"] else Presentation("1", (), ())
rec = C.construct_ghat(G, 2)
O = C.build_tower_oracle(rec)

print(f"input {G.name}, n = {rec.n}")
for name, p in rec.stages.items():
    print(f"  {name:5s} {p.rank:3d} generators {len(p.relators):3d} relators")

G1 = rec.stages["G1"]
print(f"dead element g = {G1.format(rec.g_word)}")
print(f"g0 = [g, t] has {len(rec.g0_word)} letters; A* = {', '.join(rec.astar_names)}")

print("audit:")
for item in C.audit(rec, O):
    print(f"  {'ok ' if item.ok else 'BAD'} {item.name} {item.detail}")

cert = check_isometric(Embedding([rec.g0_word], O.G1, rec.astar), 3)
print(f"<g0> in G1 over A*: {cert.verdict.value}(3), distances {[row[2] for row in cert.table]}")

t = time.perf_counter()
q = certify_no_finite_quotients(rec.ghat, order_bound=12, max_index=3)
print(f"Ghat abelianization {abelianization(rec.ghat)}; certificate {q.status.value} "
      f"in {time.perf_counter() - t:.2f} s")
for line in q.inventory():
    print(f"  {line}")
