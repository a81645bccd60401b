"""Minimal areas in small groups and the syllable-pushing bound for an amalgam.

    python demos/dehn_bounds.py [length bound, default 6]
"""

import sys

from fqforge import construct as C
from fqforge.dehn import alternating_certificate, check_composite_bounds, dehn_sample, min_area
from fqforge.presentations import Presentation

L = int(sys.argv[1]) if len(sys.argv) > 1 else 6

z2 = Presentation.from_strings("Z2", ["a", "b"], ["[a,b]"])
for text in ("[a,b]", "[a^2,b]", "[a^2,b^2]"):
    res = min_area(z2, z2.word(text))
    c = res.certificate
    print(f"Z2 {text:10s} area {res.area}  conjugators up to {c.diameter}  replays {c.verify()}")

s = dehn_sample(z2, L)
print(f"Z2 Dehn sample up to {L}: f = {s.areas}, diameters = {s.diameters}")

g = C.free_amalgam_gog()
P = C.flatten_gog(g)
w = P.word("L.b L.a R.c^-1 L.b^-1")
alt = alternating_certificate(g, w)
print(f"amalgam word {P.format(w)}: {alt.alternating_length} syllables, area {alt.area}")
for step in alt.steps:
    print(f"  {step}")

rep = check_composite_bounds(g, L)
worst = max(rep.rows, key=lambda r: r.area)
print(f"{len(rep.rows)} null words up to length {L}; all bounds hold: {rep.ok}")
print(f"  largest certificate area {worst.area} for {P.format(worst.word)} "
      f"(bound {worst.area_bound}, exact {worst.min_area})")

try:
    alternating_certificate(C.bs23_gog(), C.flatten_gog(C.bs23_gog()).word("t^-1 a^2 t a^-3"))
except Exception as exc:
    print(f"BS(2,3) refused: {exc}")
