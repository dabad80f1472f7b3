"""
Dimension vectors without elementary modules, over a finite field
=================================================================

(3,2) and (3,3) have negative Tits form but lie outside the orbits of the
four normal forms. The full census over F_2 counts what it finds; modules
that are elementary only because F_2 is too small to see a splitting show
up as closure-gap findings and are checked again over larger fields.
"""

from kronecker import census, rep, structure as st
from kronecker.field import get_field

F = get_field(2)
for d in ((3, 2), (3, 3)):
    r = census.run_census(d, F)
    print(d, "elementary:", r["counts"]["elementary"], "verdict:", r["verdict"], f"({r['timing']['seconds']} s)")
    for a in r["anomalies"][:3]:
        M = rep.from_dict(a["rep"])
        p, k = a["non_elementary_after_extension_to"]
        print("   orbit of size", a["weight"], "stops being elementary over F_%d" % p**k)
        U, Q = st.nonelementarity_witness(rep.extend_scalars(M, get_field(p, k)))
        print("   regular submodule", U.dim, "with regular factor", Q.dim)

# set against the Tits-form prediction for small vectors
for row in census.corollary_check([census.run_census((3, 2), F)], F, max_total=5):
    print(row)
