"""
Shift functors and dimension vectors
====================================

Walk the regular dimension vectors down to the fundamental domain, then
check on actual modules that the shift acts on dimension vectors the way
the arithmetic says.
"""

from kronecker import bgp, k0, rep, zoo
from kronecker.field import get_field

# the Tits form is negative on regular vectors and invariant under the shift
for v in [(1, 1), (2, 2), (4, 2), (3, 2), (10, 4)]:
    print(v, "q =", k0.tits_q(v), "sigma ->", k0.sigma_dim(v), "reduces to", k0.reduce_to_F(v)[0])

# which regular vectors carry an elementary module?
for s in range(2, 9):
    row = [(x, s - x) for x in range(s + 1) if k0.exists_elementary_dim((x, s - x))]
    print(f"x+y={s}:", row)

F = get_field(2)
X = zoo.build_X(F)
Y = bgp.sigma_rep(X)
print("sigma X has dimension", Y.dim, "and is", "indecomposable" if rep.is_indecomposable(Y) else "decomposable")
print("sigma^-1 sigma X isomorphic to X:", rep.is_isomorphic(bgp.sigma_inv_rep(Y), X))
print("Y agrees with the zoo copy:", rep.is_isomorphic(Y, zoo.build_Y(F)))

# the preinjectives sigma^i S(1)
for i in range(4):
    I = zoo.build_I(F, i)
    print(f"I_{i}", I.dim, "preinjective:", bgp.is_preinjective(I))
