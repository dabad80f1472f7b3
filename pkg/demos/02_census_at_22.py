"""
All representations of dimension (2,2) over F_2
===============================================

4096 matrix triples. On the scalar-local indecomposables, being elementary,
being a disguised copy of X and failing to be a tree module go together.
"""

import json

from kronecker import census, rep, structure as st, zoo
from kronecker.field import get_field

F = get_field(2)
report = census.run_census((2, 2), F)
print(json.dumps(report["counts"], indent=1))
print("verdict:", report["verdict"], "in", report["timing"]["seconds"], "s")

# X itself: no basis change gives a tree, and the normal form recovers it
X = zoo.build_X(F)
print("tree search on X:", st.tree_module_search(X))
w = st.x_normal_form(X)
print("X normal form parameters kappa, nu:", w.extra[2], w.extra[3])

# the two non-elementary shapes are tree modules
for name in ("TREE_LEFT", "TREE_RIGHT"):
    T = zoo.build(name, F)
    G = st.coefficient_quiver(T)
    print(name, "elementary:", st.is_elementary(T), "tree:", st.is_tree(G))
    print(st.to_dot(G))

# the same count over F_3 takes a few seconds more
r3 = census.run_census((2, 2), get_field(3), jobs=2)
print("F_3:", r3["counts"]["elementary"], "elementary of", r3["counts"]["total"], "->", r3["verdict"])
