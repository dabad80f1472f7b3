"""
Filtrations with elementary factors are not unique
==================================================

Two regular modules of dimension (3,3) and (4,3) get filtrations with
different factors depending on whether small or large submodules are
preferred at each step.
"""

from kronecker import rep, structure as st, zoo
from kronecker.field import get_field

F = get_field(2)
named = {
    "B(alpha)": zoo.build_B(F, 0), "B(beta)": zoo.build_B(F, 1), "B(gamma)": zoo.build_B(F, 2),
    "X": zoo.build_X(F),
    "V(alpha,beta)": zoo.build_V(F, 0, 1), "V(alpha,gamma)": zoo.build_V(F, 0, 2), "V(beta,gamma)": zoo.build_V(F, 1, 2),
}


def label(factor):
    for name, Z in named.items():
        if factor.dim == Z.dim and rep.is_isomorphic(factor, Z):
            return name
    return f"regular {factor.dim}"


for name, M in (("M", zoo.build_example_M(F)), ("N", zoo.build_example_N(F))):
    print(name, M.dim, "elementary:", st.is_elementary(M))
    for strategy in ("min_sub", "max_sub"):
        chain = st.elementary_filtration(M, strategy)
        assert st.validate_chain(M, chain)
        print(f"  {strategy:8s}", [label(f) for f in chain.factors])

# a nonzero regular submodule with regular factor certifies non-elementarity
U, Q = st.nonelementarity_witness(zoo.build_example_M(F))
print("witness for M: submodule", U.dim, "factor", Q.dim)
