"""Geometric fixed points of elementary abelian groups against their rings.

For each (p, n) the nerve E^1 column sums are compared with the graded
dimensions of the presented ring, its model and the closed-form series,
then with the integral form and the kernel of the Bockstein.
"""

from equihom import bredon as br
from equihom import rings as rg
from equihom.groups import builtin, frattini_subgroup, quotient

TOP = 5


def main() -> None:
    for p, n in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)]:
        G = builtin("elementary", p, n)
        R = rg.presentation(p, n)
        phi = br.phi_coefficients(G, p, TOP).as_list(0, TOP)
        print(f"p={p} n={n}: {len(R.gens)} generators, {len(R.relations)} relations")
        print("  phi        ", phi)
        print("  presented  ", rg.graded_dims(R, TOP))
        print("  model rank ", [rg.model_rank(R, d) for d in range(TOP + 1)])
        print("  series     ", rg.poincare_mod_p(p, n, TOP).coefficients)
        print("  ker beta   ", rg.bockstein_kernel_dims(p, n, TOP))
        print("  integral   ", rg.graded_dims(rg.presentation(p, n, "integral"), TOP))

    print("Frattini reduction:")
    for name, args in [("cyclic", (4,)), ("dihedral", (8,)), ("quaternion", (8,))]:
        G = builtin(name, *args)
        Q = quotient(G, frattini_subgroup(G, 2)).group
        print(f"  {G.name}: {br.phi_coefficients(G, 2, 4).as_list(0, 4)}"
              f"  G/Phi: {br.phi_coefficients(Q, 2, 4).as_list(0, 4)}")


if __name__ == "__main__":
    main()
