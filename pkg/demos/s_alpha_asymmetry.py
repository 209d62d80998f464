"""Homology and cohomology of S^alpha over Z/2 disagree.

S^alpha is the circle with two fixed points and a free orbit of edges.
Bredon homology with Z/2 coefficients sees the pushforward G/e -> G/G as
multiplication by 2, which is zero mod 2, so both fixed points survive.
Cohomology sees only the orbit space, an interval.
"""

from equihom import bredon as br


def main() -> None:
    X = br.s_alpha()
    print("simplex counts", X.counts())
    for S in br.strata(X):
        print(f"stratum |H|={S.subgroup.order} height={S.height} cells={S.cells}")
    print("homology   Z/2:", br.bredon_homology_direct(X, 2).as_list(0, 1))
    print("collapse   Z/2:", br.bredon_homology_collapse(X, 2).as_list(0, 1))
    print("cohomology Z/2:", br.bredon_cohomology(X, 2).as_list(0, 1))
    H = br.bredon_homology_direct(X, "z")
    print("homology   Z  : ranks", H.as_list(0, 1), "torsion", H.torsion)


if __name__ == "__main__":
    main()
