"""Show that the maximum of two cut metrics need not be a cut metric."""

from fractions import Fraction

from funclust.cut_tree import CutDecomposition, decompose, evaluate
from funclust.io import emit_matrix
from funclust.weights import max2

G = (1, 2, 3, 4, 5)


def main():
    third = Fraction(1, 3)
    d1 = evaluate(CutDecomposition.of(G, [({1, 2}, third), ({1, 3}, third), ({1, 4}, third),
                                          ({2, 5}, third), ({3, 5}, third), ({4, 5}, third)]))
    d0 = evaluate(CutDecomposition.of(G, [({2}, 1), ({3}, 1), ({4}, 1)]))
    d = max2(d0, d1)
    for name, m in (("d0", d0), ("d1", d1), ("max(d0, d1)", d)):
        print(f"{name}:\n{emit_matrix(m)}")
    res = decompose(d)
    print(f"decomposable: {res.feasible} ({res.cuts_checked} cuts)")
    if not res.feasible:
        print("certificate (pair weights, nonnegative on every cut, negative on d):")
        for (x, y), v in res.certificate.items():
            if v:
                print(f"  {x}{y}: {v}")


if __name__ == "__main__":
    main()
