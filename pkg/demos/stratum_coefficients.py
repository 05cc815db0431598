"""Stratum coefficients in the resolution push-forward.

For the triple ((2), (3), (3)), inflated to ((1,2), (2,3), (3,3)), the
push-forward of the resolution decomposes over the strata k+.  Two of them,
k+ = (1,3) and (2,3), define the same locus, so their coefficients add up.
The equal-parts pencil formula is also compared with the classical value.
"""
from __future__ import annotations

from motivic_loci import FreeGeometry, MotivicSolver, Triple
from motivic_loci.brillnoether import bn_problem, chi_y_W, pencil_chi_formula
from motivic_loci.exactalg import YPolynomial
from motivic_loci.loci import fiber_chi_y


def main() -> None:
    geom = FreeGeometry(9, 3, 3)
    solver = MotivicSolver(geom)
    totals = {}
    for kp, coeff, sub in solver.strata(Triple((2,), (3,), (3,))):
        print(f"k+={kp}: fiber chi_y {fiber_chi_y(kp).format():14} coefficient {coeff.format():6} "
              f"locus {sub}")
        totals[sub] = totals.get(sub, YPolynomial()) + coeff
    for sub, total in totals.items():
        print(f"total coefficient on {sub}: {total.format()}")

    print()
    for g in (6, 8, 10):
        l = (g - 2) // 2
        formula = pencil_chi_formula(g, l, l)
        actual = chi_y_W(bn_problem(g, g - l + 1, (0, 1)))
        print(f"g={g}: pencil formula {formula.format():24} classical {actual.format():24} "
              f"agree at y=0: {formula(0) == actual(0)}")


if __name__ == "__main__":
    main()
