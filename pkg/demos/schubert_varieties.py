"""Motivic classes of Schubert varieties in Gr(2, 5).

Prints the CSM class and chi_y genus of every Schubert variety, and checks
chi_y against the cell decomposition.
"""
from __future__ import annotations

from motivic_loci import GrassmannianGeometry, MotivicSolver, schubert_locus
from motivic_loci.omega import sub_shapes


def main() -> None:
    k, n = 2, 5
    geom = GrassmannianGeometry(k, n)
    ty = MotivicSolver(geom)
    csm = MotivicSolver(geom, "csm")
    for shape in sorted(sub_shapes((n - k,) * k), key=sum):
        mu = tuple(x for x in reversed(shape) if x)
        tau, _ = schubert_locus(mu, k, n)
        chi = ty.solve(tau).integrate()
        print(f"mu={list(mu)!s:8} chi_y = {chi.format():28} euler = {chi(-1)}")
        print(f"    c_SM = {csm.solve(tau).format()}")


if __name__ == "__main__":
    main()
