"""Brill-Noether surfaces: engine values against the closed forms.

For each surface the theta^(g-1) coefficient is shown in both variants: the
one produced by the operator expansion (which the engine reproduces) and the
alternative closed form, which differs unless r = 1 or lambda = r + 1.
"""
from __future__ import annotations

from motivic_loci.brillnoether import (
    bn_problem,
    evaluations,
    oracle_surface_classical,
    oracle_surface_pencil,
    ty_class_W,
)


def show(label, g, cls, closed, alt):
    chi = cls.integrate()
    ev = evaluations(chi)
    print(f"{label}: chi_y = {chi.format()}  (chi_top {ev['chi_top']}, chi_hol {ev['chi_hol']}, "
          f"signature {ev['signature']})")
    print(f"    theta^(g-1): engine {cls.terms[g - 1].format()}, alternative {alt.terms[g - 1].format()}")
    print(f"    engine equals closed form: {cls == closed}")


def main() -> None:
    for g, r, d in [(6, 1, 5), (8, 1, 6), (8, 2, 8), (11, 2, 10), (10, 1, 7)]:
        cls = ty_class_W(bn_problem(g, d, tuple(range(r + 1))))
        closed, _ = oracle_surface_classical(g, r, d)
        alt, _ = oracle_surface_classical(g, r, d, printed=True)
        show(f"W^{r}_{d}, g={g}", g, cls, closed, alt)
    for g, d, a in [(7, 6, (0, 2)), (6, 6, (0, 3)), (9, 7, (0, 2))]:
        cls = ty_class_W(bn_problem(g, d, a))
        closed, _ = oracle_surface_pencil(g, d, a)
        alt, _ = oracle_surface_pencil(g, d, a, printed=True)
        show(f"W^{list(a)}_{d}, g={g}", g, cls, closed, alt)


if __name__ == "__main__":
    main()
