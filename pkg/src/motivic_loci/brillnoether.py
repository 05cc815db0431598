"""One-pointed Brill-Noether loci ``W^a_d(C, P)`` and ``G^a_d(C, P)`` of a
general pointed curve, computed in the theta ring of ``Pic^d(C)``, together
with closed-form oracles for the curve and surface cases.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .exactalg import YPolynomial
from .loci import InfeasibleError, MotivicSolver, ThetaGeometry, Triple
from .omega import d_kappa, feasible_kappas, omega_pushforward
from .rings import GradedClass, theta_ring

__all__ = [
    "BNProblem",
    "bn_problem",
    "problem_from_json",
    "bn_geometry",
    "ty_class_W",
    "chi_y_W",
    "evaluations",
    "a_of_kappa",
    "ty_class_G",
    "chi_y_G",
    "chi_y_G_from_strata",
    "factorial_det_direct",
    "oracle_factorial_det",
    "oracle_curve",
    "oracle_surface_classical",
    "oracle_surface_classical_expansion",
    "oracle_surface_pencil",
    "oracle_surface_pencil_expansion",
    "pencil_chi_formula",
    "oracle_signature_classical",
    "surface_relations",
]

Y = YPolynomial((0, 1))
_YM1 = Y - 1


@dataclass(frozen=True)
class BNProblem:
    g: int
    d: int
    a: Tuple[int, ...]
    n: Optional[int] = None

    @property
    def r(self) -> int:
        return len(self.a) - 1

    @property
    def lam(self) -> Tuple[int, ...]:
        g, d, r, a = self.g, self.d, self.r, self.a
        return tuple(g - d + r + a[r + 1 - i] - (r + 1 - i) for i in range(1, r + 2))

    @property
    def rho(self) -> int:
        return self.g - sum(self.lam)

    @property
    def min_n(self) -> int:
        # n >= 2g-1-d, and rank(E) = d+n-g+1 must be at least r+1
        return max(2 * self.g - 1 - self.d, 1, self.g + self.r - self.d)

    @property
    def n_value(self) -> int:
        return self.min_n if self.n is None else self.n

    def with_n(self, n: Optional[int]) -> "BNProblem":
        return bn_problem(self.g, self.d, self.a, n)

    def to_json(self) -> dict:
        out = {"g": self.g, "d": self.d, "a": list(self.a)}
        if self.n is not None:
            out["n"] = self.n
        return out


def bn_problem(g: int, d: int, a: Sequence[int], n: Optional[int] = None) -> BNProblem:
    """Validate ``(g, d, a)``; raises ``ValueError`` for malformed data and
    ``InfeasibleError`` when the expected dimension is negative."""
    a = tuple(int(x) for x in a)
    if g < 1:
        raise ValueError(f"genus must be at least 1, got g={g}")
    if d < 0:
        raise ValueError(f"degree must be nonnegative, got d={d}")
    if not a:
        raise ValueError("vanishing sequence a must be nonempty")
    if any(x < 0 or x > d for x in a):
        raise ValueError(f"vanishing sequence entries must lie in [0, d={d}], got a={list(a)}")
    if any(x >= y for x, y in zip(a, a[1:])):
        raise ValueError(f"vanishing sequence must be strictly increasing, got a={list(a)}")
    prob = BNProblem(g, d, a, n)
    if prob.rho < 0:
        raise InfeasibleError(
            f"expected dimension rho={prob.rho} is negative: W^a_d is empty for a general pointed curve")
    if n is not None and n < prob.min_n:
        raise ValueError(f"normalization n={n} is below the required bound {prob.min_n}")
    return prob


def problem_from_json(data: dict) -> BNProblem:
    return bn_problem(int(data["g"]), int(data["d"]), data["a"], data.get("n"))


def bn_geometry(prob: BNProblem, n: Optional[int] = None) -> Tuple[Triple, ThetaGeometry]:
    """Triple ``k = (1..r+1)``, ``p = d+n-g+1``, ``q_i = n + a_{r+1-i}`` over
    the theta ring of genus ``g``."""
    n = prob.n_value if n is None else n
    if n < prob.min_n:
        raise ValueError(f"normalization n={n} is below the required bound {prob.min_n}")
    r = prob.r
    P = prob.d + n - prob.g + 1
    k = tuple(range(1, r + 2))
    q = tuple(n + prob.a[r + 1 - i] for i in range(1, r + 2))
    return Triple(k, (P,) * (r + 1), q), ThetaGeometry(prob.g)


def _empty(prob: BNProblem) -> bool:
    return prob.rho > prob.g


def ty_class_W(prob: BNProblem, n: Optional[int] = None,
               solver: Optional[MotivicSolver] = None) -> GradedClass:
    """``iota_* T_y(W^a_d(C, P))`` in the theta ring; zero outside ``0 <= rho <= g``."""
    if _empty(prob):
        return theta_ring(prob.g).zero()
    tau, geom = bn_geometry(prob, n)
    solver = solver or MotivicSolver(geom)
    return solver.solve(tau)


def chi_y_W(prob: BNProblem, n: Optional[int] = None) -> YPolynomial:
    return ty_class_W(prob, n).integrate()


def evaluations(chi: YPolynomial) -> Dict[str, Fraction]:
    """Topological Euler characteristic, holomorphic Euler characteristic, signature."""
    return {"chi_top": chi(-1), "chi_hol": chi(0), "signature": chi(1)}


def a_of_kappa(prob: BNProblem, kappa: Sequence[int]) -> Tuple[int, ...]:
    """Vanishing sequence of the stratum ``W^{a(kappa)}``: ``a_i`` is followed
    by ``kappa_{r+1-i} - kappa_{r-i}`` consecutive integers (``kappa_0 = 0``)."""
    r = prob.r
    if len(kappa) != r + 1:
        raise ValueError("kappa must have length r+1")
    ext = (0,) + tuple(kappa)
    out: List[int] = []
    for i, ai in enumerate(prob.a):
        width = ext[r + 1 - i] - ext[r - i]
        out.extend(ai + j for j in range(width + 1))
    return tuple(out)


def ty_class_G(prob: BNProblem, n: Optional[int] = None) -> GradedClass:
    """``(pi iota)_* T_y(G^a_d(C, P))`` via the Grassmannian-bundle push-forward."""
    if _empty(prob):
        return theta_ring(prob.g).zero()
    tau, geom = bn_geometry(prob, n)
    return omega_pushforward(tau, geom)


def chi_y_G(prob: BNProblem, n: Optional[int] = None) -> YPolynomial:
    return ty_class_G(prob, n).integrate()


def chi_y_G_from_strata(prob: BNProblem) -> YPolynomial:
    """``sum_kappa d_kappa chi_y(W^{a(kappa)})``, each stratum solved as its
    own Brill-Noether problem."""
    if _empty(prob):
        return YPolynomial()
    tau, _ = bn_geometry(prob)
    acc = YPolynomial()
    for kappa in feasible_kappas(tau, prob.g):
        sub = bn_problem(prob.g, prob.d, a_of_kappa(prob, kappa))
        acc = acc + d_kappa(prob.lam, kappa) * chi_y_W(sub)
    return acc


# ---------------------------------------------------------------------------
# closed-form oracles (independent of the engine)
# ---------------------------------------------------------------------------

def _inv_fact(m: int) -> Fraction:
    return Fraction(0) if m < 0 else Fraction(1, factorial(m))


def factorial_det_direct(l: Sequence[int]) -> Fraction:
    """``|1/(l_i+j-i)!|`` by cofactor expansion."""
    t = len(l)

    def det(rows: Tuple[int, ...], cols: Tuple[int, ...]) -> Fraction:
        if not rows:
            return Fraction(1)
        i = rows[0]
        acc = Fraction(0)
        for pos, j in enumerate(cols):
            e = _inv_fact(l[i] + j - i)
            if e:
                acc += (-1) ** pos * e * det(rows[1:], cols[:pos] + cols[pos + 1:])
        return acc

    return det(tuple(range(t)), tuple(range(t)))


def oracle_factorial_det(l: Sequence[int]) -> Fraction:
    """``prod_{i<j}(l_i-l_j+j-i) / prod_i (l_i+t-i)!`` (1-based ``i``)."""
    t = len(l)
    num = 1
    for i in range(t):
        for j in range(i + 1, t):
            num *= l[i] - l[j] + j - i
    den = 1
    for i in range(1, t + 1):
        m = l[i - 1] + t - i
        if m < 0:
            return Fraction(0)
        den *= factorial(m)
    return Fraction(num, den)


def oracle_curve(g: int, d: int, a: Sequence[int]) -> YPolynomial:
    """``chi_y = (y-1) g! sum_k lambda_k |1/(lambda_i+delta_ik+j-i)!|`` for ``rho = 1``."""
    prob = bn_problem(g, d, a)
    if prob.rho != 1:
        raise ValueError(f"curve oracle needs rho=1, got rho={prob.rho}")
    lam = prob.lam
    total = Fraction(0)
    for k in range(len(lam)):
        shifted = [x + (1 if i == k else 0) for i, x in enumerate(lam)]
        total += lam[k] * oracle_factorial_det(shifted)
    return _YM1 * (factorial(g) * total)


def _classical_data(g: int, r: int, d: int):
    lam = g - d + r
    if lam < 1:
        raise ValueError("classical surface oracle needs g-d+r >= 1")
    rho = g - (r + 1) * lam
    if rho != 2:
        raise ValueError(f"surface oracle needs rho=2, got rho={rho}")
    norm = Fraction(1)
    for i in range(r + 1):
        norm *= Fraction(factorial(i), factorial(lam + i))
    return lam, norm


def oracle_surface_classical(g: int, r: int, d: int,
                             printed: bool = False) -> Tuple[GradedClass, YPolynomial]:
    """Closed-form ``T_y(W^r_d(C))`` and ``chi_y`` for ``rho = 2``, ``a_i = i``.

    The ``theta^{g-1}`` coefficient is ``lambda(r+1)/(lambda+r+1) (y-1)``, the
    value forced by the linear part of the operator expansion.  With
    ``printed=True`` the variant ``lambda(r+3)/(2(lambda+2)) (y-1)`` is used
    instead; the two agree only when ``r = 1`` or ``lambda = r + 1``.
    """
    lam, norm = _classical_data(g, r, d)
    if printed:
        c1 = Fraction(lam * (r + 3), 2 * (lam + 2)) * _YM1
    else:
        c1 = Fraction(lam * (r + 1), lam + r + 1) * _YM1
    c2 = (Fraction(lam * (r + 1), 2 * (lam + r) * (lam + r + 2))
          * (lam * (r + 1) * _YM1 * _YM1 - 2 * Y))
    ring = theta_ring(g)
    cls = GradedClass(ring, {g - 2: YPolynomial.const(norm),
                             g - 1: c1 * norm,
                             g: c2 * norm})
    chi = c2 * (norm * factorial(g))
    return cls, chi


def _shifted_det(lam: Sequence[int], shifts: Sequence[int]) -> Fraction:
    """``|1/(lambda_i+e_i+j-i)!|``: coefficient of ``theta^{|lambda|+|e|}`` in
    the raised determinant."""
    return oracle_factorial_det([l + e for l, e in zip(lam, shifts)])


def _linear_class(g: int, lam: Sequence[int], weights: Sequence[int], theta_weight: int,
                  norm: Fraction) -> YPolynomial:
    """``theta^{g-1}`` coefficient of ``(1/2)(sum_i w_i R_i + w theta)(y-1) |c|``."""
    t = len(lam)
    acc = theta_weight * norm
    for i, w in enumerate(weights):
        acc += w * _shifted_det(lam, [1 if j == i else 0 for j in range(t)])
    return _YM1 * (acc / 2)


def oracle_surface_classical_expansion(g: int, r: int, d: int) -> Tuple[GradedClass, YPolynomial]:
    """``T_y`` and ``chi_y`` from the operator expansion: the linear part acts
    through shifted factorial determinants, the quadratic part through the
    tabulated operator values on ``|c_{lambda+j-i}|``."""
    lam, norm = _classical_data(g, r, d)
    lin = _linear_class(g, (lam,) * (r + 1), ([lam - r - 1, lam - r] + [0] * r)[:r + 1],
                        r + 1, norm)
    base = norm * factorial(g)
    r1r1 = Fraction((r + 1) * (r + 2), 2 * (lam + r + 1) * (lam + r + 2)) * base
    r1r2 = Fraction(r * (r + 1), 2 * (lam + r) * (lam + r + 1)) * base if lam + r else Fraction(0)
    r2r2 = -r1r2
    thr1 = Fraction(r + 1, lam + r + 1) * base
    thth = base
    # the theta*R_2 term has no nonzero action
    y2 = _YM1 * _YM1
    e = lam - r
    total = (((3 * e * e + 7 * r - 5 * lam + 2) * y2 + 8 * (1 - r - lam) * Y) * r1r1
             + 2 * ((3 * e * (e - 1) - 1) * y2 + 20 * Y) * r1r2
             + (3 * e * e * y2 + (lam + r - 2) * (y2 - 8 * Y)) * r2r2
             + 2 * ((3 * lam * (r + 1) - 3 * r * (r + 2) - 2) * y2 - 8 * Y) * thr1
             + 3 * (r + 1) ** 2 * y2 * thth)
    chi = total * Fraction(1, 24)
    cls = GradedClass(theta_ring(g), {g - 2: YPolynomial.const(norm), g - 1: lin,
                                      g: chi * Fraction(1, factorial(g))})
    return cls, chi


def oracle_signature_classical(g: int, r: int, d: int) -> Fraction:
    _, norm = _classical_data(g, r, d)
    return factorial(g) * Fraction(2 - g, (g - d + 2 * r) * (g - d + 2 * r + 2)) * norm


def _pencil_data(g: int, d: int, a: Sequence[int]):
    prob = bn_problem(g, d, a)
    if prob.r != 1:
        raise ValueError("pencil oracle needs r=1")
    if prob.rho != 2:
        raise ValueError(f"surface oracle needs rho=2, got rho={prob.rho}")
    l1, l2 = prob.lam
    if not l1 > l2:
        raise ValueError("pencil oracle needs lambda_1 > lambda_2")
    return l1, l2


def _pencil_big(l1: int, l2: int) -> YPolynomial:
    s = 2 * l2 * (l2 + 2) + 1
    quad = (s * l1 ** 3 - (l2 - 4) * s * l1 ** 2
            + (l2 * (10 - l2 * (6 * l2 + 5)) + 3) * l1 - 3 * l2 * (l2 + 1) ** 2)
    lin = (l1 + 2) * (l2 + 1) * (l1 * l1 + 4 * l1 - l2 * l2 - 2 * l2 + 3)
    return quad * _YM1 * _YM1 - lin * Y


def oracle_surface_pencil(g: int, d: int, a: Sequence[int],
                          printed: bool = False) -> Tuple[GradedClass, YPolynomial]:
    """Closed-form ``T_y`` and ``chi_y`` of a pencil surface with ``lambda_1 > lambda_2``.

    The ``theta^{g-1}`` coefficient is the one produced by the linear part of
    the operator expansion,
    ``(1/2)((l1-2)(2+l1-l2)/((l1+2)(1+l1-l2)) + (l2-1)(l1-l2)/((l2+1)(1+l1-l2)) + 2)``.
    ``printed=True`` substitutes ``(l1^2-(l2-2)l1+2) l2 / ((l1+2)(l2+1))``,
    which agrees with it only for a few ``(l1, l2)`` such as ``(2, 1)``.
    """
    l1, l2 = _pencil_data(g, d, a)
    norm = Fraction(1 + l1 - l2, factorial(l1 + 1) * factorial(l2))
    if printed:
        c1 = Fraction((l1 * l1 - (l2 - 2) * l1 + 2) * l2, (l1 + 2) * (l2 + 1)) * _YM1
    else:
        c1 = (Fraction((l1 - 2) * (2 + l1 - l2), (l1 + 2) * (1 + l1 - l2))
              + Fraction((l2 - 1) * (l1 - l2), (l2 + 1) * (1 + l1 - l2)) + 2) / 2 * _YM1
    c2 = _pencil_big(l1, l2) * Fraction(1, (1 + l1 - l2) * (l1 + 2) * (l1 + 3) * (l2 + 1) * (l2 + 2))
    cls = GradedClass(theta_ring(g), {g - 2: YPolynomial.const(norm),
                                      g - 1: c1 * norm,
                                      g: c2 * norm})
    return cls, pencil_chi_formula(g, l1, l2)


def pencil_chi_formula(g: int, l1: int, l2: int) -> YPolynomial:
    """The pencil ``chi_y`` closed form evaluated at any ``(l1, l2)``.

    At ``l1 = l2`` it differs from the equal-parts value, except at ``y = 0``,
    because the codimension-two stratum ``k+ = (2, 2)`` is then nonempty.
    """
    return _pencil_big(l1, l2) * Fraction(factorial(g), factorial(l1 + 3) * factorial(l2 + 2))


def oracle_surface_pencil_expansion(g: int, d: int, a: Sequence[int]) -> Tuple[GradedClass, YPolynomial]:
    """``T_y`` and ``chi_y`` of a pencil surface from the operator expansion."""
    l1, l2 = _pencil_data(g, d, a)
    norm = oracle_factorial_det((l1, l2))
    lin = _linear_class(g, (l1, l2), (l1 - 2, l2 - 1), 2, norm)
    G = factorial(g)
    f = factorial
    r1r1 = Fraction(G * (3 + l1 - l2), f(l1 + 3) * f(l2))
    r1r2 = Fraction(G * (1 + l1 - l2), f(l1 + 2) * f(l2 + 1))
    r2r2 = Fraction(G * (l1 - l2 - 1), f(l1 + 1) * f(l2 + 2))
    thr1 = Fraction(G * (2 + l1 - l2), f(l1 + 2) * f(l2))
    thr2 = Fraction(G * (l1 - l2), f(l1 + 1) * f(l2 + 1))
    thth = Fraction(G * (1 + l1 - l2), f(l1 + 1) * f(l2))
    y2 = _YM1 * _YM1
    total = (((3 * l1 * l1 - 11 * l1 + 12) * y2 - 8 * l1 * Y) * r1r1
             + 2 * ((3 * (l1 - 2) * l2 - 3 * l1 + 5) * y2 + 8 * Y) * r1r2
             + (l2 - 1) * ((3 * l2 - 2) * y2 - 8 * Y) * r2r2
             + 2 * ((6 * l1 - 11) * y2 - 8 * Y) * thr1
             + 2 * ((6 * l2 - 5) * y2 - 8 * Y) * thr2
             + 12 * y2 * thth)
    chi = total * Fraction(1, 24)
    cls = GradedClass(theta_ring(g), {g - 2: YPolynomial.const(norm), g - 1: lin,
                                      g: chi * Fraction(1, factorial(g))})
    return cls, chi


def surface_relations(g: int, chi: YPolynomial) -> Dict[str, bool]:
    """The three linear relations among signature, chi_hol and chi_top."""
    ev = evaluations(chi)
    sig, hol, top = ev["signature"], ev["chi_hol"], ev["chi_top"]
    return {
        "signature_vs_hol": Fraction(g - 2, 2) * sig == -hol,
        "signature_vs_top": (2 * g - 3) * sig == -top,
        "top_vs_hol": (g - 2) * top == (4 * g - 6) * hol,
        "parity": (sig - top) % 2 == 0,
    }
