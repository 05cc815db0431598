"""Shape combinatorics for the Grassmannian-bundle locus Omega_lambda and its
push-forward ``sum_kappa d_kappa * iota_* T_y(W_lambda^kappa)``.

Shapes ``kappa`` are weakly increasing sequences; ``kappa_i`` boxes sit in
row ``i``.  A shape is *feasible* for ``lambda`` when ``lambda + kappa`` is
weakly decreasing.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .exactalg import YPolynomial
from .loci import (
    DegeneracyGeometry,
    MotivicSolver,
    Triple,
    lambda_of,
)
from .rings import GradedClass

__all__ = [
    "is_shape",
    "is_feasible",
    "kappa_red",
    "kappa_red_bruteforce",
    "sub_shapes",
    "d_kappa",
    "d_kappa_bruteforce",
    "d_kappa_mobius",
    "p_shapes",
    "p_shapes_bruteforce",
    "skew_components",
    "gaussian_binomial",
    "omega_triple",
    "feasible_kappas",
    "omega_pushforward",
    "chi_y_omega",
]

_MINUS_Y = YPolynomial((0, -1))


def is_shape(kappa: Sequence[int]) -> bool:
    return all(x >= 0 for x in kappa) and all(a <= b for a, b in zip(kappa, kappa[1:]))


def is_feasible(lam: Sequence[int], kappa: Sequence[int]) -> bool:
    s = [l + k for l, k in zip(lam, kappa)]
    return is_shape(kappa) and all(a >= b for a, b in zip(s, s[1:]))


def _check(lam, kappa):
    if len(lam) != len(kappa):
        raise ValueError("lambda and kappa must have the same length")
    if not is_shape(kappa):
        raise ValueError(f"kappa {list(kappa)} is not a weakly increasing nonnegative sequence")
    if not is_feasible(lam, kappa):
        raise ValueError(f"lambda + kappa is not weakly decreasing for lambda={list(lam)}, kappa={list(kappa)}")


def kappa_red(lam: Sequence[int], kappa: Sequence[int]) -> Tuple[int, ...]:
    """Minimal weakly increasing sequence agreeing with ``kappa`` at the last
    entry and wherever ``lambda + kappa`` strictly drops to the next row."""
    _check(lam, kappa)
    t = len(kappa)
    out: List[int] = []
    for i in range(t):
        forced = i == t - 1 or kappa[i + 1] + lam[i + 1] < kappa[i] + lam[i]
        if forced:
            out.append(kappa[i])
        else:
            out.append(out[-1] if out else 0)
    return tuple(out)


def sub_shapes(kappa: Sequence[int], lower: Optional[Sequence[int]] = None):
    """All shapes ``lower <= s <= kappa`` componentwise."""
    t = len(kappa)
    low = list(lower) if lower is not None else [0] * t

    def rec(i, prev, acc):
        if i == t:
            yield tuple(acc)
            return
        for v in range(max(prev, low[i]), kappa[i] + 1):
            acc.append(v)
            yield from rec(i + 1, v, acc)
            acc.pop()

    yield from rec(0, 0, [])


def kappa_red_bruteforce(lam: Sequence[int], kappa: Sequence[int]) -> Tuple[int, ...]:
    """Smallest sub-shape of ``kappa`` not inside any smaller feasible shape."""
    _check(lam, kappa)
    kappa = tuple(kappa)
    smaller = [e for e in sub_shapes(kappa) if e != kappa and is_feasible(lam, e)]
    candidates = [s for s in sub_shapes(kappa)
                  if not any(all(a <= b for a, b in zip(s, e)) for e in smaller)]
    best = [s for s in candidates
            if all(all(a <= b for a, b in zip(s, c)) for c in candidates)]
    if len(best) != 1:
        raise AssertionError("no unique minimal shape")
    return best[0]


def d_kappa(lam: Sequence[int], kappa: Sequence[int]) -> YPolynomial:
    """``sum (-y)^{|kappa'|}`` over shapes between ``kappa_red`` and ``kappa``,
    by dynamic programming over rows (state: last row length)."""
    red = kappa_red(lam, kappa)
    # state: value of the previous entry -> generating polynomial in u = -y
    states: Dict[int, Dict[int, int]] = {0: {0: 1}}
    for i in range(len(kappa)):
        nxt: Dict[int, Dict[int, int]] = {}
        for prev, poly in states.items():
            for v in range(max(prev, red[i]), kappa[i] + 1):
                bucket = nxt.setdefault(v, {})
                for e, c in poly.items():
                    bucket[e + v] = bucket.get(e + v, 0) + c
        states = nxt
    total: Dict[int, int] = {}
    for poly in states.values():
        for e, c in poly.items():
            total[e] = total.get(e, 0) + c
    return YPolynomial.from_dict({e: c * (-1) ** e for e, c in total.items()})


def d_kappa_bruteforce(lam: Sequence[int], kappa: Sequence[int]) -> YPolynomial:
    """Direct enumeration over all integer vectors in the box ``[red, kappa]``."""
    red = kappa_red_bruteforce(lam, kappa)
    acc = YPolynomial()
    for vec in product(*[range(a, b + 1) for a, b in zip(red, kappa)]):
        if is_shape(vec):
            acc = acc + _MINUS_Y ** sum(vec)
    return acc


def _chi_schubert_complement(kappa: Sequence[int]) -> YPolynomial:
    acc = YPolynomial()
    for s in sub_shapes(kappa):
        acc = acc + _MINUS_Y ** sum(s)
    return acc


def d_kappa_mobius(lam: Sequence[int], kappa: Sequence[int]) -> YPolynomial:
    """``chi_y(S_{kappa^c}) - sum d_eps`` over feasible ``eps < kappa``."""
    _check(lam, kappa)
    memo: Dict[Tuple[int, ...], YPolynomial] = {}

    def d(k: Tuple[int, ...]) -> YPolynomial:
        if k in memo:
            return memo[k]
        val = _chi_schubert_complement(k)
        for e in sub_shapes(k):
            if e != k and is_feasible(lam, e):
                val = val - d(e)
        memo[k] = val
        return val

    return d(tuple(kappa))


def p_shapes(kappa: Sequence[int]) -> int:
    """``|C(kappa_{l+1-j} + l - i + 1, 1 + j - i)|``: the number of shapes
    inside ``kappa`` (non-intersecting lattice paths)."""
    l = len(kappa)
    if l == 0:
        return 1
    mat = []
    for i in range(1, l + 1):
        row = []
        for j in range(1, l + 1):
            kk = 1 + j - i
            n = kappa[l - j] + l - i + 1
            row.append(Fraction(comb(n, kk)) if kk >= 0 and n >= 0 else Fraction(0))
        mat.append(row)
    return int(_fraction_det(mat))


def _fraction_det(mat: List[List[Fraction]]) -> Fraction:
    m = [list(r) for r in mat]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for j in range(c, n):
                    m[r][j] -= f * m[c][j]
    return det


def p_shapes_bruteforce(kappa: Sequence[int]) -> int:
    return sum(1 for _ in sub_shapes(kappa))


def skew_components(lam: Sequence[int], kappa: Sequence[int]) -> List[Tuple[int, ...]]:
    """Split ``kappa - kappa_red`` into the independent runs of rows that
    share a free region; each run is returned as a shape."""
    red = kappa_red(lam, kappa)
    t = len(kappa)
    comps: List[Tuple[int, ...]] = []
    i = 0
    while i < t:
        if red[i] == kappa[i]:
            i += 1
            continue
        j = i
        base = red[i]
        while j < t and red[j] == base and kappa[j] > red[j]:
            j += 1
        comps.append(tuple(kappa[r] - base for r in range(i, j)))
        i = j
    return comps


def gaussian_binomial(m: int, k: int, q: Optional[YPolynomial] = None) -> YPolynomial:
    """``[m choose k]_q`` as a polynomial; ``q`` defaults to the variable itself."""
    if not 0 <= k <= m:
        raise ValueError("need 0 <= k <= m")
    # Pascal-type recurrence [m,k] = [m-1,k-1] + q^k [m-1,k]
    table = {(0, 0): YPolynomial.const(1)}
    var = YPolynomial((0, 1))
    for mm in range(1, m + 1):
        for kk in range(0, min(mm, k) + 1):
            left = table.get((mm - 1, kk - 1), YPolynomial()) if kk >= 1 else YPolynomial()
            right = table.get((mm - 1, kk), YPolynomial()) if kk <= mm - 1 else YPolynomial()
            table[(mm, kk)] = left + var ** kk * right
    poly = table[(m, k)]
    return poly.compose(q) if q is not None else poly


# ---------------------------------------------------------------------------
# push-forward of Omega_lambda
# ---------------------------------------------------------------------------

def _base_data(tau: Triple):
    t = tau.t
    if tau.k != tuple(range(1, t + 1)) or len(set(tau.p)) > 1:
        raise ValueError("Omega locus needs a triple with k = (1..t) and constant p")
    lam = tuple(q - p + i for i, (p, q) in enumerate(zip(tau.p, tau.q), 1))
    if any(a < b for a, b in zip(lam, lam[1:])) or any(x < 0 for x in lam):
        raise ValueError("lambda of the base triple must be a partition")
    return lam, (tau.p[0] if t else 0)


def omega_triple(tau: Triple, kappa: Sequence[int]) -> Triple:
    """Triple of ``W_lambda^kappa``: kernel dimensions ``i + kappa_i``."""
    t = tau.t
    return Triple(tuple(i + kappa[i - 1] for i in range(1, t + 1)), tau.p, tau.q)


def feasible_kappas(tau: Triple, D: int) -> List[Tuple[int, ...]]:
    """Feasible shapes with ``i + kappa_i <= p`` and codimension at most ``D``.

    Depth-first; the codimension uses the partition of the reduced triple
    (``1 + kappa_1`` parts of ``lambda_1 + kappa_1`` and so on), not
    ``lambda + kappa``.
    """
    lam, p = _base_data(tau)
    t = tau.t
    out: List[Tuple[int, ...]] = []

    def codim(prefix):
        # minimal completion: repeat the last entry
        full = list(prefix) + [prefix[-1] if prefix else 0] * (t - len(prefix))
        if any(i + full[i - 1] > p for i in range(1, t + 1)):
            return D + 1
        return sum(lambda_of(omega_triple(tau, full)))

    def rec(prefix):
        i = len(prefix)
        if i == t:
            out.append(tuple(prefix))
            return
        lo = prefix[-1] if prefix else 0
        for v in range(lo, p - (i + 1) + 1):
            if i and lam[i - 1] + prefix[-1] < lam[i] + v:
                break
            cand = prefix + [v]
            if codim(cand) > D:
                break
            rec(cand)

    rec([])
    return out


def omega_pushforward(tau: Triple, geom: DegeneracyGeometry,
                      solver: Optional[MotivicSolver] = None) -> GradedClass:
    """``(pi iota)_* T_y(Omega_lambda) = sum_kappa d_kappa iota_* T_y(W_lambda^kappa)``."""
    lam, _ = _base_data(tau)
    solver = solver or MotivicSolver(geom)
    acc = geom.ring.zero()
    for kappa in feasible_kappas(tau, geom.dimension):
        acc = acc + solver.solve(omega_triple(tau, kappa)) * d_kappa(lam, kappa)
    return acc


def chi_y_omega(tau: Triple, geom: DegeneracyGeometry) -> YPolynomial:
    return omega_pushforward(tau, geom).integrate()
