"""Vexillary degeneracy loci: triples, their normal forms, the raising-operator
formula for the push-forward of T_y of the Kempf-Laksov type resolution, and
the inclusion-exclusion over strata that yields ``iota_* T_y(W)``.

A triple ``(k, p, q)`` encodes the conditions
``dim ker(E_{p_i} -> F_{q_i}) >= k_i``.  Throughout, the *lambda-value* of a
condition is ``q_i - p_i + k_i``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .exactalg import YPolynomial, inv_qy_coeffs
from .rings import (
    AmbientRing,
    BundleCharacter,
    GradedClass,
    OperatorSeries,
    SchurRing,
    ThetaRing,
    chern_class,
    free_ring,
    tensor_character,
    total_chern,
    ty_of_smooth,
    ty_of_twisted,
)

__all__ = [
    "Triple",
    "InflatedTriple",
    "InfeasibleError",
    "reduce_triple",
    "inflate_triple",
    "lambda_of",
    "DegeneracyGeometry",
    "ThetaGeometry",
    "GrassmannianGeometry",
    "FreeGeometry",
    "geometry_from_descriptor",
    "triple_from_json",
    "determinant_class",
    "resolution_operator",
    "resolution_class",
    "csm_resolution_class",
    "apply_operator",
    "enumerate_strata",
    "enumerate_strata_bruteforce",
    "fiber_chi_y",
    "stratum_coefficient",
    "stratum_coefficient_recursive",
    "MotivicSolver",
    "motivic_class",
    "chi_y",
    "schubert_locus",
]


class InfeasibleError(ValueError):
    """The requested locus is empty or the problem has negative expected dimension."""


# ---------------------------------------------------------------------------
# triples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Triple:
    k: Tuple[int, ...]
    p: Tuple[int, ...]
    q: Tuple[int, ...]

    def __post_init__(self):
        k, p, q = (tuple(int(x) for x in s) for s in (self.k, self.p, self.q))
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        if not len(k) == len(p) == len(q):
            raise ValueError("k, p, q must have equal lengths")
        if any(x <= 0 for x in k):
            raise ValueError("k entries must be positive")
        if any(x < 0 for x in p) or any(x < 0 for x in q):
            raise ValueError("p and q entries must be nonnegative")
        if any(a > b for a, b in zip(k, k[1:])):
            raise ValueError("k must be weakly increasing")
        if any(a > b for a, b in zip(p, p[1:])):
            raise ValueError("p must be weakly increasing")
        if any(a < b for a, b in zip(q, q[1:])):
            raise ValueError("q must be weakly decreasing")
        if any(a > b for a, b in zip(k, p)):
            raise ValueError("k_i may not exceed p_i")

    @property
    def t(self) -> int:
        return len(self.k)

    def lambda_values(self) -> Tuple[int, ...]:
        return tuple(q - p + k for k, p, q in zip(self.k, self.p, self.q))

    def is_essential(self) -> bool:
        lv = self.lambda_values()
        return (all(a < b for a, b in zip(self.k, self.k[1:]))
                and all(a > b for a, b in zip(lv, lv[1:]))
                and all(v > 0 for v in lv))

    def to_json(self) -> dict:
        return {"k": list(self.k), "p": list(self.p), "q": list(self.q)}

    def __str__(self):
        return f"(k={list(self.k)}, p={list(self.p)}, q={list(self.q)})"


def triple_from_json(data) -> Triple:
    if isinstance(data, str):
        data = json.loads(data)
    return Triple(tuple(data["k"]), tuple(data["p"]), tuple(data["q"]))


def reduce_triple(tau: Triple) -> Triple:
    """Essential triple of shortest subsequences defining the same locus."""
    lv = tau.lambda_values()
    idx = [i for i in range(tau.t) if lv[i] > 0]
    kept: List[int] = []
    for j in idx:
        if any(tau.k[i] >= tau.k[j] for i in kept):
            continue
        kept.append(j)
    final: List[int] = []
    for i in reversed(kept):
        if any(lv[j] >= lv[i] for j in final):
            continue
        final.append(i)
    final.reverse()
    return Triple(tuple(tau.k[i] for i in final),
                  tuple(tau.p[i] for i in final),
                  tuple(tau.q[i] for i in final))


def lambda_of(tau: Triple) -> Tuple[int, ...]:
    """Partition lambda_tau of length ``kbar_t``; its size is the codimension."""
    red = reduce_triple(tau)
    lv = red.lambda_values()
    lam: List[int] = []
    prev = 0
    for a, ka in enumerate(red.k):
        lam.extend([lv[a]] * (ka - prev))
        prev = ka
    return tuple(lam)


def _row_blocks(red: Triple) -> Tuple[int, ...]:
    blocks: List[int] = []
    prev = 0
    for a, ka in enumerate(red.k):
        blocks.extend([a] * (ka - prev))
        prev = ka
    return tuple(blocks)


def _pair_set(k: Sequence[int]) -> Tuple[Tuple[int, int], ...]:
    """S = {(i, j) : i <= k_a < j for some a}, 1-based rows."""
    if not k:
        return ()
    top = k[-1]
    pairs = set()
    for ka in k:
        for i in range(1, ka + 1):
            for j in range(ka + 1, top + 1):
                pairs.add((i, j))
    return tuple(sorted(pairs, key=lambda ij: (ij[1], ij[0])))


@dataclass(frozen=True)
class InflatedTriple:
    base: Triple
    k: Tuple[int, ...]
    p: Tuple[int, ...]
    q: Tuple[int, ...]
    S: Tuple[Tuple[int, int], ...] = field(default=())

    def as_triple(self) -> Triple:
        return Triple(self.k, self.p, self.q)


def inflate_triple(tau: Triple, has_sub: Optional[Callable[[int], bool]] = None) -> InflatedTriple:
    """Refine an essential triple until ``k' = (1, ..., k_t)``.

    At a gap ``k_i > k_{i-1} + 1`` the entry ``(k_i - 1, p_i - 1, q_i)`` is
    inserted when ``p_i > p_{i-1}``, otherwise ``(k_i - 1, p_i, q_i + 1)``.
    ``has_sub(m)`` reports whether the geometry carries a bundle ``E_m``; when
    it does not, the second kind of insertion is used instead, which needs
    only a further quotient of the ``F`` flag.
    """
    if not tau.is_essential():
        raise ValueError(f"inflate_triple needs an essential triple, got {tau}")
    k, p, q = list(tau.k), list(tau.p), list(tau.q)
    while True:
        gap = None
        for i in range(len(k)):
            prev_k = k[i - 1] if i else 0
            if k[i] > prev_k + 1:
                gap = i
                break
        if gap is None:
            break
        i = gap
        prev_p = p[i - 1] if i else 0
        use_p = p[i] > prev_p and (has_sub is None or has_sub(p[i] - 1))
        if use_p:
            entry = (k[i] - 1, p[i] - 1, q[i])
        else:
            if i and q[i - 1] < q[i] + 1:
                raise ValueError(f"cannot inflate {tau}: no intermediate bundle available")
            entry = (k[i] - 1, p[i], q[i] + 1)
        k.insert(i, entry[0])
        p.insert(i, entry[1])
        q.insert(i, entry[2])
    return InflatedTriple(tau, tuple(k), tuple(p), tuple(q), _pair_set(tau.k))


# ---------------------------------------------------------------------------
# geometries
# ---------------------------------------------------------------------------

class DegeneracyGeometry:
    """Ambient space with flags ``E_1 c E_2 c ...`` and ``... ->> F_2 ->> F_1``.

    Subclasses supply the ring, the tangent character and the characters of
    ``F_q - E_p``.
    """

    ring: AmbientRing

    @property
    def dimension(self) -> int:
        return self.ring.dimension

    def tangent(self) -> BundleCharacter:
        raise NotImplementedError

    def bundle_character(self, p_val: int, q_val: int) -> BundleCharacter:
        raise NotImplementedError

    def has_sub(self, p_val: int) -> bool:
        return True

    def is_empty(self, tau: Triple) -> bool:
        """True when the geometry forces ``W_tau`` to be empty."""
        return False

    def descriptor(self) -> dict:
        raise NotImplementedError

    @property
    def ty_x(self) -> GradedClass:
        cached = getattr(self, "_ty_x", None)
        if cached is None:
            cached = ty_of_smooth(self.tangent())
            self._ty_x = cached
        return cached

    @property
    def csm_x(self) -> GradedClass:
        cached = getattr(self, "_csm_x", None)
        if cached is None:
            cached = total_chern(self.tangent())
            self._csm_x = cached
        return cached

    def character(self, p_val: int, q_val: int) -> BundleCharacter:
        cache = self.__dict__.setdefault("_chars", {})
        key = (p_val, q_val)
        if key not in cache:
            cache[key] = self.bundle_character(p_val, q_val)
        return cache[key]


class ThetaGeometry(DegeneracyGeometry):
    """``Pic^d`` of a general curve: every ``F_q - E_p`` has total Chern class ``e^theta``."""

    def __init__(self, g: int):
        self.ring = ThetaRing(g)
        self.g = g

    def tangent(self) -> BundleCharacter:
        return BundleCharacter.trivial(self.ring, self.g)

    def bundle_character(self, p_val: int, q_val: int) -> BundleCharacter:
        return BundleCharacter(self.ring, q_val - p_val, [self.ring.theta(1)])

    def has_sub(self, p_val: int) -> bool:
        # only the single bundle E is available on Pic^d
        return p_val == 0

    def descriptor(self) -> dict:
        return {"kind": "theta", "g": self.g}


class GrassmannianGeometry(DegeneracyGeometry):
    """``Gr(k, C^n)`` with ``E_k = S`` the tautological subbundle and
    ``F_q = C^n / K_{n-q}`` for a fixed complete flag ``K``."""

    def __init__(self, k: int, n: int):
        self.ring = SchurRing(k, n)
        self.k = k
        self.n = n
        ring = self.ring
        cq = [ring.sigma((j,)) for j in range(ring.dimension + 1)]
        self.quotient = BundleCharacter.from_chern(ring, n - k, cq)
        self.sub = BundleCharacter.trivial(ring, n) - self.quotient

    def tangent(self) -> BundleCharacter:
        return tensor_character(self.sub.dual(), self.quotient)

    def has_sub(self, p_val: int) -> bool:
        return p_val in (0, self.k)

    def is_empty(self, tau: Triple) -> bool:
        # ker(S -> F_q) = S meet K_{n-q} has dimension at most n - q
        return any(k > self.n - q for k, q in zip(tau.k, tau.q))

    def bundle_character(self, p_val: int, q_val: int) -> BundleCharacter:
        if p_val not in (0, self.k):
            raise ValueError(f"Grassmannian geometry has no bundle E_{p_val}")
        if not 0 <= q_val <= self.n:
            raise ValueError(f"Grassmannian geometry has no quotient F_{q_val}")
        f = BundleCharacter.trivial(self.ring, q_val)
        return f - self.sub if p_val == self.k else f

    def descriptor(self) -> dict:
        return {"kind": "grassmannian", "k": self.k, "n": self.n}


class FreeGeometry(DegeneracyGeometry):
    """Universal geometry over a free Chern ring.

    ``E_p`` has Chern roots ``x1..xp`` and ``F_q`` has roots ``z1..zq``. The
    tangent bundle is trivial, or ``dimension`` copies of the line with first
    Chern class ``u`` when ``tangent_twist`` is set.
    """

    def __init__(self, dimension: int, e_rank: int, f_rank: int, tangent_twist: bool = False):
        gens = [f"x{i}" for i in range(1, e_rank + 1)] + [f"z{i}" for i in range(1, f_rank + 1)]
        if tangent_twist:
            gens.append("u")
        self.ring = free_ring(gens, dimension)
        self.e_rank = e_rank
        self.f_rank = f_rank
        self.tangent_twist = tangent_twist
        ring = self.ring
        self._x = [BundleCharacter.line(ring, ring.gen(f"x{i}")) for i in range(1, e_rank + 1)]
        self._z = [BundleCharacter.line(ring, ring.gen(f"z{i}")) for i in range(1, f_rank + 1)]

    def tangent(self) -> BundleCharacter:
        D = self.ring.dimension
        if not self.tangent_twist:
            return BundleCharacter.trivial(self.ring, D)
        u = BundleCharacter.line(self.ring, self.ring.gen("u"))
        return BundleCharacter(self.ring, D, [pj * D for pj in u.powers[1:]])

    def has_sub(self, p_val: int) -> bool:
        return 0 <= p_val <= self.e_rank

    def e_character(self, p_val: int) -> BundleCharacter:
        acc = BundleCharacter.trivial(self.ring, 0)
        for line in self._x[:p_val]:
            acc = acc + line
        return acc

    def f_character(self, q_val: int) -> BundleCharacter:
        acc = BundleCharacter.trivial(self.ring, 0)
        for line in self._z[:q_val]:
            acc = acc + line
        return acc

    def bundle_character(self, p_val: int, q_val: int) -> BundleCharacter:
        if not 0 <= p_val <= self.e_rank:
            raise ValueError(f"free geometry has no bundle E_{p_val}")
        if not 0 <= q_val <= self.f_rank:
            raise ValueError(f"free geometry has no quotient F_{q_val}")
        return self.f_character(q_val) - self.e_character(p_val)

    def descriptor(self) -> dict:
        return {
            "kind": "free",
            "dimension": self.ring.dimension,
            "e_rank": self.e_rank,
            "f_rank": self.f_rank,
            "tangent": "u" if self.tangent_twist else None,
        }


def geometry_from_descriptor(desc) -> DegeneracyGeometry:
    if isinstance(desc, str):
        desc = json.loads(desc)
    kind = desc.get("kind")
    if kind == "theta":
        return ThetaGeometry(int(desc["g"]))
    if kind == "grassmannian":
        return GrassmannianGeometry(int(desc["k"]), int(desc["n"]))
    if kind == "free":
        return FreeGeometry(int(desc["dimension"]), int(desc.get("e_rank", 0)),
                            int(desc.get("f_rank", 0)), bool(desc.get("tangent")))
    raise ValueError(f"unknown geometry kind {kind!r}")


# ---------------------------------------------------------------------------
# determinants and operators
# ---------------------------------------------------------------------------

def _determinant(entry: Callable[[int, int], GradedClass], size: int, ring: AmbientRing) -> GradedClass:
    """Laplace expansion along rows, memoized on the set of used columns."""
    memo: Dict[Tuple[int, int], GradedClass] = {}

    def minor(row: int, used: int) -> GradedClass:
        if row == size:
            return ring.one()
        key = (row, used)
        if key in memo:
            return memo[key]
        acc = ring.zero()
        sign_pos = 0
        for col in range(size):
            if used >> col & 1:
                continue
            a = entry(row, col)
            if not a.is_zero():
                rest = minor(row + 1, used | (1 << col))
                if not rest.is_zero():
                    term = a * rest
                    acc = acc - term if sign_pos % 2 else acc + term
            sign_pos += 1
        memo[key] = acc
        return acc

    return minor(0, 0)


FORMS = ("inflated", "theorem")


def _row_data(tau: Triple, geom: DegeneracyGeometry, form: str = "inflated"):
    """Reduced triple, partition, per-row characters and the pair set S.

    ``form="inflated"`` evaluates the full-flag formula on the inflated triple
    ``tau'``: row ``i`` carries ``F_{q'_i} - E_{p'_i}`` and S is every pair
    ``i < j``.  ``form="theorem"`` uses the block characters of the reduced
    triple and ``S = {(i, j) : i <= k_a < j}``.
    """
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}")
    red = reduce_triple(tau)
    lam = lambda_of(red)
    if form == "theorem" or not red.t:
        blocks = _row_blocks(red)
        chars = [geom.character(red.p[a], red.q[a]) for a in range(red.t)]
        return red, lam, [chars[b] for b in blocks], _pair_set(red.k)
    infl = inflate_triple(red, geom.has_sub)
    row_chars = [geom.character(pp, qq) for pp, qq in zip(infl.p, infl.q)]
    N = len(lam)
    pairs = tuple((i, j) for j in range(2, N + 1) for i in range(1, j))
    return red, lam, row_chars, pairs


def determinant_class(tau: Triple, geom: DegeneracyGeometry,
                      shifts: Optional[Sequence[int]] = None,
                      form: str = "inflated") -> GradedClass:
    """``|c_{lambda_i + j - i + e_i}(i)|``; both row conventions give ``[W_tau]``."""
    red, lam, row_chars, _ = _row_data(tau, geom, form)
    N = len(lam)
    e = tuple(shifts) if shifts is not None else (0,) * N
    return _determinant(lambda i, j: chern_class(row_chars[i], lam[i] + j - i + e[i]),
                        N, geom.ring)


def apply_operator(op: OperatorSeries, lam: Sequence[int],
                   row_chars: Sequence[BundleCharacter]) -> GradedClass:
    """Let each monomial ``a * R^e`` act on the determinant by shifting row
    indices; the ambient factor ``a`` is multiplied in and not raised."""
    ring = op.ring
    N = len(lam)
    result = ring.zero()
    for e, amb in op.by_exponent().items():
        det = _determinant(lambda i, j: chern_class(row_chars[i], lam[i] + j - i + e[i]),
                           N, ring)
        if not det.is_zero():
            result = result + amb * det
    return result


@lru_cache(maxsize=None)
def _inv_qy_difference(nvars: int, i: int, j: int, bound: int) -> Tuple:
    coeffs = inv_qy_coeffs(bound) if bound >= 1 else [YPolynomial.const(1)]
    terms: Dict = {}
    for m, a in enumerate(coeffs):
        if a.is_zero():
            continue
        for s in range(m + 1):
            e = [0] * nvars
            e[j] += s
            e[i] += m - s
            c = a * (comb(m, s) * (-1) ** (m - s))
            key = tuple(e)
            terms[key] = terms[key] + c if key in terms else c
    return tuple(terms.items())


def _scalar_series(ring, nvars, bound, items) -> OperatorSeries:
    u = ring.unit_label()
    return OperatorSeries(ring, nvars, bound, {(e, u): c for e, c in items})


def resolution_operator(tau: Triple, geom: DegeneracyGeometry,
                        form: str = "inflated") -> OperatorSeries:
    """Product of ``1/T_y(R_j - R_i)`` over S and ``1/T_y(R_i (x) (F(i) - E(i)))``."""
    red, lam, row_chars, pairs = _row_data(tau, geom, form)
    N = len(lam)
    ring = geom.ring
    bound = geom.dimension - sum(lam)
    op = OperatorSeries.one(ring, N, bound)
    for i, j in pairs:
        op = op * _scalar_series(ring, N, bound, _inv_qy_difference(N, i - 1, j - 1, bound))
    for i in range(N):
        op = op * ty_of_twisted(row_chars[i], bound, N, i, inverse=True)
    return op


def resolution_class(tau: Triple, geom: DegeneracyGeometry,
                     form: str = "inflated") -> GradedClass:
    """Push-forward of T_y of the resolution of ``W_tau``."""
    red, lam, row_chars, _ = _row_data(tau, geom, form)
    D = geom.dimension
    if sum(lam) > D:
        return geom.ring.zero()
    if not lam:
        return geom.ty_x
    op = resolution_operator(red, geom, form)
    return (apply_operator(op, lam, row_chars) * geom.ty_x).truncate(D)


def _binom_general(x: int, a: int) -> Fraction:
    num = Fraction(1)
    for i in range(a):
        num *= x - i
    return num / factorial(a)


def _one_plus_r_power(ring, nvars, index, exponent, bound) -> OperatorSeries:
    u = ring.unit_label()
    terms = {}
    for a in range(bound + 1):
        c = _binom_general(exponent, a)
        if c:
            e = [0] * nvars
            e[index] = a
            terms[(tuple(e), u)] = YPolynomial.const(c)
    return OperatorSeries(ring, nvars, bound, terms)


def csm_resolution_operator(tau: Triple, geom: DegeneracyGeometry,
                            form: str = "inflated") -> OperatorSeries:
    red, lam, row_chars, pairs = _row_data(tau, geom, form)
    N = len(lam)
    ring = geom.ring
    bound = geom.dimension - sum(lam)
    op = OperatorSeries.one(ring, N, bound)
    u = ring.unit_label()
    for i, j in pairs:
        # 1/(1 + R_j - R_i) = sum_m (R_i - R_j)^m
        terms = {}
        for m in range(bound + 1):
            for s in range(m + 1):
                e = [0] * N
                e[i - 1] += s
                e[j - 1] += m - s
                key = (tuple(e), u)
                c = YPolynomial.const(comb(m, s) * (-1) ** (m - s))
                terms[key] = terms[key] + c if key in terms else c
        op = op * OperatorSeries(ring, N, bound, terms)
    for i in range(N):
        v = row_chars[i]
        twisted = OperatorSeries(ring, N, bound, {})
        for jdeg in range(bound + 1):
            cj = chern_class(v, jdeg)
            if cj.is_zero():
                continue
            twisted = twisted + OperatorSeries.from_class(cj, N, bound) * \
                _one_plus_r_power(ring, N, i, -jdeg, bound)
        op = op * _one_plus_r_power(ring, N, i, -v.rank, bound) * twisted.invert()
    return op


def csm_resolution_class(tau: Triple, geom: DegeneracyGeometry,
                         form: str = "inflated") -> GradedClass:
    """CSM variant: the resolution class at ``y = -1`` via the Chern-class operator."""
    red, lam, row_chars, _ = _row_data(tau, geom, form)
    D = geom.dimension
    if sum(lam) > D:
        return geom.ring.zero()
    if not lam:
        return geom.csm_x
    op = csm_resolution_operator(red, geom, form)
    return (apply_operator(op, lam, row_chars) * geom.csm_x).truncate(D)


# ---------------------------------------------------------------------------
# strata
# ---------------------------------------------------------------------------

def _codim(k_plus: Sequence[int], p: Sequence[int], q: Sequence[int]) -> int:
    return sum(lambda_of(Triple(tuple(k_plus), tuple(p), tuple(q))))


def enumerate_strata(inflated, D: int) -> List[Tuple[int, ...]]:
    """Weakly increasing ``k+`` with ``i <= k+_i <= p'_i`` and codimension at most ``D``.

    Depth-first; a prefix is abandoned once its minimal completion is already
    too deep, which is valid because codimension grows with ``k+``.
    """
    if isinstance(inflated, InflatedTriple):
        p, q = inflated.p, inflated.q
    else:
        p, q = inflated.p, inflated.q
    N = len(p)
    out: List[Tuple[int, ...]] = []

    def completion(prefix: List[int]) -> List[int]:
        cur = list(prefix)
        last = cur[-1] if cur else 0
        for i in range(len(cur), N):
            last = max(last, i + 1)
            cur.append(last)
        return cur

    def feasible(full: List[int]) -> bool:
        return all(full[i] <= p[i] for i in range(N))

    def rec(prefix: List[int]):
        full = completion(prefix)
        if not feasible(full) or _codim(full, p, q) > D:
            return
        if len(prefix) == N:
            out.append(tuple(prefix))
            return
        i = len(prefix)
        lo = max(prefix[-1] if prefix else 0, i + 1)
        for v in range(lo, p[i] + 1):
            nxt = completion(prefix + [v])
            if not feasible(nxt):
                break
            if _codim(nxt, p, q) > D:
                break
            rec(prefix + [v])

    rec([])
    return out


def enumerate_strata_bruteforce(inflated, D: int) -> List[Tuple[int, ...]]:
    p, q = inflated.p, inflated.q
    N = len(p)
    out = []

    def rec(prefix):
        if len(prefix) == N:
            if _codim(prefix, p, q) <= D:
                out.append(tuple(prefix))
            return
        i = len(prefix)
        lo = max(prefix[-1] if prefix else 0, i + 1)
        for v in range(lo, p[i] + 1):
            rec(prefix + [v])

    rec([])
    return out


# ---------------------------------------------------------------------------
# motivic class by inclusion-exclusion
# ---------------------------------------------------------------------------

_MINUS_Y = YPolynomial((0, -1))


def _q_integer(m: int) -> YPolynomial:
    """``[m]_{-y} = 1 + (-y) + ... + (-y)^{m-1}``: chi_y of ``P^{m-1}``."""
    return YPolynomial.from_dict({e: (-1) ** e for e in range(m)})


@lru_cache(maxsize=None)
def fiber_chi_y(kernel_dims: Tuple[int, ...]) -> YPolynomial:
    """chi_y of the fiber of the resolution over a point whose nested kernels
    have dimensions ``kernel_dims``: flags ``V_i c K_i`` form an iterated
    projective bundle with fibers ``P(K_i / V_{i-1})``."""
    acc = YPolynomial.const(1)
    for i, m in enumerate(kernel_dims, 1):
        acc = acc * _q_integer(m - i + 1)
    return acc


def _is_stratum_index(seq: Sequence[int]) -> bool:
    return all(v >= i for i, v in enumerate(seq, 1)) and \
        all(a <= b for a, b in zip(seq, seq[1:]))


@lru_cache(maxsize=None)
def stratum_coefficient(k_plus: Tuple[int, ...]) -> YPolynomial:
    """Coefficient of ``T_y(W_{k+})`` in the push-forward of the resolution.

    Moebius inversion of ``fiber_chi_y`` over the lattice of weakly increasing
    sequences ``kappa >= (1, ..., N)``; every interval below ``k+`` that is
    Boolean is obtained by lowering a set of individually lowerable entries.
    Equals ``(-y)^{|k+| - |k'|}`` whenever no repeated entry can be lowered.
    """
    movable = [i for i in range(len(k_plus))
               if k_plus[i] - 1 >= i + 1 and (i == 0 or k_plus[i] - 1 >= k_plus[i - 1])]
    acc = YPolynomial()
    for mask in range(1 << len(movable)):
        seq = list(k_plus)
        bits = 0
        for b, i in enumerate(movable):
            if mask >> b & 1:
                seq[i] -= 1
                bits += 1
        term = fiber_chi_y(tuple(seq))
        acc = acc - term if bits % 2 else acc + term
    return acc


def stratum_coefficient_recursive(k_plus: Tuple[int, ...]) -> YPolynomial:
    """``chi_y(fiber) - sum_{kappa < k+} d_kappa`` evaluated literally."""
    memo: Dict[Tuple[int, ...], YPolynomial] = {}

    def below(top):
        def rec(i, prev, acc):
            if i == len(top):
                yield tuple(acc)
                return
            for v in range(max(prev, i + 1), top[i] + 1):
                acc.append(v)
                yield from rec(i + 1, v, acc)
                acc.pop()
        yield from rec(0, 0, [])

    def d(kp):
        if kp not in memo:
            val = fiber_chi_y(kp)
            for kappa in below(kp):
                if kappa != kp:
                    val = val - d(kappa)
            memo[kp] = val
        return memo[kp]

    if not _is_stratum_index(k_plus):
        raise ValueError("k+ must be weakly increasing with k+_i >= i")
    return d(tuple(k_plus))


class MotivicSolver:
    """Memoized triangular solve for ``iota_* T_y(W_tau)``.

    ``path="ty"`` uses the full motivic formula; ``path="csm"`` uses the
    Chern-class fast path, giving the CSM class (the ``y = -1`` value).
    """

    def __init__(self, geom: DegeneracyGeometry, path: str = "ty", form: str = "inflated"):
        if path not in ("ty", "csm"):
            raise ValueError("path must be 'ty' or 'csm'")
        if form not in FORMS:
            raise ValueError(f"form must be one of {FORMS}")
        self.geom = geom
        self.path = path
        self.form = form
        self.memo: Dict[Triple, GradedClass] = {}
        self.resolution_memo: Dict[Triple, GradedClass] = {}

    def _coefficient(self, k_plus: Tuple[int, ...]) -> YPolynomial:
        d = stratum_coefficient(tuple(k_plus))
        if self.path == "csm":
            return YPolynomial.const(d(-1))
        return d

    def resolution(self, tau: Triple) -> GradedClass:
        red = reduce_triple(tau)
        if red not in self.resolution_memo:
            fn = resolution_class if self.path == "ty" else csm_resolution_class
            self.resolution_memo[red] = fn(red, self.geom, self.form)
        return self.resolution_memo[red]

    def strata(self, tau: Triple):
        """``[(k+, coefficient, reduced stratum triple)]`` including ``k+ = k'``."""
        red = reduce_triple(tau)
        if not red.t:
            return [((), YPolynomial.const(1), red)]
        infl = inflate_triple(red, self.geom.has_sub)
        out = []
        for kp in enumerate_strata(infl, self.geom.dimension):
            sub = reduce_triple(Triple(kp, infl.p, infl.q))
            out.append((kp, self._coefficient(kp), sub))
        return out

    def solve(self, tau: Triple) -> GradedClass:
        red = reduce_triple(tau)
        if red in self.memo:
            return self.memo[red]
        lam = lambda_of(red)
        D = self.geom.dimension
        if sum(lam) > D or self.geom.is_empty(red):
            result = self.geom.ring.zero()
        else:
            result = self.resolution(red)
            infl_k = tuple(range(1, len(lam) + 1))
            for kp, coeff, sub in self.strata(red):
                if kp == infl_k:
                    continue
                if sum(lambda_of(sub)) <= sum(lam):
                    raise AssertionError(f"stratum {kp} of {red} is not deeper")
                result = result - self.solve(sub) * coeff
        self.memo[red] = result
        return result


def motivic_class(tau: Triple, geom: DegeneracyGeometry, path: str = "ty",
                  solver: Optional[MotivicSolver] = None, form: str = "inflated") -> GradedClass:
    """``iota_* T_y(W_tau)`` (or its CSM value when ``path="csm"``)."""
    solver = solver or MotivicSolver(geom, path, form)
    return solver.solve(tau)


def chi_y(c: GradedClass) -> YPolynomial:
    """Degree of the top-dimensional part: chi_y of the class' support."""
    if not c.ring.complete:
        raise TypeError(f"{c.ring.kind} ring has no top-degree pairing")
    return c.integrate()


def schubert_locus(mu: Sequence[int], k: int, n: int) -> Tuple[Triple, GrassmannianGeometry]:
    """Schubert variety ``S_mu`` in ``Gr(k, C^n)`` as a degeneracy locus of ``S -> C^n/K``."""
    mu = tuple(int(x) for x in mu if int(x) > 0)
    if any(a < b for a, b in zip(mu, mu[1:])):
        raise ValueError("shape must be weakly decreasing")
    if len(mu) > k or (mu and mu[0] > n - k):
        raise ValueError(f"shape {list(mu)} is not inside the {k}x{n - k} rectangle")
    geom = GrassmannianGeometry(k, n)
    t = len(mu)
    tau = Triple(tuple(range(1, t + 1)), (k,) * t, tuple(k - i + mu[i - 1] for i in range(1, t + 1)))
    return tau, geom
