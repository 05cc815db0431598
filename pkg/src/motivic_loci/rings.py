"""Graded ambient rings, classes with y-polynomial coefficients, and virtual
bundle characters.

Three rings are provided:

* :class:`ThetaRing` -- ``Q[theta]/(theta^{g+1})`` with ``int theta^g = g!``,
  the part of the cohomology of a Jacobian generated by the theta divisor;
* :class:`SchurRing` -- cohomology of ``Gr(k, C^n)`` in the Schubert basis,
  multiplied with Littlewood-Richardson coefficients;
* :class:`FreeChernRing` -- a free polynomial ring on graded generators,
  truncated above a fixed degree (no pairing).

Bundles are handled through :class:`BundleCharacter`, a rank together with
the power sums of the Chern roots, so virtual bundles of negative rank need
no special treatment.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .exactalg import (
    YPolynomial,
    chern_from_powersums,
    format_rational,
    log_qy_coeffs,
    powersums_from_chern,
)

__all__ = [
    "AmbientRing",
    "ThetaRing",
    "SchurRing",
    "FreeChernRing",
    "GradedClass",
    "BundleCharacter",
    "OperatorSeries",
    "theta_ring",
    "schur_ring",
    "free_ring",
    "ring_from_descriptor",
    "lr_coefficients",
    "lr_multiply",
    "chern_class",
    "total_chern",
    "tensor_character",
    "ty_of_twisted",
    "ty_of_smooth",
    "class_from_json",
]

_ZERO = YPolynomial()
_ONE = YPolynomial.const(1)


# ---------------------------------------------------------------------------
# rings
# ---------------------------------------------------------------------------

class AmbientRing:
    """Interface shared by the graded rings.

    Basis labels are hashable; :meth:`mul_basis` returns the product of two
    labels as a dict ``label -> int`` with terms above the dimension removed.
    """

    kind = "abstract"
    dimension: int = 0
    complete = False

    def degree(self, label) -> int:
        raise NotImplementedError

    def unit_label(self):
        raise NotImplementedError

    def mul_basis(self, a, b) -> Dict:
        raise NotImplementedError

    def integrate_label(self, label) -> Fraction:
        raise TypeError(f"{self.kind} ring has no top-degree pairing")

    def label_to_str(self, label) -> str:
        raise NotImplementedError

    def label_from_str(self, text: str):
        raise NotImplementedError

    def label_text(self, label) -> str:
        return self.label_to_str(label)

    def sort_key(self, label):
        return (self.degree(label), label)

    def descriptor(self) -> dict:
        raise NotImplementedError

    # convenience constructors
    def zero(self) -> "GradedClass":
        return GradedClass(self, {})

    def one(self) -> "GradedClass":
        return GradedClass(self, {self.unit_label(): _ONE})

    def basis(self, label, coeff=1) -> "GradedClass":
        return GradedClass(self, {label: coeff})

    def __eq__(self, other):
        return isinstance(other, AmbientRing) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(repr(sorted(self.descriptor().items())))

    def __repr__(self):
        return f"{type(self).__name__}({self.descriptor()})"


class ThetaRing(AmbientRing):
    """``Q[theta]/(theta^{g+1})``; labels are the exponents ``0..g``."""

    kind = "theta"
    complete = True

    def __init__(self, g: int):
        if g < 0:
            raise ValueError("genus must be >= 0")
        self.g = g
        self.dimension = g

    def degree(self, label: int) -> int:
        return label

    def unit_label(self):
        return 0

    def mul_basis(self, a: int, b: int) -> Dict:
        s = a + b
        return {s: 1} if s <= self.g else {}

    def integrate_label(self, label: int) -> Fraction:
        return Fraction(factorial(self.g)) if label == self.g else Fraction(0)

    def label_to_str(self, label: int) -> str:
        return f"theta^{label}"

    def label_text(self, label: int) -> str:
        if label == 0:
            return "1"
        return "theta" if label == 1 else f"theta^{label}"

    def label_from_str(self, text: str) -> int:
        text = text.strip()
        if text == "1":
            return 0
        if not text.startswith("theta"):
            raise ValueError(f"bad theta basis label {text!r}")
        rest = text[len("theta"):]
        e = 1 if rest == "" else int(rest.lstrip("^"))
        if not 0 <= e <= self.g:
            raise ValueError(f"theta exponent {e} outside 0..{self.g}")
        return e

    def theta(self, power: int = 1) -> "GradedClass":
        if power > self.g:
            return self.zero()
        return self.basis(power)

    def descriptor(self) -> dict:
        return {"kind": "theta", "g": self.g}


def _conjugate(part: Sequence[int]) -> Tuple[int, ...]:
    if not part:
        return ()
    return tuple(sum(1 for x in part if x > j) for j in range(part[0]))


def _horizontal_strips(shape: Tuple[int, ...], size: int, rows: int, cols: int):
    """Yield shapes obtained from ``shape`` by adding a horizontal strip of
    ``size`` boxes, staying inside ``rows`` x ``cols``.

    Each result is ``(new_shape, added)`` with ``added[r]`` boxes in row r.
    """
    base = list(shape) + [0] * (rows - len(shape))

    def rec(r, left, cur):
        if r == rows:
            if left == 0:
                yield cur
            return
        upper = cols if r == 0 else base[r - 1]
        most = min(left, upper - base[r])
        for a in range(most, -1, -1):
            yield from rec(r + 1, left - a, cur + [a])

    for added in rec(0, size, []):
        new = tuple(b + a for b, a in zip(base, added))
        yield tuple(x for x in new if x > 0), added


@lru_cache(maxsize=None)
def lr_coefficients(mu: Tuple[int, ...], nu: Tuple[int, ...],
                    rows: int, cols: int) -> Dict[Tuple[int, ...], int]:
    """Littlewood-Richardson expansion of ``s_mu * s_nu`` inside ``rows x cols``.

    Letters ``1, 2, ...`` are added as horizontal strips of sizes ``nu_1,
    nu_2, ...``; a filling counts when its reverse reading word is a lattice
    word.
    """
    mu = tuple(x for x in mu if x > 0)
    nu = tuple(x for x in nu if x > 0)
    out: Dict[Tuple[int, ...], int] = {}
    if len(mu) > rows or (mu and mu[0] > cols):
        return out
    if len(nu) > rows or (nu and nu[0] > cols):
        return out

    def lattice_ok(filling: List[List[int]]) -> bool:
        counts = [0] * (len(nu) + 2)
        for row in filling:
            for letter in reversed(row):
                counts[letter] += 1
                if letter > 1 and counts[letter] > counts[letter - 1]:
                    return False
        return True

    def rec(i: int, shape: Tuple[int, ...], filling: List[List[int]]):
        if i == len(nu):
            if lattice_ok(filling):
                out[shape] = out.get(shape, 0) + 1
            return
        letter = i + 1
        for new, added in _horizontal_strips(shape, nu[i], rows, cols):
            # letter i+1 may not appear above row i (lattice condition)
            if any(added[r] for r in range(min(i, rows))):
                continue
            fill = [list(row) for row in filling]
            fill += [[] for _ in range(rows - len(fill))]
            for r, a in enumerate(added):
                fill[r].extend([letter] * a)
            rec(i + 1, new, fill)

    rec(0, mu, [[] for _ in range(rows)])
    return out


class SchurRing(AmbientRing):
    """Cohomology of ``Gr(k, C^n)``; labels are partitions in the ``k x (n-k)`` box."""

    kind = "grassmannian"
    complete = True

    def __init__(self, k: int, n: int):
        if not 0 < k < n:
            raise ValueError("Grassmannian needs 0 < k < n")
        self.k = k
        self.n = n
        self.cols = n - k
        self.dimension = k * (n - k)

    def degree(self, label: Tuple[int, ...]) -> int:
        return sum(label)

    def unit_label(self):
        return ()

    def contains(self, part: Sequence[int]) -> bool:
        part = tuple(x for x in part if x > 0)
        return len(part) <= self.k and (not part or part[0] <= self.cols)

    def mul_basis(self, a, b) -> Dict:
        if len(a) < len(b):
            a, b = b, a
        return dict(lr_coefficients(a, b, self.k, self.cols))

    def integrate_label(self, label) -> Fraction:
        return Fraction(1) if label == (self.cols,) * self.k else Fraction(0)

    def sort_key(self, label):
        # degree ascending, then reverse lexicographic: [3,1] before [2,2]
        return (sum(label), tuple(-x for x in label))

    def label_to_str(self, label) -> str:
        return "schur:[" + ",".join(str(x) for x in label) + "]"

    def label_text(self, label) -> str:
        return "[" + ",".join(str(x) for x in label) + "]"

    def label_from_str(self, text: str):
        text = text.strip()
        if text.startswith("schur:"):
            text = text[len("schur:"):]
        inner = text.strip().lstrip("[").rstrip("]").strip()
        part = tuple(int(x) for x in inner.split(",") if x.strip()) if inner else ()
        part = tuple(x for x in part if x > 0)
        if list(part) != sorted(part, reverse=True) or not self.contains(part):
            raise ValueError(f"partition {part} is not inside the {self.k}x{self.cols} box")
        return part

    def partitions(self, max_degree: Optional[int] = None) -> List[Tuple[int, ...]]:
        out = []

        def rec(prefix, bound):
            out.append(tuple(prefix))
            if len(prefix) == self.k:
                return
            for x in range(1, bound + 1):
                rec(prefix + [x], x)

        rec([], self.cols)
        if max_degree is not None:
            out = [p for p in out if sum(p) <= max_degree]
        return sorted(out, key=self.sort_key)

    def sigma(self, part: Sequence[int]) -> "GradedClass":
        part = tuple(x for x in part if x > 0)
        if not self.contains(part):
            return self.zero()
        return self.basis(part)

    def descriptor(self) -> dict:
        return {"kind": "grassmannian", "k": self.k, "n": self.n}


class FreeChernRing(AmbientRing):
    """Free commutative ring on graded generators, truncated above ``dimension``.

    Labels are exponent tuples aligned with ``generators``.
    """

    kind = "free"
    complete = False

    def __init__(self, generators: Sequence[Tuple[str, int]], dimension: int):
        gens = [(str(name), int(deg)) for name, deg in generators]
        names = [g[0] for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        if any(d <= 0 for _, d in gens):
            raise ValueError("generator degrees must be positive")
        if dimension < 0:
            raise ValueError("dimension must be >= 0")
        self.generators = tuple(gens)
        self.names = tuple(names)
        self.degrees = tuple(d for _, d in gens)
        self.dimension = dimension
        self._index = {name: i for i, name in enumerate(names)}

    def degree(self, label) -> int:
        return sum(e * d for e, d in zip(label, self.degrees))

    def unit_label(self):
        return (0,) * len(self.generators)

    def mul_basis(self, a, b) -> Dict:
        s = tuple(x + y for x, y in zip(a, b))
        return {s: 1} if self.degree(s) <= self.dimension else {}

    def sort_key(self, label):
        return (self.degree(label), tuple(-e for e in label))

    def label_to_str(self, label) -> str:
        parts = []
        for name, e in zip(self.names, label):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def label_from_str(self, text: str):
        text = text.strip()
        exps = [0] * len(self.names)
        if text != "1":
            for factor in text.split("*"):
                name, _, e = factor.strip().partition("^")
                if name not in self._index:
                    raise ValueError(f"unknown generator {name!r}")
                exps[self._index[name]] += int(e) if e else 1
        label = tuple(exps)
        if self.degree(label) > self.dimension:
            raise ValueError(f"monomial {text!r} exceeds the ring dimension")
        return label

    def gen(self, name: str) -> "GradedClass":
        exps = [0] * len(self.names)
        exps[self._index[name]] = 1
        label = tuple(exps)
        if self.degree(label) > self.dimension:
            return self.zero()
        return self.basis(label)

    def descriptor(self) -> dict:
        return {
            "kind": "free",
            "dimension": self.dimension,
            "generators": [[n, d] for n, d in self.generators],
        }


def theta_ring(g: int) -> ThetaRing:
    return ThetaRing(g)


def schur_ring(k: int, n: int) -> SchurRing:
    return SchurRing(k, n)


def free_ring(generators, dimension: int) -> FreeChernRing:
    """``generators`` is a sequence of ``(name, degree)`` pairs or bare names
    (degree 1)."""
    gens = [(g, 1) if isinstance(g, str) else tuple(g) for g in generators]
    return FreeChernRing(gens, dimension)


def ring_from_descriptor(desc: dict) -> AmbientRing:
    kind = desc.get("kind")
    if kind == "theta":
        return ThetaRing(int(desc["g"]))
    if kind == "grassmannian":
        return SchurRing(int(desc["k"]), int(desc["n"]))
    if kind == "free":
        return free_ring(desc["generators"], int(desc["dimension"]))
    raise ValueError(f"unknown ring kind {kind!r}")


# ---------------------------------------------------------------------------
# classes
# ---------------------------------------------------------------------------

def _as_ypoly(c) -> YPolynomial:
    if isinstance(c, YPolynomial):
        return c
    return YPolynomial.const(c)


class GradedClass:
    """Finite combination of basis labels with :class:`YPolynomial` coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: AmbientRing, terms: Dict):
        self.ring = ring
        clean = {}
        for label, c in terms.items():
            c = _as_ypoly(c)
            if c.is_zero():
                continue
            if ring.degree(label) > ring.dimension:
                continue
            clean[label] = c
        self.terms = clean

    # -- structure ------------------------------------------------------
    def _check(self, other: "GradedClass"):
        if other.ring is not self.ring and other.ring != self.ring:
            raise ValueError("classes live in different rings")

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, label) -> YPolynomial:
        return self.terms.get(label, _ZERO)

    def degree_part(self, d: int) -> "GradedClass":
        return GradedClass(self.ring, {l: c for l, c in self.terms.items()
                                       if self.ring.degree(l) == d})

    def truncate(self, d: int) -> "GradedClass":
        return GradedClass(self.ring, {l: c for l, c in self.terms.items()
                                       if self.ring.degree(l) <= d})

    def max_degree(self) -> int:
        return max((self.ring.degree(l) for l in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((self.ring.degree(l) for l in self.terms), default=10 ** 9)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: self.ring.sort_key(kv[0]))

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction, YPolynomial)):
            other = self.ring.one() * other
        if not isinstance(other, GradedClass):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for l, c in other.terms.items():
            out[l] = out[l] + c if l in out else c
        return GradedClass(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedClass(self.ring, {l: -c for l, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, YPolynomial)):
            other = self.ring.one() * other
        if not isinstance(other, GradedClass):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, YPolynomial)):
            if isinstance(other, YPolynomial) and other.is_zero():
                return GradedClass(self.ring, {})
            return GradedClass(self.ring, {l: c * other for l, c in self.terms.items()})
        if not isinstance(other, GradedClass):
            return NotImplemented
        self._check(other)
        ring = self.ring
        out: Dict = {}
        budget = ring.dimension
        for la, ca in self.terms.items():
            da = ring.degree(la)
            for lb, cb in other.terms.items():
                if da + ring.degree(lb) > budget:
                    continue
                prod = ca * cb
                for l, m in ring.mul_basis(la, lb).items():
                    term = prod * m if m != 1 else prod
                    out[l] = out[l] + term if l in out else term
        return GradedClass(ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = self.ring.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, YPolynomial)):
            other = self.ring.one() * other
        if not isinstance(other, GradedClass):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- evaluation -----------------------------------------------------
    def evaluate_y(self, y0) -> "GradedClass":
        return GradedClass(self.ring, {l: YPolynomial.const(c(y0))
                                       for l, c in self.terms.items()})

    def integrate(self) -> YPolynomial:
        acc = _ZERO
        for l, c in self.terms.items():
            w = self.ring.integrate_label(l)
            if w:
                acc = acc + c * w
        return acc

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        return {
            "ring": self.ring.descriptor(),
            "terms": [
                {"basis": self.ring.label_to_str(l), "coeff": c.to_json()}
                for l, c in self.sorted_terms()
            ],
        }

    def format(self) -> str:
        """Human readable form, e.g. ``1·[2,1] + 3·[3,1]``."""
        if not self.terms:
            return "0"
        pieces: List[Tuple[str, str]] = []
        for l, c in self.sorted_terms():
            basis = self.ring.label_text(l)
            if c.is_constant():
                a = c.constant_term()
                sign = "-" if a < 0 else "+"
                pieces.append((sign, f"{format_rational(abs(a))}·{basis}"))
            else:
                pieces.append(("+", f"({c.format()})·{basis}"))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"GradedClass({self.ring.kind}: {self.format()})"


def class_from_json(data: dict) -> GradedClass:
    ring = ring_from_descriptor(data["ring"])
    terms: Dict = {}
    for t in data["terms"]:
        label = ring.label_from_str(t["basis"])
        c = YPolynomial.from_json(t["coeff"])
        terms[label] = terms[label] + c if label in terms else c
    return GradedClass(ring, terms)


def lr_multiply(a: GradedClass, b: GradedClass) -> GradedClass:
    if not isinstance(a.ring, SchurRing) or a.ring != b.ring:
        raise ValueError("lr_multiply needs two classes in the same Schur ring")
    return a * b


# ---------------------------------------------------------------------------
# bundle characters
# ---------------------------------------------------------------------------

class BundleCharacter:
    """Virtual bundle as ``rank`` plus power sums ``p_1..p_D`` of its Chern roots.

    ``powers[j]`` is the homogeneous degree-j class ``p_j``; ``powers[0]`` is
    ``rank`` times the unit.
    """

    __slots__ = ("ring", "rank", "powers", "_chern")

    def __init__(self, ring: AmbientRing, rank: int, powers: Sequence[GradedClass]):
        D = ring.dimension
        ps = [ring.one() * rank]
        for j in range(1, D + 1):
            pj = powers[j - 1] if j - 1 < len(powers) else ring.zero()
            ps.append(pj.degree_part(j))
        self.ring = ring
        self.rank = int(rank)
        self.powers = tuple(ps)
        self._chern = None

    @classmethod
    def trivial(cls, ring: AmbientRing, rank: int) -> "BundleCharacter":
        return cls(ring, rank, [])

    @classmethod
    def line(cls, ring: AmbientRing, c1: GradedClass) -> "BundleCharacter":
        return cls(ring, 1, [c1 ** j for j in range(1, ring.dimension + 1)])

    @classmethod
    def from_chern(cls, ring: AmbientRing, rank: int, chern: Sequence[GradedClass]) -> "BundleCharacter":
        """``chern[j]`` is c_j; ``chern[0]`` is ignored."""
        D = ring.dimension
        c = [ring.one()] + [chern[j] if j < len(chern) else ring.zero() for j in range(1, D + 1)]
        p = powersums_from_chern(c, ring.one() * rank, D)
        return cls(ring, rank, p[1:])

    def p(self, j: int) -> GradedClass:
        if j == 0:
            return self.powers[0]
        if j < 0 or j > self.ring.dimension:
            return self.ring.zero()
        return self.powers[j]

    def __add__(self, other: "BundleCharacter") -> "BundleCharacter":
        return BundleCharacter(self.ring, self.rank + other.rank,
                               [a + b for a, b in zip(self.powers[1:], other.powers[1:])])

    def __neg__(self):
        return BundleCharacter(self.ring, -self.rank, [-a for a in self.powers[1:]])

    def __sub__(self, other: "BundleCharacter") -> "BundleCharacter":
        return self + (-other)

    def dual(self) -> "BundleCharacter":
        return BundleCharacter(self.ring, self.rank,
                               [a if j % 2 == 0 else -a for j, a in enumerate(self.powers[1:], 1)])

    def __eq__(self, other):
        return (isinstance(other, BundleCharacter) and self.rank == other.rank
                and self.powers == other.powers)

    def __hash__(self):
        return hash((self.rank, self.powers))

    def total_chern(self) -> List[GradedClass]:
        if self._chern is None:
            D = self.ring.dimension
            self._chern = chern_from_powersums(list(self.powers), D, self.ring.one())
        return self._chern

    def __repr__(self):
        return f"BundleCharacter(rank={self.rank}, p1={self.powers[1] if len(self.powers) > 1 else 0})"


def chern_class(v: BundleCharacter, j: int) -> GradedClass:
    """Degree-j Chern class of a (virtual) character; zero for j < 0 or j > D."""
    if j < 0 or j > v.ring.dimension:
        return v.ring.zero()
    return v.total_chern()[j]


def total_chern(v: BundleCharacter) -> GradedClass:
    acc = v.ring.zero()
    for c in v.total_chern():
        acc = acc + c
    return acc


def tensor_character(a: BundleCharacter, b: BundleCharacter) -> BundleCharacter:
    """p_n(a (x) b) = sum_m C(n,m) p_m(a) p_{n-m}(b)."""
    ring = a.ring
    D = ring.dimension
    powers = []
    for n in range(1, D + 1):
        acc = ring.zero()
        for m in range(n + 1):
            pa, pb = a.p(m), b.p(n - m)
            if pa.is_zero() or pb.is_zero():
                continue
            acc = acc + (pa * pb) * comb(n, m)
        powers.append(acc)
    return BundleCharacter(ring, a.rank * b.rank, powers)


# ---------------------------------------------------------------------------
# operator series in raising variables
# ---------------------------------------------------------------------------

class OperatorSeries:
    """Truncated series in variables ``R_1..R_T`` with ambient-class coefficients.

    Stored flat as ``{(e, label): YPolynomial}`` where ``e`` is an exponent
    tuple of length ``nvars``; a term survives only if
    ``sum(e) + deg(label) <= bound``.
    """

    __slots__ = ("ring", "nvars", "bound", "terms")

    def __init__(self, ring: AmbientRing, nvars: int, bound: int, terms: Optional[Dict] = None):
        self.ring = ring
        self.nvars = nvars
        self.bound = bound
        clean = {}
        for (e, l), c in (terms or {}).items():
            if c.is_zero():
                continue
            if sum(e) + ring.degree(l) > bound:
                continue
            clean[(e, l)] = c
        self.terms = clean

    @classmethod
    def one(cls, ring, nvars, bound) -> "OperatorSeries":
        return cls(ring, nvars, bound, {((0,) * nvars, ring.unit_label()): _ONE})

    @classmethod
    def from_class(cls, cls_: GradedClass, nvars: int, bound: int, exps=None) -> "OperatorSeries":
        e = tuple(exps) if exps is not None else (0,) * nvars
        return cls(cls_.ring, nvars, bound, {(e, l): c for l, c in cls_.terms.items()})

    @classmethod
    def monomial(cls, ring, nvars, bound, exps, coeff=1) -> "OperatorSeries":
        return cls(ring, nvars, bound, {(tuple(exps), ring.unit_label()): _as_ypoly(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> YPolynomial:
        return self.terms.get(((0,) * self.nvars, self.ring.unit_label()), _ZERO)

    def __add__(self, other: "OperatorSeries") -> "OperatorSeries":
        bound = min(self.bound, other.bound)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return OperatorSeries(self.ring, self.nvars, bound, out)

    def __neg__(self):
        return OperatorSeries(self.ring, self.nvars, self.bound,
                              {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "OperatorSeries":
        return OperatorSeries(self.ring, self.nvars, self.bound,
                              {k: c * s for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, YPolynomial)):
            return self.scale(other)
        if not isinstance(other, OperatorSeries):
            return NotImplemented
        ring = self.ring
        bound = min(self.bound, other.bound)
        out: Dict = {}
        deg = ring.degree
        unit = ring.unit_label()
        right = [(eb, lb, cb, sum(eb) + deg(lb)) for (eb, lb), cb in other.terms.items()]
        for (ea, la), ca in self.terms.items():
            da = sum(ea) + deg(la)
            for eb, lb, cb, db in right:
                if da + db > bound:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                prod = ca * cb
                if lb == unit or la == unit:
                    key = (e, la if lb == unit else lb)
                    out[key] = out[key] + prod if key in out else prod
                    continue
                for l, m in ring.mul_basis(la, lb).items():
                    key = (e, l)
                    term = prod * m if m != 1 else prod
                    out[key] = out[key] + term if key in out else term
        return OperatorSeries(ring, self.nvars, bound, out)

    __rmul__ = __mul__

    def embed(self, nvars: int, index: int) -> "OperatorSeries":
        """Move a one-variable series to variable ``index`` among ``nvars``."""
        if self.nvars != 1:
            raise ValueError("embed needs a one-variable series")
        out = {}
        for (e, l), c in self.terms.items():
            new = [0] * nvars
            new[index] = e[0]
            out[(tuple(new), l)] = c
        return OperatorSeries(self.ring, nvars, self.bound, out)

    def truncate(self, bound: int) -> "OperatorSeries":
        return OperatorSeries(self.ring, self.nvars, min(bound, self.bound), self.terms)

    def evaluate_y(self, y0) -> "OperatorSeries":
        return OperatorSeries(self.ring, self.nvars, self.bound,
                              {k: YPolynomial.const(c(y0)) for k, c in self.terms.items()})

    def _nilpotent_part(self) -> "OperatorSeries":
        key0 = ((0,) * self.nvars, self.ring.unit_label())
        return OperatorSeries(self.ring, self.nvars, self.bound,
                              {k: c for k, c in self.terms.items() if k != key0})

    def exp(self) -> "OperatorSeries":
        """exp of a series with zero constant term."""
        if not self.constant_term().is_zero():
            raise ValueError("exp needs zero constant term")
        result = OperatorSeries.one(self.ring, self.nvars, self.bound)
        power = OperatorSeries.one(self.ring, self.nvars, self.bound)
        for n in range(1, self.bound + 1):
            power = power * self
            if power.is_zero():
                break
            result = result + power.scale(Fraction(1, factorial(n)))
        return result

    def invert(self) -> "OperatorSeries":
        """Inverse of a series with constant term 1."""
        if self.constant_term() != _ONE:
            raise ValueError("invert needs constant term 1")
        x = self._nilpotent_part()
        result = OperatorSeries.one(self.ring, self.nvars, self.bound)
        power = OperatorSeries.one(self.ring, self.nvars, self.bound)
        for n in range(1, self.bound + 1):
            power = power * x
            if power.is_zero():
                break
            result = result + (power if n % 2 == 0 else -power)
        return result

    def by_exponent(self) -> Dict[Tuple[int, ...], GradedClass]:
        """Group terms as ``{e: ambient class}``."""
        groups: Dict = {}
        for (e, l), c in self.terms.items():
            groups.setdefault(e, {})[l] = c
        return {e: GradedClass(self.ring, t) for e, t in groups.items()}

    def __eq__(self, other):
        return (isinstance(other, OperatorSeries) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __repr__(self):
        return f"OperatorSeries(nvars={self.nvars}, bound={self.bound}, terms={len(self.terms)})"


def _embed(exps_len: int, index: Optional[int], power: int) -> Tuple[int, ...]:
    e = [0] * exps_len
    if index is not None:
        e[index] = power
    return tuple(e)


def ty_of_twisted(v: BundleCharacter, order: int, nvars: int = 1,
                  index: Optional[int] = 0, inverse: bool = False) -> OperatorSeries:
    """T_y(R (x) v) = exp(sum_m g_m sum_j C(m,j) R^{m-j} p_j(v)) truncated at ``order``.

    ``R`` is variable ``index`` among ``nvars``; with ``index=None`` the twist
    is absent and the result is T_y(v) itself.  ``inverse=True`` negates the
    logarithm and so returns ``1/T_y``.
    """
    ring = v.ring
    if order < 0:
        raise ValueError("order must be >= 0")
    if index is None and nvars == 1:
        nvars = 0
    if index is not None and nvars > 1:
        # only one variable is involved; build it there and embed
        return ty_of_twisted(v, order, 1, 0, inverse).embed(nvars, index)
    log_terms = OperatorSeries(ring, nvars, order, {})
    if order >= 1:
        g = log_qy_coeffs(order)
        acc: Dict = {}
        for m in range(1, order + 1):
            gm = g[m - 1]
            for j in range(m + 1):
                rpow = m - j
                if index is None and rpow > 0:
                    continue
                pj = v.p(j)
                if pj.is_zero():
                    continue
                scale = gm * comb(m, j)
                if inverse:
                    scale = -scale
                e = _embed(nvars, index, rpow)
                for l, c in pj.terms.items():
                    key = (e, l)
                    term = c * scale
                    acc[key] = acc[key] + term if key in acc else term
        log_terms = OperatorSeries(ring, nvars, order, acc)
    return log_terms.exp()


def ty_of_smooth(tangent: BundleCharacter) -> GradedClass:
    """T_y(X) for a smooth ``X`` with the given tangent character."""
    ring = tangent.ring
    series = ty_of_twisted(tangent, ring.dimension, nvars=0, index=None)
    return GradedClass(ring, {l: c for (e, l), c in series.terms.items()})
