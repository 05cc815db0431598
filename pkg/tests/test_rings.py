from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations
from math import comb, factorial

import pytest

from motivic_loci.exactalg import UniSeries, YPolynomial, inv_qy_coeffs, qy_series
from motivic_loci.omega import gaussian_binomial
from motivic_loci.rings import (
    BundleCharacter,
    GradedClass,
    chern_class,
    class_from_json,
    free_ring,
    lr_multiply,
    schur_ring,
    tensor_character,
    theta_ring,
    total_chern,
    ty_of_smooth,
    ty_of_twisted,
)

Y = YPolynomial((0, 1))
MINUS_Y = YPolynomial((0, -1))


# -- independent Pieri / Giambelli oracle -------------------------------------

def pieri_oracle(shape, j, k, cols):
    """Shapes obtained by adding ``j`` boxes, no two in one column."""
    base = list(shape) + [0] * (k - len(shape))
    out = []

    def rec(r, left, cur):
        if r == k:
            if left == 0:
                out.append(tuple(x for x in cur if x > 0))
            return
        cap = cols if r == 0 else base[r - 1]
        for a in range(0, min(left, cap - base[r]) + 1):
            rec(r + 1, left - a, cur + [base[r] + a])

    rec(0, j, [])
    return out


def times_special(vec, j, k, cols):
    if j < 0:
        return {}
    out = {}
    for shape, c in vec.items():
        for new in pieri_oracle(shape, j, k, cols):
            out[new] = out.get(new, 0) + c
    return out


def giambelli_product(mu, nu, k, cols):
    """sigma_mu * det(sigma_{nu_i + j - i}) using only the Pieri oracle."""
    nu = [x for x in nu if x > 0]
    t = len(nu)
    total = {}
    for perm in permutations(range(t)):
        sign = 1
        for i in range(t):
            for j in range(i + 1, t):
                if perm[i] > perm[j]:
                    sign = -sign
        vec = {tuple(mu): 1}
        for i in range(t):
            vec = times_special(vec, nu[i] + perm[i] - i, k, cols)
        for shape, c in vec.items():
            total[shape] = total.get(shape, 0) + sign * c
    return {s: c for s, c in total.items() if c}


def as_dict(cls: GradedClass):
    return {l: int(c.constant_term()) for l, c in cls.terms.items()}


# -- rings ---------------------------------------------------------------------

def test_theta_ring_pairing():
    R = theta_ring(2)
    th = R.theta()
    assert (th ** 3).is_zero()
    assert (th ** 2).integrate() == 2
    with pytest.raises(ValueError):
        theta_ring(-1)


def test_schur_ring_examples():
    R = schur_ring(2, 4)
    s1 = R.sigma((1,))
    assert s1 * s1 == R.sigma((2,)) + R.sigma((1, 1))
    R5 = schur_ring(2, 5)
    assert R5.sigma((3, 3)).integrate() == 1
    assert R5.sigma((3, 2)).integrate() == 0
    with pytest.raises(ValueError):
        schur_ring(3, 3)


def test_lr_multiply_examples():
    R = schur_ring(2, 5)
    assert lr_multiply(R.sigma((1,)), R.sigma((2, 1))) == R.sigma((3, 1)) + R.sigma((2, 2))
    assert lr_multiply(R.sigma((1, 1)), R.sigma((2, 2))) == R.sigma((3, 3))
    a = R.sigma((2, 1)) * 3
    assert lr_multiply(a, R.one()) == a
    with pytest.raises(ValueError):
        lr_multiply(R.one(), schur_ring(2, 4).one())


@pytest.mark.parametrize("k,n", [(2, 4), (2, 5), (3, 6), (2, 6), (3, 7)])
def test_lr_products_match_pieri_giambelli(k, n):
    R = schur_ring(k, n)
    parts = R.partitions()
    for mu in parts:
        for nu in parts:
            if sum(mu) + sum(nu) > R.dimension:
                continue
            got = as_dict(R.sigma(mu) * R.sigma(nu))
            assert got == giambelli_product(mu, nu, k, n - k), (mu, nu)


@pytest.mark.parametrize("k,n", [(2, 5), (3, 6)])
def test_poincare_duality(k, n):
    R = schur_ring(k, n)
    cols = n - k
    for mu in R.partitions():
        full = list(mu) + [0] * (k - len(mu))
        comp = tuple(x for x in (cols - full[k - 1 - i] for i in range(k)) if x > 0)
        assert (R.sigma(mu) * R.sigma(comp)).integrate() == 1
        for nu in R.partitions():
            if sum(nu) == sum(comp) and nu != comp:
                assert (R.sigma(mu) * R.sigma(nu)).integrate() == 0


def random_class(ring, rng, max_terms=3):
    labels = ring.partitions() if hasattr(ring, "partitions") else None
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        if labels is not None:
            l = rng.choice(labels)
        elif ring.kind == "theta":
            l = rng.randint(0, ring.g)
        else:
            l = tuple(rng.randint(0, 2) for _ in ring.names)
            if ring.degree(l) > ring.dimension:
                continue
        terms[l] = YPolynomial([Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                                for _ in range(rng.randint(1, 3))])
    return GradedClass(ring, terms)


@pytest.mark.parametrize("ring", [theta_ring(4), schur_ring(2, 5), free_ring(["a", ("b", 2)], 5)],
                         ids=["theta", "schur", "free"])
def test_ring_axioms_on_random_triples(ring):
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = (random_class(ring, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert all(ring.degree(l) <= ring.dimension for l in (a * b).terms)


def test_truncation_is_an_ideal():
    R = free_ring(["a"], 3)
    a = R.gen("a")
    assert (a ** 4).is_zero()
    assert ((a ** 2) * (a ** 2) + a).terms == a.terms


def test_class_json_round_trip():
    for ring in [theta_ring(3), schur_ring(2, 5), free_ring(["x", ("z", 2)], 4)]:
        rng = random.Random(3)
        for _ in range(20):
            c = random_class(ring, rng)
            assert class_from_json(c.to_json()) == c


def test_json_format_labels():
    R = schur_ring(2, 5)
    data = (R.sigma((3, 1)) * 3).to_json()
    assert data == {"ring": {"kind": "grassmannian", "k": 2, "n": 5},
                    "terms": [{"basis": "schur:[3,1]", "coeff": [["3", 0]]}]}
    T = theta_ring(3)
    assert (T.theta(2) * Fraction(1, 2)).to_json()["terms"][0]["basis"] == "theta^2"


# -- characters ----------------------------------------------------------------

def test_brill_noether_chern_classes_are_exponential():
    R = theta_ring(6)
    v = BundleCharacter(R, -3, [R.theta()])
    for j in range(7):
        assert chern_class(v, j) == R.theta(j) * Fraction(1, factorial(j))


def test_zero_character():
    R = free_ring(["x"], 4)
    v = BundleCharacter.trivial(R, 0)
    assert chern_class(v, 0) == R.one()
    assert all(chern_class(v, j).is_zero() for j in range(1, 5))
    assert chern_class(v, -1).is_zero()


def test_tautological_quotient_chern_classes():
    R = schur_ring(2, 5)
    cq = [R.sigma((j,)) for j in range(R.dimension + 1)]
    quotient = BundleCharacter.from_chern(R, 3, cq)
    sub = BundleCharacter.trivial(R, 5) - quotient
    minus_sub = BundleCharacter.trivial(R, 5) - sub
    for j in range(R.dimension + 1):
        assert chern_class(minus_sub, j) == R.sigma((j,))
    # c(S) c(Q) = 1
    assert (total_chern(sub) * total_chern(quotient)).truncate(R.dimension) == R.one()


def test_tensor_character_examples():
    R = free_ring(["x", "z"], 4)
    a = BundleCharacter.line(R, R.gen("x"))
    b = BundleCharacter.line(R, R.gen("z"))
    assert tensor_character(a, BundleCharacter.trivial(R, 1)) == a
    ab = tensor_character(a, b)
    s = R.gen("x") + R.gen("z")
    assert ab.p(1) == s and ab.p(2) == s * s
    P1 = schur_ring(1, 2)
    cq = [P1.sigma((j,)) for j in range(2)]
    q = BundleCharacter.from_chern(P1, 1, cq)
    sub = BundleCharacter.trivial(P1, 2) - q
    tangent = tensor_character(sub.dual(), q)
    assert tangent.rank == 1 and tangent.p(1) == P1.sigma((1,)) * 2


def random_character(ring, rng, rank):
    gens = [ring.gen(n) for n in ring.names]
    chern = [ring.one()]
    for j in range(1, ring.dimension + 1):
        acc = ring.zero()
        for _ in range(2):
            mono = ring.one()
            for _ in range(j):
                mono = mono * rng.choice(gens)
            acc = acc + mono * rng.randint(-2, 2)
        chern.append(acc)
    return BundleCharacter.from_chern(ring, rank, chern)


def test_whitney_formula_on_random_characters():
    R = free_ring(["a", "b"], 5)
    rng = random.Random(11)
    for _ in range(15):
        u = random_character(R, rng, rng.randint(-3, 3))
        v = random_character(R, rng, rng.randint(-3, 3))
        assert total_chern(u + v) == total_chern(u) * total_chern(v)


def test_twist_by_line_identity():
    """c(v (x) l) = sum_j c_j(v) (1 + l)^(rank - j) through degree 6."""
    R = free_ring(["a", "b", "l"], 6)
    l = R.gen("l")
    rng = random.Random(5)
    for _ in range(12):
        rank = rng.randint(-3, 3)
        v = random_character(R, rng, rank)
        line = BundleCharacter.line(R, l)
        lhs = total_chern(tensor_character(v, line))
        rhs = R.zero()
        for j in range(R.dimension + 1):
            e = rank - j
            power = R.zero()
            for m in range(R.dimension + 1):
                # generalized binomial C(e, m)
                coeff = Fraction(1)
                for i in range(m):
                    coeff *= Fraction(e - i, i + 1)
                power = power + l ** m * coeff
            rhs = rhs + chern_class(v, j) * power
        assert lhs == rhs


# -- T_y -------------------------------------------------------------------------

def test_twisted_trivial_bundle_is_power_of_qy():
    R = free_ring(["x"], 4)
    for e in (1, 2, 3, -2):
        series = ty_of_twisted(BundleCharacter.trivial(R, e), 4)
        q = qy_series(4)
        power = UniSeries([1], 4)
        if e >= 0:
            for _ in range(e):
                power = power * q
        else:
            inv = UniSeries(inv_qy_coeffs(4), 4)
            for _ in range(-e):
                power = power * inv
        for n in range(5):
            assert series.terms.get(((n,), R.unit_label()), YPolynomial()) == power[n]


def test_twisted_degree_two_expansion():
    R = free_ring(["c1", ("c2", 2)], 2)
    c1, c2 = R.gen("c1"), R.gen("c2")
    e = 3
    v = BundleCharacter.from_chern(R, e, [R.one(), c1, c2])
    series = ty_of_twisted(v, 2)
    ch2 = (c1 * c1 - c2 * 2) * Fraction(1, 2)
    unit = R.unit_label()

    def coeff(rpow, cls):
        acc = R.zero()
        for (ex, l), c in series.terms.items():
            if ex == (rpow,):
                acc = acc + R.basis(l) * c
        return acc

    a, b = (1 - Y) * Fraction(1, 2), (1 + Y) ** 2 * Fraction(1, 12)
    d = (1 - Y) ** 2 * Fraction(1, 4)
    assert coeff(0, None) == R.one() + c1 * a + ch2 * b * 2 + c2 * d
    assert coeff(1, None) == R.one() * (a * e) + c1 * (b * 2) + c1 * (d * (e - 1))
    assert coeff(2, None) == R.one() * (b * e + d * comb(e, 2))
    assert series.terms[((0,), unit)] == YPolynomial.const(1)


def test_twisted_at_minus_one_is_chern_twist():
    R = free_ring(["a", "b"], 4)
    rng = random.Random(2)
    for _ in range(5):
        rank = rng.randint(-2, 3)
        v = random_character(R, rng, rank)
        series = ty_of_twisted(v, 4).evaluate_y(-1)
        for rpow in range(5):
            got = R.zero()
            for (ex, l), c in series.terms.items():
                if ex == (rpow,):
                    got = got + R.basis(l) * c
            expected = R.zero()
            for j in range(5 - rpow):
                e = rank - j
                coeff = Fraction(1)
                for i in range(rpow):
                    coeff *= Fraction(e - i, i + 1)
                expected = expected + chern_class(v, j) * coeff
            assert got == expected.truncate(4 - rpow)


def test_twisted_at_zero_has_no_y():
    R = free_ring(["a"], 4)
    v = random_character(R, random.Random(1), 2)
    series = ty_of_twisted(v, 4)
    at_zero = series.evaluate_y(0)
    for key, c in series.terms.items():
        assert at_zero.terms.get(key, YPolynomial()) == YPolynomial.const(c(0))
    assert all(c.is_constant() for c in at_zero.terms.values())


def test_smooth_ty_of_abelian_variety_is_one():
    R = theta_ring(5)
    assert ty_of_smooth(BundleCharacter.trivial(R, 5)) == R.one()


def grassmannian_tangent(k, n):
    R = schur_ring(k, n)
    cq = [R.sigma((j,)) for j in range(R.dimension + 1)]
    q = BundleCharacter.from_chern(R, n - k, cq)
    sub = BundleCharacter.trivial(R, n) - q
    return tensor_character(sub.dual(), q)


@pytest.mark.parametrize("n", range(1, 7))
def test_projective_space_chi_y(n):
    chi = ty_of_smooth(grassmannian_tangent(1, n + 1)).integrate()
    assert chi == sum((MINUS_Y ** i for i in range(n + 1)), YPolynomial())


@pytest.mark.parametrize("k,n", [(1, 4), (2, 4), (2, 5), (3, 6)])
def test_grassmannian_chi_y_is_gaussian_binomial(k, n):
    chi = ty_of_smooth(grassmannian_tangent(k, n)).integrate()
    assert chi == gaussian_binomial(n, k, MINUS_Y)


def test_grassmannian_csm_is_total_chern_class():
    t = grassmannian_tangent(2, 4)
    assert ty_of_smooth(t).evaluate_y(-1) == total_chern(t)
    assert total_chern(t).integrate() == 6
