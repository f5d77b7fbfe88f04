import itertools

import numpy as np
import pytest

from pfourier import DescriptorError, DomainError, UnsupportedError
from pfourier.duals import (
    SU2, Product, Torus, branching, catalog, enumerate_dual, fusion_multiplicities, intertwiners,
    irrep_matrix, parse_group, product_group,
)
from pfourier.duals.finite import FiniteGroup

from conftest import ALL_FINITE, FINITE


def schur_deviation(g):
    """Max deviation from (1/|G|) sum pi_ij conj(pi'_kl) = delta delta delta / d."""
    worst = 0.0
    labs = g.dual()
    mats = {lab: np.array([g.irrep(lab, s) for s in g.elements()]) for lab in labs}
    for a, b in itertools.product(labs, repeat=2):
        gram = np.einsum("gij,gkl->ijkl", mats[a], np.conj(mats[b])) / g.order
        expect = np.zeros_like(gram)
        if a == b:
            for i, j in itertools.product(range(a.dim), repeat=2):
                expect[i, j, i, j] = 1 / a.dim
        worst = max(worst, np.abs(gram - expect).max())
    return worst


@pytest.mark.parametrize("desc", ALL_FINITE)
def test_schur_orthogonality(desc):
    assert schur_deviation(parse_group(desc)) <= 1e-12


@pytest.mark.parametrize("desc", ALL_FINITE)
def test_sum_of_squares(desc):
    g = parse_group(desc)
    assert sum(l.dim ** 2 for l in g.dual()) == g.order


@pytest.mark.parametrize("desc", ALL_FINITE + ["SU2:N=5", "T:k=2,N=2"])
def test_homomorphism_and_unitarity(desc, rng):
    g = parse_group(desc)
    xs = g.sample(rng, 6)
    for lab in g.dual():
        assert np.allclose(g.irrep(lab, g.identity), np.eye(lab.dim), atol=1e-14)
        for s, t in zip(xs, xs[1:]):
            a, b = g.irrep(lab, s), g.irrep(lab, t)
            assert np.abs(a @ a.conj().T - np.eye(lab.dim)).max() <= 1e-10
            assert np.abs(a @ b - g.irrep(lab, g.multiply(s, t))).max() <= 1e-9


def test_label_conjugation():
    for desc in ALL_FINITE + ["SU2:N=3", "T:k=1,N=3"]:
        g = parse_group(desc)
        for lab in g.dual():
            c = lab.conjugate()
            assert c.conjugate() == lab
            assert c.dim == lab.dim
            assert g.make_label(c.key) == c


def test_enumerate_examples():
    assert [(l.name, l.dim) for l in enumerate_dual("S3", 1)] == [("triv", 1), ("sgn", 1), ("std", 2)]
    su = enumerate_dual("SU2:N=4", 10)
    assert [l.name for l in su] == ["pi0", "pi1", "pi2", "pi3", "pi4"]
    assert [l.dim for l in su] == [1, 2, 3, 4, 5]
    assert [l.name for l in enumerate_dual("Z/2", 3)] == ["triv", "sgn"]
    assert len(enumerate_dual("SU2:N=10", 3)) == 3
    with pytest.raises(UnsupportedError):
        enumerate_dual(42, 1)


def test_su2_torus_diagonal():
    g = SU2(4)
    th = 0.37
    m = irrep_matrix(g, g.make_label(2), SU2.torus_element(th))
    assert np.allclose(m, np.diag(np.exp(1j * th * np.array([2, 0, -2]))), atol=1e-15)


def test_s3_transposition_is_reflection():
    g = catalog("S3")
    std = g.label("std")
    # (1 0 2) swaps 0 and 1
    s = list(itertools.permutations(range(3))).index((1, 0, 2))
    m = g.irrep(std, s)
    assert np.allclose(m.imag, 0)
    assert abs(np.trace(m)) < 1e-15
    assert np.allclose(m @ m, np.eye(2))
    assert np.isclose(np.linalg.det(m.real), -1)


def test_fusion_examples():
    su = SU2(4)
    f = fusion_multiplicities(su, su.make_label(1), su.make_label(1))
    assert {l.name: m for l, m in f.items()} == {"pi0": 1, "pi2": 1}
    s3 = catalog("S3")
    f = fusion_multiplicities(s3, s3.label("sgn"), s3.label("std"))
    assert {l.name: m for l, m in f.items()} == {"std": 1}
    f = fusion_multiplicities(s3, s3.label("std"), s3.label("std"))
    assert {l.name: m for l, m in f.items()} == {"triv": 1, "sgn": 1, "std": 1}


def test_fusion_beyond_truncation():
    su = SU2(2)
    f = fusion_multiplicities(su, su.make_label(2), su.make_label(2))
    assert [l.key for l in f] == [0, 2, 4]


def _dimension_count(g, labs):
    for a, b in itertools.product(labs, repeat=2):
        f = g.fusion(a, b)
        assert sum(m * c.dim for c, m in f.items()) == a.dim * b.dim
        conj = g.fusion(a.conjugate(), b.conjugate())
        for c, m in f.items():
            assert conj[c.conjugate()] == m


@pytest.mark.parametrize("desc", ALL_FINITE)
def test_dimension_count_finite(desc):
    g = parse_group(desc)
    _dimension_count(g, g.dual())


def test_dimension_count_su2():
    g = SU2(24)
    for m in range(25):
        for n in range(25 - m):
            f = g.fusion(g.make_label(m), g.make_label(n))
            assert sum(c.dim for c in f) == (m + 1) * (n + 1)


def test_su2_fusion_rule_against_characters():
    # chi_m chi_n evaluated on the torus, decomposed by the Weyl character oracle
    g = SU2(10)
    th = np.linspace(0.1, 3.0, 13)

    def chi(n):
        return np.sin((n + 1) * th) / np.sin(th)

    for m in range(6):
        for n in range(6):
            lhs = chi(m) * chi(n)
            rhs = sum(mult * chi(c.key) for c, mult in g.fusion(g.make_label(m), g.make_label(n)).items())
            assert np.allclose(lhs, rhs)


def _check_intertwiners(g, a, b, xs, tol=1e-9):
    total = np.zeros((a.dim * b.dim,) * 2, dtype=complex)
    ranges = []
    for c, m in g.fusion(a, b).items():
        us = intertwiners(g, a, b, c)
        assert len(us) == m
        for u in us:
            assert u.shape == (a.dim * b.dim, c.dim)
            assert np.abs(u.conj().T @ u - np.eye(c.dim)).max() <= 1e-10
            for s in xs:
                lhs = np.kron(g.irrep(a, s), g.irrep(b, s)) @ u
                assert np.abs(lhs - u @ g.irrep(c, s)).max() <= tol
            ranges.append(u)
            total += u @ u.conj().T
    for u, v in itertools.combinations(ranges, 2):
        assert np.abs(u.conj().T @ v).max() <= 1e-10
    assert np.abs(total - np.eye(len(total))).max() <= 1e-9


@pytest.mark.parametrize("desc", ALL_FINITE)
def test_intertwiners_finite(desc, rng):
    g = parse_group(desc)
    xs = g.elements()
    for a, b in itertools.product(g.dual(), repeat=2):
        _check_intertwiners(g, a, b, xs)


def test_intertwiners_su2(rng):
    g = SU2(16)
    xs = g.sample(rng, 4)
    for m in range(17):
        for n in range(17 - m):
            _check_intertwiners(g, g.make_label(m), g.make_label(n), xs)


def test_intertwiners_products(rng):
    g = parse_group("prod(SU2:N=2,S3)")
    xs = g.sample(rng, 3)
    for a, b in itertools.product(g.dual(), repeat=2):
        _check_intertwiners(g, a, b, xs)


def test_su2_singlet():
    g = SU2(2)
    (u,) = intertwiners(g, g.make_label(1), g.make_label(1), g.make_label(0))
    assert np.allclose(u[:, 0], np.array([0, 1, -1, 0]) / np.sqrt(2))


def test_trivial_factor_intertwiner():
    g = catalog("S3")
    (u,) = intertwiners(g, g.label("triv"), g.label("std"), g.label("std"))
    assert np.allclose(u, np.eye(2))


def test_intertwiner_zero_multiplicity_is_empty():
    g = SU2(3)
    assert intertwiners(g, g.make_label(1), g.make_label(1), g.make_label(1)) == []


def test_intertwiners_deterministic():
    a = intertwiners(parse_group("S4"), *[parse_group("S4").label(x) for x in ("std", "std", "std")])
    b = intertwiners(catalog("S4"), *[catalog("S4").label(x) for x in ("std", "std", "std")])
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_branching_su2():
    g = SU2(5)
    br = branching(g, "T", g.make_label(3))
    assert {l.name: m for l, m in br.items()} == {"chi3": 1, "chi1": 1, "chi-1": 1, "chi-3": 1}
    for n in range(6):
        br = branching(g, "center", g.make_label(n))
        assert {l.name: m for l, m in br.items()} == {("triv" if n % 2 == 0 else "sgn"): n + 1}
        # oracle: pi_n(-I) = (-1)^n I
        assert np.allclose(g.irrep(g.make_label(n), -np.eye(2)), (-1) ** n * np.eye(n + 1))


def test_branching_product():
    g = product_group(catalog("S3"), catalog("Z/2"))
    for lab in g.dual():
        a, b = g.components(lab)
        assert branching(g, "factor:0", lab) == {a: b.dim}
        assert branching(g, "factor:1", lab) == {b: a.dim}


@pytest.mark.parametrize("desc,spec,order", [
    ("S3", "A3", 3), ("S4", "A4", 12), ("S4", "V4", 4), ("A4", "V4", 4), ("D4", "rot", 4),
    ("Q8", "center", 2), ("S4", "gen:1,5", 6), ("D5", "gen:5", 2),
])
def test_branching_finite_subgroups(desc, spec, order):
    g = parse_group(desc)
    sub = g.subgroup(spec)
    assert sub.model.order == order
    assert sum(l.dim ** 2 for l in sub.model.dual()) == order
    for pi in g.dual():
        br = g.branching(sub, pi)
        assert sum(m * s.dim for s, m in br.items()) == pi.dim
        # restricted character equals the character of the decomposition
        chi = np.array([np.trace(g.irrep(pi, sub.embed(h))) for h in sub.model.elements()])
        rebuilt = sum(m * sub.model.character(s) for s, m in br.items())
        assert np.allclose(chi, rebuilt)


def test_branching_unsupported():
    with pytest.raises(UnsupportedError):
        SU2(3).subgroup("SO3")
    with pytest.raises(UnsupportedError):
        catalog("S3").subgroup("bogus")


def test_product_examples():
    g = product_group(catalog("Z/2"), catalog("Z/2"))
    assert len(g.dual()) == 4 and all(l.dim == 1 for l in g.dual())
    g = product_group(catalog("S3"), catalog("Z/2"))
    assert sorted(l.dim for l in g.dual()) == [1, 1, 1, 1, 2, 2]
    g = product_group(SU2(3), Torus(1, 2))
    for lab in g.dual():
        assert lab.dim == lab.key[0] + 1


def test_product_fusion_multiplies():
    g = product_group(catalog("S3"), SU2(2))
    a = g.label("(std,pi1)")
    f = g.fusion(a, a)
    assert sum(f.values()) == 3 * 2
    assert sum(m * c.dim for c, m in f.items()) == 16


@pytest.mark.parametrize("desc", ["S3", "D4", "Z/8", "SU2:N=12", "T:k=1,N=10", "prod(S3,Z/2)", "prod(SU2:N=3,T:k=2,N=1)"])
def test_descriptor_round_trip(desc):
    g = parse_group(desc)
    assert parse_group(g.descriptor) == g


@pytest.mark.parametrize("bad", ["S5", "Z/x", "SU2:M=3", "prod(S3)", "T:k=0", ""])
def test_bad_descriptors(bad):
    with pytest.raises(DescriptorError):
        parse_group(bad)


def test_label_mismatch():
    with pytest.raises(DomainError):
        catalog("S3").irrep(SU2(2).make_label(1), 0)
    with pytest.raises(DomainError):
        catalog("S3").irrep(catalog("S3").label("std"), 17)


def test_torus_ordering():
    t = Torus(1, 2)
    assert [l.key[0] for l in t.dual()] == [0, -1, 1, -2, 2]
    it = t.iter_dual()
    assert [next(it).key[0] for _ in range(7)] == [0, -1, 1, -2, 2, -3, 3]


def test_fusion_cache_is_consistent_under_threads():
    from concurrent.futures import ThreadPoolExecutor

    g = SU2(12)
    pairs = [(g.make_label(m), g.make_label(n)) for m in range(8) for n in range(8)]
    with ThreadPoolExecutor(8) as pool:
        res = list(pool.map(lambda ab: g.fusion(*ab), pairs))
    assert res == [g.fusion(a, b) for a, b in pairs]


def test_subgroup_of_equal_group_instances():
    # groups compare by descriptor, so a subgroup from one instance serves an equal one
    a, b = SU2(7), SU2(7)
    sub = a.subgroup("T")
    assert b.branching(sub, b.make_label(2)) == a.branching(sub, a.make_label(2))
    with pytest.raises(DomainError):
        SU2(8).branching(sub, SU2(8).make_label(2))
