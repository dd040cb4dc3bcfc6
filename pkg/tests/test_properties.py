"""
Randomized property tests over F_2 with fixed seeds
"""
import itertools

import numpy as np
import pytest

from src.cli.commands import random_connective_complex
from src.core.complexes import ChainMap, DegreeWindow, cone
from src.core.exactla import kernel_basis, rank, solve_matrix, solve_vector
from src.core.simplicial import dold_kan_DK, dold_kan_N
from src.dgcat.base import Morphism
from src.dgcat.h0 import H0Category
from src.dgcat.path_category import PathDgCategory
from src.dgcat.quiver import lambda_simplex
from src.dgcat.transforms import OppositeCategory
from src.exact.extensions import are_equivalent, enumerate_conflations, pullback, pushforward
from src.h3t.morphisms import calculus
from src.h3t.probes import SearchSpace
from src.h3t.squares import HSquare, is_homotopy_cartesian, is_homotopy_cocartesian, is_homotopy_short_exact
from src.h3t.three_term import direct_sum_conflation
from src.pretr.twisted import Pretr, cone_in_pretr, shift_in_pretr

CASES = 500

GROUP_ENDS = [("SP1", "P2"), ("SP1", "P1"), ("SP2", "P2"), ("S2", "P1")]


@pytest.fixture
def closure(a2_workspace):
    return a2_workspace.closure("A2")


@pytest.fixture
def space(closure):
    return SearchSpace.default(closure, sum_bound=1)


@pytest.fixture
def groups(space, closure):
    return [enumerate_conflations(space, closure.obj(c), closure.obj(a)) for c, a in GROUP_ENDS]


def random_cycle(cat, x, y, n, rng):
    """A random element of Z^n Hom(x, y)"""
    F = cat.field
    K = kernel_basis(F, cat.differential(x, y, n))
    if K.shape[1] == 0:
        return cat.zero(x, y, n)
    return Morphism(cat, x, y, n, F.matmul(K, F.random_array(rng, (K.shape[1], 1)))[:, 0])


def random_closed(hc, x, y, rng):
    """A random H0 class lifted to a cocycle"""
    return hc.from_class(x, y, hc.field.random_array(rng, (hc.dim(x, y),)))


def random_chain_map(field, x, y, rng):
    """Random top component, lower components solved degree by degree"""
    for _ in range(50):
        maps = {0: field.random_array(rng, (y.dim(0), x.dim(0)))}
        for n in (-1, -2):
            sol = solve_matrix(field, y.d(n), field.matmul(maps[n + 1], x.d(n)))
            if sol is None:
                break
            maps[n] = sol
        else:
            return ChainMap(x, y, maps)
    return ChainMap(x, y, {n: field.zeros((y.dim(n), x.dim(n))) for n in (0, -1, -2)})


def random_square(closure, hc, objects, rng):
    """A random square commuting up to homotopy, or None when k g - j f is not a boundary"""
    x00, x01, x10, x11 = (objects[i] for i in rng.integers(0, len(objects), 4))
    f = random_closed(hc, x00, x01, rng)
    g = random_closed(hc, x00, x10, rng)
    j = random_closed(hc, x01, x11, rng)
    k = random_closed(hc, x10, x11, rng)
    rhs = (closure.compose(k, g) - closure.compose(j, f)).vector
    h = solve_vector(closure.field, closure.differential(x00, x11, -1), rhs)
    if h is None:
        return None
    return HSquare(closure, x00, x01, x10, x11, f, g, j, k, Morphism(closure, x00, x11, -1, h))


def test_path_category_leibniz(f2):
    """Test d^2 = 0 and graded Leibniz on random basis triples of Lambda(Delta^3)"""
    cat = PathDgCategory(lambda_simplex(3, f2), DegreeWindow(-6, 1))
    rng = np.random.default_rng(101)
    objs = cat.objects
    for _ in range(CASES):
        x, y, z = (objs[i] for i in rng.integers(0, len(objs), 3))
        p, q = (int(v) for v in rng.integers(-3, 1, 2))
        assert cat.leibniz_violations(x, y, z, p, q) == 0
        assert f2.is_zero(f2.matmul(cat.differential(x, y, p + 1), cat.differential(x, y, p)))


def test_pretr_leibniz(closure):
    """Test d^2 = 0 and graded Leibniz on random twisted complexes over A2"""
    base = closure.base
    P = Pretr(base)
    F = P.field
    rng = np.random.default_rng(102)
    pool = [P.embed(x) for x in base.objects]
    pool += [shift_in_pretr(x, 1) for x in pool]
    for _ in range(6):
        x, y = (pool[i] for i in rng.integers(0, len(pool), 2))
        pool.append(cone_in_pretr(random_cycle(P, x, y, 0, rng)))
    for _ in range(CASES):
        x, y, z = (pool[i] for i in rng.integers(0, len(pool), 3))
        p, q = (int(v) for v in rng.integers(-2, 2, 2))
        assert P.leibniz_violations(x, y, z, p, q) == 0
        assert F.is_zero(F.matmul(P.differential(x, y, p + 1), P.differential(x, y, p)))


def test_cones_satisfy_maurer_cartan(closure):
    """Test iterated cones and shifts of random closed maps are twisted complexes"""
    base = closure.base
    P = Pretr(base)
    F = P.field
    rng = np.random.default_rng(103)
    pool = [P.embed(x) for x in base.objects]
    for _ in range(CASES):
        x, y = (pool[i] for i in rng.integers(0, len(pool), 2))
        c = cone_in_pretr(random_cycle(P, x, y, 0, rng))
        assert len(c) == len(x) + len(y)
        assert F.is_zero(F.matmul(P.differential(c, c, 0), P.differential(c, c, -1)))
        moved = shift_in_pretr(c, int(rng.integers(-1, 2)))
        assert F.is_zero(F.matmul(P.differential(moved, c, 0), P.differential(moved, c, -1)))
        if len(c) <= 3:
            pool.append(c)


def test_h3t_calculus_laws(closure, groups, a2_workspace):
    """Test d^2 = 0 and graded Leibniz for random morphisms of 3-term h-complexes"""
    calc = calculus(closure)
    F = closure.field
    pool = [x for g in groups for x in g.classes] + [a2_workspace.hcomplex("alpha0")]
    rng = np.random.default_rng(104)

    def random_morphism(x, y, n):
        k = len(calc.lower_coordinates(x, y, n))
        return calc.from_coordinates(x, y, n, F.random_array(rng, (k,)))

    for _ in range(CASES):
        x, y, z = (pool[i] for i in rng.integers(0, len(pool), 3))
        p, q = (int(v) for v in rng.integers(-2, 1, 2))
        G = random_morphism(y, z, p)
        H = random_morphism(x, y, q)
        assert calc.d(calc.d(H)).is_zero()
        lhs = calc.coordinates(calc.d(calc.compose(G, H)))
        first = calc.coordinates(calc.compose(calc.d(G), H))
        second = calc.coordinates(calc.compose(G, calc.d(H)))
        assert F.equal(lhs, F.add(first, F.scale(second, F.sign(p))))


def test_cone_long_exact_ranks(f2):
    """Test h^n(Cone f) = dim coker H^n(f) + dim ker H^(n+1)(f)"""
    rng = np.random.default_rng(105)
    for _ in range(CASES):
        x = random_connective_complex(f2, [int(d) for d in rng.integers(1, 3, 3)], rng)
        y = random_connective_complex(f2, [int(d) for d in rng.integers(1, 3, 3)], rng)
        f = random_chain_map(f2, x, y, rng)
        c = cone(f).complex
        ranks = {n: rank(f2, f.induced(n)[2]) for n in range(-3, 2)}
        for n in range(-3, 1):
            expected = (y.cohomology(n).dim - ranks[n]) + (x.cohomology(n + 1).dim - ranks[n + 1])
            assert c.cohomology(n).dim == expected


def test_baer_sum_group_axioms(groups):
    """Test the Baer sum is an abelian group law with [X] + [-X] = 0"""
    for group in groups:
        assert group.order == 2
        assert group.group_law_violations() == []
        for i, j in itertools.product(range(group.order), repeat=2):
            assert group.add(i, j) == group.add(j, i)
        for i in range(group.order):
            assert group.add(i, group.neg(i)) == group.zero


def test_pullback_commutes_with_pushforward(space, closure, groups):
    """Test a_* c^* X = c^* a_* X over every nonzero class and nonzero H0 map"""
    hc = H0Category(closure, check=False)
    F = closure.field
    checked = 0
    for group in groups:
        for x in group.classes[1:]:
            into = [hc.from_class(e, x.a2, v) for e in closure.objects for v in F.vectors(hc.dim(e, x.a2)) if not F.is_zero(v)]
            out = [hc.from_class(x.a0, e, v) for e in closure.objects for v in F.vectors(hc.dim(x.a0, e)) if not F.is_zero(v)]
            for c, a in itertools.product(into, out):
                left, _ = pushforward(pullback(x, c, space)[0], a, space)
                right, _ = pullback(pushforward(x, a, space)[0], c, space)
                assert are_equivalent(left, right)
                checked += 1
    assert checked


def test_direct_sums_of_conflations(space, closure, groups):
    """Test X + Y is homotopy short exact for every pair of listed classes"""
    pool = [x for g in groups for x in g.classes]
    for x, y in itertools.product(pool, repeat=2):
        z = direct_sum_conflation(closure, x, y)
        assert z.validate()
        assert is_homotopy_short_exact(z, space.probes.objects, stop_early=True).holds


def test_pasting_law(closure, groups):
    """Test outer cartesian iff upper cartesian when the lower square is a left exact sequence"""
    hc = H0Category(closure, check=False)
    objects = [()] + closure.objects
    pool = [x for g in groups for x in g.classes]
    lower_ok = {}
    rng = np.random.default_rng(106)
    done, applicable, attempts = 0, 0, 0
    while done < CASES:
        attempts += 1
        assert attempts < 100 * CASES
        i = int(rng.integers(0, len(pool)))
        c = pool[i]
        x00, x01 = (objects[n] for n in rng.integers(0, len(objects), 2))
        f = random_closed(hc, x00, x01, rng)
        g = random_closed(hc, x00, c.a0, rng)
        j = random_closed(hc, x01, c.a1, rng)
        rhs = (closure.compose(c.f, g) - closure.compose(j, f)).vector
        hv = solve_vector(closure.field, closure.differential(x00, c.a1, -1), rhs)
        if hv is None:
            continue
        h = Morphism(closure, x00, c.a1, -1, hv)
        done += 1
        upper = HSquare(closure, x00, x01, c.a0, c.a1, f, g, j, c.f, h)
        lower = HSquare(closure, c.a0, c.a1, (), c.a2, c.f, closure.zero(c.a0, ()), c.j, closure.zero((), c.a2), c.h)
        if i not in lower_ok:
            lower_ok[i] = is_homotopy_cartesian(lower, stop_early=True).holds
        if not lower_ok[i]:
            continue
        outer = HSquare(
            closure, x00, x01, (), c.a2,
            f, closure.zero(x00, ()), closure.compose(c.j, j), closure.zero((), c.a2),
            closure.compose(c.h, g) + closure.compose(c.j, h),
        )
        applicable += 1
        assert is_homotopy_cartesian(outer, stop_early=True).holds == is_homotopy_cartesian(upper, stop_early=True).holds
    assert applicable


def test_cartesian_matches_opposite_cocartesian(closure):
    """Test cartesian squares agree with cocartesian squares of the opposite category"""
    hc = H0Category(closure, check=False)
    objects = [()] + closure.objects
    twice = OppositeCategory(OppositeCategory(closure))
    rng = np.random.default_rng(107)
    done = 0
    while done < CASES:
        s = random_square(closure, hc, objects, rng)
        if s is None:
            continue
        done += 1
        moved = HSquare(
            twice, s.x00, s.x01, s.x10, s.x11,
            *(Morphism(twice, m.source, m.target, m.degree, m.vector) for m in (s.f, s.g, s.j, s.k, s.h)),
        )
        cartesian = is_homotopy_cartesian(s, stop_early=True).holds
        assert is_homotopy_cocartesian(s.op(), stop_early=True).holds == cartesian
        assert is_homotopy_cartesian(moved, stop_early=True).holds == cartesian


def test_isomorphism_matches_inverse_search(closure, groups, a2_workspace):
    """Test termwise equivalences are exactly the invertible morphisms when H0 Hom has dimension at most 2"""
    calc = calculus(closure)
    F = closure.field
    pool = [x for g in groups for x in g.classes] + [a2_workspace.hcomplex("alpha0")]
    homs = {}
    for (a, x), (b, y) in itertools.product(enumerate(pool), repeat=2):
        there = calc.hom_complex(x, y).cohomology(0)
        back = calc.hom_complex(y, x).cohomology(0)
        if there.dim <= 2 and back.dim <= 2:
            homs[(a, b)] = there
    pairs = sorted(homs)
    assert pairs
    rng = np.random.default_rng(108)
    seen = {True: 0, False: 0}
    for _ in range(CASES):
        a, b = pairs[int(rng.integers(0, len(pairs)))]
        hom = homs[(a, b)]
        H = calc.from_coordinates(pool[a], pool[b], 0, hom.lift(F.random_array(rng, (hom.dim,))))
        iso = calc.is_isomorphism(H)
        assert iso == (calc.inverse_by_search(H, budget=16) is not None)
        seen[iso] += 1
    assert seen[True] and seen[False]


def test_dold_kan_round_trip(f2):
    """Test N(DK(v)) = v through level 4 on random connective complexes"""
    rng = np.random.default_rng(109)
    for _ in range(CASES):
        dims = [int(d) for d in rng.integers(1, 3, int(rng.integers(1, 4)))]
        v = random_connective_complex(f2, dims, rng)
        n = dold_kan_N(dold_kan_DK(v, 4))
        for k in range(5):
            assert n.dim(-k) == v.dim(-k)
        for k in range(1, 5):
            assert f2.equal(n.d(-k), v.d(-k))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
