"""
Unit tests for extension groups, defects, exact structures, lattices and axioms
"""
import numpy as np
import pytest

from src.cli.dgx_format import parse_file
from src.core.exactla import rank
from src.dgcat.complexes_category import a2_example
from src.dgcat.h0 import H0Category
from src.dgcat.path_category import QuiverAlgebra
from src.dgcat.presentations import kA2
from src.dgcat.transforms import AdditiveClosure
from src.errors import FieldError
from src.exact import operators
from src.exact.axioms import extriangulated_spot_check, verify_axioms
from src.exact.defects import almost_split_conflations, defect, identity_holds, satisfies_as2
from src.exact.extensions import (
    are_equivalent,
    baer_sum,
    enumerate_conflations,
    extension_oracle,
    is_split,
    pullback,
    pushforward,
)
from src.exact.lattice import substructure_lattice
from src.exact.operators import Truth
from src.exact.structures import (
    all_structure,
    deflation_class_structure,
    greatest_structure,
    split_structure,
    subbifunctor_structure,
)
from src.h3t.morphisms import calculus
from src.h3t.probes import SearchSpace
from src.h3t.squares import is_homotopy_bicartesian, is_homotopy_left_exact, is_homotopy_right_exact, square_of
from src.h3t.three_term import ThreeTermH, split_conflation, transport


@pytest.fixture
def closure(a2_workspace):
    return a2_workspace.closure("A2")


@pytest.fixture
def space(closure):
    return SearchSpace.default(closure, sum_bound=1)


@pytest.fixture
def alpha(a2_workspace):
    return a2_workspace.hcomplex("alpha")


@pytest.fixture
def beta(a2_workspace):
    return a2_workspace.hcomplex("beta")


def test_truth_is_kleene():
    """Test three-valued conjunction, disjunction and negation"""
    assert (Truth.TRUE & Truth.UNDECIDED) is Truth.UNDECIDED
    assert (Truth.FALSE & Truth.UNDECIDED) is Truth.FALSE
    assert (Truth.TRUE | Truth.UNDECIDED) is Truth.TRUE
    assert ~Truth.UNDECIDED is Truth.UNDECIDED
    assert ~Truth.FALSE is Truth.TRUE


def test_split_and_equivalence(closure, alpha):
    """Test splitting and equivalence of conflations"""
    split = split_conflation(closure, alpha.a0, alpha.a2)
    assert is_split(split)
    assert not is_split(alpha)
    assert are_equivalent(alpha, alpha)
    assert not are_equivalent(alpha, split)


def test_ext_group_of_order_two(space, closure, alpha):
    """Test E(SP1, P2) has two classes with a valid group law"""
    group = enumerate_conflations(space, closure.obj("SP1"), closure.obj("P2"))
    assert group.order == 2
    assert extension_oracle(closure, closure.obj("SP1"), closure.obj("SP2")) == 1
    assert group.index_of(alpha) == 1
    assert group.cayley_table().values.tolist() == [[0, 1], [1, 0]]
    assert group.group_law_violations() == []


def test_baer_sum_of_alpha_with_itself_splits(space, alpha):
    """Test [alpha] + [alpha] = 0 over F_2"""
    assert is_split(baer_sum(alpha, alpha, space))


def test_ext_group_in_module_category(fixture_path):
    """Test E(S1, S2) over kA2 has order 2"""
    ws = parse_file(fixture_path("mod_a2.dgx"))
    closure = ws.closure("M")
    space = SearchSpace.default(closure, sum_bound=1)
    group = enumerate_conflations(space, closure.obj("S1"), closure.obj("S2"))
    assert group.order == 2


def test_enumeration_needs_finite_field(q):
    """Test that conflation enumeration over Q is refused"""
    closure = AdditiveClosure(a2_example(QuiverAlgebra(kA2(q))))
    space = SearchSpace.default(closure, sum_bound=1)
    with pytest.raises(FieldError):
        enumerate_conflations(space, closure.obj("SP1"), closure.obj("P2"))


def test_defect_of_alpha(alpha):
    """Test the defect of alpha is the simple module at SP1"""
    module = defect(alpha)
    assert module.dimension_vector() == [0, 0, 0, 1, 0]
    assert module.support == [("SP1",)]
    assert module.is_simple()
    assert all(identity_holds(alpha, module).values())


def test_defect_of_split_conflation_vanishes(closure):
    """Test that split conflations have zero defect"""
    module = defect(split_conflation(closure, closure.obj("P1"), closure.obj("S2")))
    assert module.is_zero()


def test_structures_membership(space, closure, alpha, beta):
    """Test membership in all, split, class and subbifunctor structures"""
    split = split_conflation(closure, alpha.a0, alpha.a2)
    assert all_structure(space).contains(alpha)
    assert not split_structure(space).contains(alpha)
    assert split_structure(space).contains(split)
    by_class = deflation_class_structure(space, [alpha], "Ealpha")
    assert by_class.contains(alpha)
    assert by_class.contains(split)
    assert not by_class.contains(beta)
    by_defect = subbifunctor_structure(space, [closure.obj("SP1")])
    assert by_defect.contains(alpha)
    assert not by_defect.contains(beta)
    assert by_class.label == "Ealpha"


def test_declared_class_structure(a2_workspace, alpha):
    """Test the structure declared in the workspace"""
    s = a2_workspace.structure("Ealpha")
    assert s.label == "Ealpha"
    assert s.contains(alpha)


def test_almost_split_conflations(space):
    """Test the three almost split conflations of the A2 category"""
    found = almost_split_conflations(all_structure(space))
    assert sorted(x.a2 for x in found) == [("S2",), ("SP1",), ("SP2",)]
    for x in found:
        assert defect(x, space.probes.objects).support == [x.a2]


def test_lattice_is_a_cube(space):
    """Test the substructure lattice has 8 nodes and 12 edges"""
    result = substructure_lattice(all_structure(space))
    assert result.ok
    assert result.graph.number_of_nodes() == 8
    assert result.graph.number_of_edges() == 12
    index = {x.a2: i for i, x in enumerate(result.almost_split)}
    key = frozenset({index[("S2",)], index[("SP1",)]})
    assert "E^add P1" in result.nodes[key].labels
    dot = result.to_dot()
    assert dot.startswith("digraph lattice {")


def test_split_structure_passes_axioms(space):
    """Test the axiom checks on the split structure"""
    structure = split_structure(space)
    report = verify_axioms(structure, samples=3)
    assert report.passed
    assert report.result("Ex0").passed
    assert structure.verified
    with pytest.raises(KeyError):
        report.result("Ex9")


def test_declared_morphisms_are_h0_bases(space, closure):
    """Test the morphisms used by the closure operators"""
    maps = list(operators.probe_morphisms(space, closure.obj("S2")))
    assert len(maps) == 2
    assert all(m.target == closure.obj("S2") for m in maps)


def test_kernel_class_contains_deflations(space, beta):
    """Test that the deflation of beta has a short exact kernel"""
    r = operators.kernel_class(space)
    assert r(beta.j) is Truth.TRUE
    assert r.contains(beta.j)


def test_greatest_exceeds_inherited(three_cycle_workspace):
    """Test a conflation of the smaller category that the larger one does not see"""
    x = three_cycle_workspace.hcomplex("X")
    inherited = three_cycle_workspace.structure("inh")
    assert not inherited.contains(x)
    assert all_structure(inherited.space).contains(x)
    assert greatest_structure(inherited.space).contains(x)


def test_lattice_labels(space):
    """Test every node of the A2 lattice carries its generated subfunctor labels"""
    result = substructure_lattice(all_structure(space))
    index = {x.a2[0]: i for i, x in enumerate(result.almost_split)}

    def node(*ends):
        return result.nodes[frozenset(index[e] for e in ends)]

    expected = {
        (): ["E_add P1", "E_add P2", "E^add SP1", "E^add SP2"],
        ("S2",): ["E_add S2"],
        ("SP1",): [],
        ("SP2",): ["E^add S2"],
        ("S2", "SP1"): ["E^add P1", "E_add SP1"],
        ("SP1", "SP2"): ["E^add P2", "E_add SP2"],
        ("S2", "SP2"): [],
        ("S2", "SP1", "SP2"): [],
    }
    for ends, labels in expected.items():
        assert sorted(node(*ends).labels) == sorted(labels)


def test_greatest_is_top_of_lattice(space, closure, alpha, beta, a2_workspace):
    """Test the greatest structure has the same conflations as the full defect support"""
    result = substructure_lattice(all_structure(space))
    top = result.nodes[frozenset(range(len(result.almost_split)))].structure
    greatest = greatest_structure(space)
    split = split_conflation(closure, alpha.a0, alpha.a2)
    for x in result.almost_split + [alpha, beta, split]:
        assert greatest.contains(x)
        assert top.contains(x)
    alpha0 = a2_workspace.hcomplex("alpha0")
    assert not greatest.contains(alpha0)
    assert not top.contains(alpha0)


@pytest.mark.parametrize("c,a,order", [("SP1", "P1", 2), ("SP2", "P2", 2), ("SP1", "P2", 2), ("SP2", "P1", 1)])
def test_ext_groups_count_paths(space, closure, c, a, order):
    """Test E(S P_i, P_j) has one class per path from i to j"""
    assert enumerate_conflations(space, closure.obj(c), closure.obj(a)).order == order


# Vertex dimensions of the kA2-modules in mod_a2.dgx
MODULE_DIMS = {"S2": (0, 1), "P1": (1, 1), "S1": (1, 0)}


def vertex_matrix(closure, m, v):
    """The linear map of a module morphism at vertex v"""
    rows = [t for t in m.target if MODULE_DIMS[t][v]]
    cols = [s for s in m.source if MODULE_DIMS[s][v]]
    row_of = {i: r for r, i in enumerate(i for i, t in enumerate(m.target) if MODULE_DIMS[t][v])}
    col_of = {i: c for c, i in enumerate(i for i, s in enumerate(m.source) if MODULE_DIMS[s][v])}
    data = [[0] * len(cols) for _ in rows]
    for t, s, off, dim in closure.blocks(m.source, m.target, 0):
        if dim and t in row_of and s in col_of:
            data[row_of[t]][col_of[s]] = int(m.vector[off])
    return np.array(data, dtype=np.int64).reshape(len(rows), len(cols))


def module_dim(x, v):
    return sum(MODULE_DIMS[s][v] for s in x)


def classical_exactness(f2, closure, x):
    """(A0 is the kernel of j, A2 is the cokernel of f) computed vertexwise"""
    kernel, cokernel = True, True
    for v in (0, 1):
        rf = rank(f2, f2.coerce(vertex_matrix(closure, x.f, v)))
        rj = rank(f2, f2.coerce(vertex_matrix(closure, x.j, v)))
        middle = rf == module_dim(x.a1, v) - rj
        kernel &= middle and rf == module_dim(x.a0, v)
        cokernel &= middle and rj == module_dim(x.a2, v)
    return kernel, cokernel


def test_module_exactness_matches_kernels(f2, fixture_path):
    """Test homotopy left and right exactness against kernels and cokernels of kA2-modules"""
    closure = parse_file(fixture_path("mod_a2.dgx")).closure("M")
    ends = closure.sums(1)
    seen = {True: 0, False: 0}
    for a0 in ends:
        for a1 in closure.sums(2):
            for a2 in ends:
                for fv in f2.vectors(closure.hom_dim(a0, a1, 0)):
                    f = closure.morphism(a0, a1, 0, fv)
                    for jv in f2.vectors(closure.hom_dim(a1, a2, 0)):
                        j = closure.morphism(a1, a2, 0, jv)
                        if not closure.compose(j, f).is_zero():
                            continue
                        x = ThreeTermH(closure, a0, a1, a2, f, j, closure.zero(a0, a2, -1))
                        kernel, cokernel = classical_exactness(f2, closure, x)
                        assert is_homotopy_left_exact(x, stop_early=True).holds == kernel
                        assert is_homotopy_right_exact(x, stop_early=True).holds == cokernel
                        seen[kernel and cokernel] += 1
    assert seen[True] and seen[False]


def classical_ext1(c, a):
    """dim Ext^1(C, A) from the projective resolution 0 -> P2 -> P1 -> S1"""
    if c != "S1":
        return 0
    dims = MODULE_DIMS[a]
    structure_map = 1 if dims == (1, 1) else 0
    return dims[1] - structure_map


def test_module_ext_groups_match_resolutions(fixture_path):
    """Test E(C, A) over mod kA2 against Ext^1 from projective resolutions"""
    closure = parse_file(fixture_path("mod_a2.dgx")).closure("M")
    space = SearchSpace.default(closure, sum_bound=1)
    for c in MODULE_DIMS:
        for a in MODULE_DIMS:
            group = enumerate_conflations(space, closure.obj(c), closure.obj(a))
            assert group.order == 2 ** classical_ext1(c, a)


def test_module_category_passes_axioms(fixture_path):
    """Test the axiom checks on all conflations of mod kA2"""
    closure = parse_file(fixture_path("mod_a2.dgx")).closure("M")
    report = verify_axioms(all_structure(SearchSpace.default(closure, sum_bound=1)), samples=9)
    assert report.passed
    assert report.pool_size == 10


def test_extriangulated_checks_on_composable_pair(space, alpha, beta):
    """Test ET3, its dual and ET4 on beta followed by alpha"""
    report = extriangulated_spot_check(all_structure(space), conflations=[beta, alpha])
    assert report.result("ET3").passed
    assert report.result("ET3^op").passed
    et4 = report.result("ET4")
    assert et4.passed
    assert et4.checked == 1


def test_et4_fails_without_composite_cokernel(space, alpha, beta):
    """Test ET4 reports the composite inflation of beta and alpha"""
    structure = deflation_class_structure(space, [alpha, beta], "Eab")
    et4 = extriangulated_spot_check(structure, conflations=[beta, alpha]).result("ET4")
    assert not et4.passed
    assert "cokernel" in et4.counterexample


def test_zero_class_is_realized_by_split_sequence(space):
    """Test s(0) on sampled groups"""
    report = extriangulated_spot_check(all_structure(space), samples=2, seed=1)
    assert report.result("s(0) split").passed
    assert report.result("s(0) split").checked == 2


def test_almost_split_conflations_satisfy_as2(space, closure):
    """Test pullbacks of almost split conflations along non-retractions split"""
    for x in almost_split_conflations(all_structure(space)):
        assert satisfies_as2(x, space)
    shift_p1 = enumerate_conflations(space, closure.obj("SP1"), closure.obj("P1")).classes[1]
    assert not satisfies_as2(shift_p1, space)


def test_pullback_and_pushforward_commute(space, closure, a2_workspace):
    """Test a_* c^* X = c^* a_* X for X in E(SP1, P1)"""
    hc = H0Category(closure, check=False)
    x = enumerate_conflations(space, closure.obj("SP1"), closure.obj("P1")).classes[1]
    c = hc.basis(closure.obj("S2"), closure.obj("SP1"))[0]
    a = hc.basis(closure.obj("P1"), closure.obj("P2"))[0]
    pulled, H = pullback(x, c, space)
    pushed, G = pushforward(x, a, space)
    calc = calculus(closure)
    assert calc.is_closed(H) and calc.is_closed(G)
    assert (pulled.a0, pulled.a2) == (x.a0, c.source)
    assert (pushed.a0, pushed.a2) == (a.target, x.a2)
    assert not is_split(pulled)
    assert not is_split(pushed)
    left, _ = pushforward(pulled, a, space)
    right, _ = pullback(pushed, c, space)
    assert are_equivalent(left, right)
    assert is_split(left)
    same, one = pullback(x, closure.identity(x.a2), space)
    assert same is x
    assert calc.is_isomorphism(one)


def test_inherited_structure_misses_ambient_square(three_cycle_workspace):
    """Test X is not bicartesian in the larger category but both its maps are stable"""
    x = three_cycle_workspace.hcomplex("X")
    inherited = three_cycle_workspace.structure("inh")
    ambient = inherited.ambient
    moved = transport(x, ambient.category)
    assert not is_homotopy_bicartesian(square_of(moved), ambient.probes.objects).holds
    space = inherited.space
    deflations = operators.p_operator(operators.kernel_class(space), space)
    inflations = operators.dual_class(operators.p_operator(operators.kernel_class(space.op()), space.op()))
    assert deflations(x.j) is Truth.TRUE
    assert inflations(x.f) is Truth.TRUE


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
