import json

import pytest
from hypothesis import given, settings, strategies as st

from ainf.ainfty import (
    AInftyCategory, AInftyFunctorData, DegreeRuleError, MalformedCategory, chain_associativity_defects,
    check_ainfty, check_functor, dagger, gaussian_contraction, homology_product, identity_functor,
    leibniz_defect, maltese, relation_terms, relation_value, transfer, verify_contraction,
)
from ainf.ainfty.adapters import from_pontryagin
from ainf.ainfty.fixtures import dg_fixture, mu3_fixture, square_with_tail, transferred_fixture
from ainf.pontryagin import PontryaginCategory, random_digraph

from oracles import bar_rejects


def point_algebra():
    """Z in degree 0 with mu2(1, 1) = 1."""
    return AInftyCategory(["o"], {"1": ("o", "o", 0)}, {2: {("1", "1"): {"1": 1}}})


def test_maltese_and_dagger_examples():
    assert maltese(0, [3, 1]) == 0
    assert maltese(1, [3, 1]) == 4
    assert maltese(2, [3, 1]) == 6
    assert dagger([1, 1, 1]) == 6
    assert dagger([0, 2]) == 4
    with pytest.raises(ValueError):
        maltese(3, [0, 0])


def test_point_algebra_is_associative():
    assert check_ainfty(point_algebra(), 4).ok


def test_flip_equivalent_to_rescaling_is_accepted():
    # mu2(1, 1) = -1 is the same algebra after sending 1 to -1
    C = point_algebra().with_flipped(2, ("1", "1"), "1")
    assert check_ainfty(C, 4).ok
    assert not bar_rejects(C, 4)


def test_flipped_product_witness():
    _, W, _, _ = mu3_fixture()
    D = W.with_flipped(3, ("c:f", "y:e4", "a:e3"), "a:s.f")
    rep = check_ainfty(D, 4)
    assert not rep.ok
    assert rep.witness["d"] == 3
    assert rep.witness["sum"]
    assert any(t["d1"] == 1 and t["d2"] == 3 for t in rep.witness["terms"])


def test_degree_rule_enforced():
    with pytest.raises(DegreeRuleError):
        AInftyCategory(["o"], {"x": ("o", "o", 0)}, {1: {("x",): {"x": 1}}})
    with pytest.raises(DegreeRuleError):
        AInftyCategory(["o"], {"x": ("o", "o", 0), "y": ("o", "o", 0)}, {3: {("x", "x", "x"): {"y": 1}}})
    # degree 2 - 3 = -1 is right for three degree-zero inputs
    AInftyCategory(["o"], {"x": ("o", "o", 0), "y": ("o", "o", -1)}, {3: {("x", "x", "x"): {"y": 1}}})


def test_noncomposable_entry_rejected():
    with pytest.raises(MalformedCategory):
        AInftyCategory(["a", "b"], {"x": ("a", "b", 0), "y": ("a", "b", 0)}, {2: {("y", "x"): {}}})
    with pytest.raises(MalformedCategory):
        AInftyCategory.from_json({"objects": ["a"]})


def test_arity_two_relation_is_leibniz():
    C = dg_fixture(2)
    for x2, x1 in C.composable(2):
        assert relation_value(C, (x2, x1)) == leibniz_defect(C, x2, x1)


def test_relation_terms_record_signs():
    A, W, F, c = mu3_fixture()
    xs = ("c:f", "y:e4", "a:e3")
    terms = relation_terms(W, xs)
    assert {(t["d1"], t["d2"]) for t in terms} <= {(1, 3), (2, 2), (3, 1)}
    assert not relation_value(W, xs)


def test_dg_fixtures_pass():
    for seed in range(4):
        assert check_ainfty(dg_fixture(seed), 4).ok


def test_pontryagin_adapter_with_loops():
    P = PontryaginCategory(random_digraph(3, n_vertices=2), max_len=2)
    C = from_pontryagin(P)
    rep = check_ainfty(C, 3)
    assert rep.ok
    assert all(C.degree(x) <= 0 for x in C.gens)


def test_report_is_minimal_failing_tuple():
    C = dg_fixture(1)
    key = next(iter(C.mu[2]))
    y = next(iter(C.mu[2][key]))
    D = C.with_flipped(2, key, y)
    rep = check_ainfty(D, 4, stop_at_first=False)
    assert not rep.ok
    first = rep.witness["tuple"]
    failing = [xs for d in range(1, 5) for xs in D.composable(d) if relation_value(D, xs)]
    assert failing[0] == tuple(first)
    assert rep.witness["failures"] == len(failing)


def test_json_round_trip():
    _, W, _, _ = mu3_fixture()
    V = AInftyCategory.from_json(json.loads(json.dumps(W.to_json())))
    assert V.gens == W.gens and V.mu == W.mu


# ---------------------------------------------------------------- oracle

def test_bar_oracle_agrees_on_flips_of_mu3_fixture():
    _, W, _, _ = mu3_fixture()
    assert not bar_rejects(W, 4)
    for d, key, y in W.structure_constants():
        D = W.with_flipped(d, key, y)
        assert not check_ainfty(D, 4).ok
        assert bar_rejects(D, 4)


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10**4), st.integers(0, 10**6))
def test_bar_oracle_agrees_on_random_flips(seed, pick):
    W, _ = transferred_fixture(seed)
    sc = W.structure_constants()
    d, key, y = sc[pick % len(sc)]
    D = W.with_flipped(d, key, y)
    assert check_ainfty(D, 4).ok == (not bar_rejects(D, 4))


# ---------------------------------------------------------------- transfer

def test_contraction_identities():
    A, W, F, c = mu3_fixture()
    assert verify_contraction(A, c).ok
    full = gaussian_contraction(A)
    assert verify_contraction(A, full).ok
    assert all(not v for v in full.d.values())


def test_bad_pivot_rejected():
    A = mu3_fixture()[0]
    with pytest.raises(ValueError):
        gaussian_contraction(A, pairs=[("a:s", "c:f")])


def test_mu3_fixture_values():
    A, W, F, c = mu3_fixture()
    assert W.mu[3] == {("c:f", "y:e4", "a:e3"): {"a:s.f": 1}}
    assert check_ainfty(W, 4).ok
    assert check_functor(F, 4).ok


def test_mu3_fixture_chain_vs_homology_associativity():
    _, W, _, _ = mu3_fixture()
    assert chain_associativity_defects(W) == [("c:f", "y:e4", "a:e3")]
    hp = homology_product(W)
    assert hp["associative"]
    assert not hp["chain_level_associative_on_representatives"]


def test_dg_chain_product_is_associative_up_to_sign():
    assert chain_associativity_defects(dg_fixture(0)) == []


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**5))
def test_transfer_is_ainfty_with_functor(seed):
    W, F = transferred_fixture(seed)
    assert W.mu.get(3), "fixture should carry a nonzero mu3"
    assert check_ainfty(W, 4).ok
    assert check_functor(F, 4, "paper-literal").ok


def test_full_transfer_to_homology():
    A = dg_fixture(0)
    W, F, c = transfer(A, 4)
    assert check_ainfty(W, 4).ok
    assert check_functor(F, 4).ok
    assert homology_product(W)["associative"]


# ---------------------------------------------------------------- functors

def test_identity_functor_passes_both_modes():
    for C in (dg_fixture(1), mu3_fixture()[1]):
        F = identity_functor(C)
        assert check_functor(F, 4, "paper-literal").ok
        assert check_functor(F, 4, "koszul").ok


def test_doubled_identity_fails_at_two():
    C = dg_fixture(1)
    F = AInftyFunctorData(C, C, {o: o for o in C.objects}, {1: {(x,): {x: 2} for x in C.gens}})
    rep = check_functor(F, 4)
    assert not rep.ok and rep.witness["d"] == 2


def test_functor_degree_rule():
    C = point_algebra()
    with pytest.raises(DegreeRuleError):
        AInftyFunctorData(C, C, {"o": "o"}, {2: {("1", "1"): {"1": 1}}})


def test_unknown_convention():
    with pytest.raises(ValueError):
        check_functor(identity_functor(point_algebra()), 2, "other")


def test_functor_json_round_trip():
    _, W, F, _ = mu3_fixture()
    G = AInftyFunctorData.from_json(json.loads(json.dumps(F.to_json())))
    assert G.F == F.F
    assert check_functor(G, 4).ok


def test_perturbed_functor_component_detected():
    _, W, F, _ = mu3_fixture()
    table = {d: {k: dict(v) for k, v in t.items()} for d, t in F.F.items()}
    key = next(iter(table[2]))
    y = next(iter(table[2][key]))
    table[2][key][y] *= -1
    G = AInftyFunctorData(F.source, F.target, F.object_map, table)
    assert not check_functor(G, 4).ok


def test_square_with_tail_model():
    m = square_with_tail()
    assert set(m.squares) == {"s"}
