import random

import pytest

from topocover.axioms import fib_axioms, from_graph, from_indexed_graph, succ_axioms, transform_axioms
from topocover.cover import (
    Covered, Inf, LassoWitness, Refl, Uncovered, UncoveredSetWitness, Unknown, axiom_condition,
    bar_leaves, check_proof, check_witness, derive, explain_proof, no_self_membership, pi,
    proof_from_json, proof_height, proof_size, proof_to_json, result_to_json, transitivity,
    witness_from_json, witness_to_json,
)
from topocover.elements import Atom, Nat, decode
from topocover.errors import (
    CertificateFormatError, ImpossibleRefl, IndexOutOfRange, InvalidInput, MissingLeafProof, NotAChild,
)
from topocover.subsets import EMPTY, UNIVERSAL, Comparator, Finite

from conftest import random_graph
from oracles import has_reachable_cycle, reachable

a, b, c = Atom("a"), Atom("b"), Atom("c")
N = Nat


def corpus(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        nodes, graph = random_graph(rng)
        yield rng, nodes, graph


# -- checking ---------------------------------------------------------------

def test_check_proof_examples():
    assert check_proof(fib_axioms(), EMPTY, N(0), Inf(N(0), 0, ()))
    assert check_proof(from_graph({}), Finite.of(a), a, Refl(a))
    assert not check_proof(from_graph({a: [b]}), EMPTY, a, Inf(a, 0, ()))


def test_check_proof_rejections_carry_a_path():
    s = from_graph({a: [b, c], b: [], c: [b]})
    good = Inf(a, 0, (Inf(b, 0, ()), Inf(c, 0, (Inf(b, 0, ()),))))
    assert explain_proof(s, EMPTY, a, good) is None
    bad = Inf(a, 0, (Inf(b, 0, ()), Inf(c, 0, ())))
    failure = explain_proof(s, EMPTY, a, bad)
    assert failure.path == (a, c)
    assert not check_proof(s, EMPTY, b, good)  # wrong root
    assert not check_proof(s, EMPTY, a, Inf(a, 1, good.children))  # bad index
    assert not check_proof(s, EMPTY, b, Refl(b))  # b not in U


# -- derive -----------------------------------------------------------------

def test_derive_self_loop():
    assert derive(from_graph({a: [a]}), EMPTY, a) == Uncovered(LassoWitness((), (a,)))


def test_derive_fib_two_frozen():
    expected = Inf(N(2), 0, (Inf(N(0), 0, ()), Inf(N(1), 0, ())))
    assert derive(fib_axioms(), EMPTY, N(2)) == Covered(expected)


def test_reflexivity_preempts_search():
    assert derive(from_graph({a: [a]}), Finite.of(a), a) == Covered(Refl(a))
    assert derive(succ_axioms(), Comparator("ge", 0), N(4)) == Covered(Refl(N(4)))


def test_derive_budget_gives_unknown():
    r = derive(succ_axioms(), EMPTY, N(0), budget=50)
    assert isinstance(r, Unknown) and r.budget == 50 and r.explored > 50
    assert derive(succ_axioms(), Comparator("ge", 40), N(0), budget=50) != r


def test_derive_lasso_with_stem():
    s = from_graph({a: [b], b: [c], c: [b]})
    r = derive(s, EMPTY, a)
    assert r == Uncovered(LassoWitness((a,), (b, c)))
    assert check_witness(s, EMPTY, a, r.witness)


def test_deep_chain_does_not_hit_recursion_limit():
    r = derive(succ_axioms(), Comparator("ge", 50_000), N(0), budget=100_000)
    assert isinstance(r, Covered)
    assert proof_height(r.proof) == 50_000
    assert check_proof(succ_axioms(), Comparator("ge", 50_000), N(0), r.proof)


def test_fib_certificate_is_shared_and_small():
    r = derive(fib_axioms(), EMPTY, N(90))
    assert isinstance(r, Covered)
    assert check_proof(fib_axioms(), EMPTY, N(90), r.proof)
    assert proof_size(r.proof) > 10**18  # as a tree; traversals must share nodes


def test_derive_soundness_and_oracle_equivalence():
    for rng, nodes, graph in corpus(1, 300):
        s = from_graph(graph)
        for root in nodes:
            r = derive(s, EMPTY, root)
            assert not isinstance(r, Unknown)
            if isinstance(r, Covered):
                assert check_proof(s, EMPTY, root, r.proof)
                assert no_self_membership(s, root)
            else:
                assert check_witness(s, EMPTY, root, r.witness)
            assert isinstance(r, Covered) == (not has_reachable_cycle(graph, root))


def test_budget_boundary_is_distinct_elements():
    for _, nodes, graph in corpus(2, 100):
        s = from_graph(graph)
        root = nodes[0]
        size = len(reachable(graph, root))
        assert not isinstance(derive(s, EMPTY, root, budget=size), Unknown)
        if size > 1:
            short = derive(s, EMPTY, root, budget=size - 1)
            # an early cycle can end the search before everything is seen
            assert isinstance(short, (Unknown, Uncovered))


def test_general_u_soundness_and_cut_equivalence():
    for rng, nodes, graph in corpus(3, 300):
        s = from_graph(graph)
        u = Finite(tuple(x for x in nodes if rng.random() < 0.2))
        t = transform_axioms(s, u)
        for root in nodes:
            r = derive(s, u, root)
            r2 = derive(t, EMPTY, root)
            assert isinstance(r, Covered) == isinstance(r2, Covered)
            if isinstance(r, Covered):
                assert check_proof(s, u, root, r.proof)
                assert check_proof(t, EMPTY, root, r2.proof)
                v = bar_leaves(r.proof)
                assert set(v.elements) <= set(u.elements)
                assert check_proof(s, v, root, r.proof)
                assert isinstance(derive(s, v, root), Covered)
            else:
                assert check_witness(s, u, root, r.witness)


# -- indexed derive ---------------------------------------------------------

def test_indexed_existential_choice():
    # a can go to b (dead end, terminates) or to a itself
    s = from_indexed_graph({a: [[a], [b]], b: [[]]})
    r = derive(s, EMPTY, a)
    assert r == Covered(Inf(a, 1, (Inf(b, 0, ()),)))
    s = from_indexed_graph({a: [[a], [a, b]], b: [[]]})
    r = derive(s, EMPTY, a)
    assert isinstance(r, Uncovered) and isinstance(r.witness, UncoveredSetWitness)
    assert r.witness.elements == (a,)
    assert check_witness(s, EMPTY, a, r.witness)


def test_indexed_no_indexes_is_uncovered():
    s = from_indexed_graph({a: []})
    r = derive(s, EMPTY, a)
    assert r == Uncovered(UncoveredSetWitness((a,)))


def indexed_oracle_covered(ig, u, root):
    """Naive least fixed point over all nodes, recomputed from scratch each round."""
    covered = set()
    while True:
        new = {x for x in ig if x in u or any(all(y in covered for y in kids) for kids in ig[x])}
        if new == covered:
            return root in covered
        covered = new


def test_indexed_matches_naive_fixpoint():
    rng = random.Random(4)
    for _ in range(300):
        n = rng.randint(1, 12)
        nodes = [N(i) for i in range(n)]
        ig = {x: [sorted(set(rng.sample(nodes, rng.randint(0, min(3, n)))))
                  for _ in range(rng.randint(0, 3))] for x in nodes}
        s = from_indexed_graph(ig)
        u = set(x for x in nodes if rng.random() < 0.15)
        us = Finite(tuple(u))
        for root in nodes:
            r = derive(s, us, root)
            assert isinstance(r, Covered) == indexed_oracle_covered(ig, u, root)
            if isinstance(r, Covered):
                assert check_proof(s, us, root, r.proof)
            else:
                assert check_witness(s, us, root, r.witness)


# -- admissible rules -------------------------------------------------------

def test_axiom_condition_examples():
    fib = fib_axioms()
    p = axiom_condition(fib, N(2), 0)
    assert p == Inf(N(2), 0, (Refl(N(0)), Refl(N(1))))
    assert check_proof(fib, Finite.of(N(0), N(1)), N(2), p)
    s = from_graph({a: [b]})
    assert axiom_condition(s, b, 0) == Inf(b, 0, ())
    assert check_proof(s, EMPTY, b, Inf(b, 0, ()))
    assert axiom_condition(s, a, 0) == Inf(a, 0, (Refl(b),))
    with pytest.raises(IndexOutOfRange):
        axiom_condition(s, a, 1)


def test_transitivity_examples():
    s = from_graph({a: [b], b: []})
    q = Inf(a, 0, (Inf(b, 0, ()),))
    assert transitivity(s, Finite.of(a), EMPTY, Refl(a), {a: q}) == q
    assert transitivity(s, EMPTY, Finite.of(c), Inf(b, 0, ()), {}) == Inf(b, 0, ())
    fib = fib_axioms()
    p = axiom_condition(fib, N(2), 0)
    g = {N(0): Inf(N(0), 0, ()), N(1): Inf(N(1), 0, ())}
    out = transitivity(fib, Finite.of(N(0), N(1)), EMPTY, p, g)
    assert out == Inf(N(2), 0, (Inf(N(0), 0, ()), Inf(N(1), 0, ())))
    assert check_proof(fib, EMPTY, N(2), out)


def test_transitivity_errors():
    fib = fib_axioms()
    p = axiom_condition(fib, N(2), 0)
    u = Finite.of(N(0), N(1))
    with pytest.raises(MissingLeafProof):
        transitivity(fib, u, EMPTY, p, {N(0): Inf(N(0), 0, ())})
    with pytest.raises(InvalidInput):
        transitivity(fib, EMPTY, EMPTY, p, {})
    with pytest.raises(InvalidInput):
        transitivity(fib, u, EMPTY, p, {N(0): Inf(N(0), 0, ()), N(1): Refl(N(1))})


def test_pi_examples_and_errors():
    fib = fib_axioms()
    q0, q1 = Inf(N(0), 0, ()), Inf(N(1), 0, ())
    p = Inf(N(2), 0, (q0, q1))
    assert pi(fib, N(2), p, N(1)) is q1
    assert pi(fib, N(2), p, N(0)) is q0
    s = from_graph({a: [b]})
    q = Inf(b, 0, ())
    assert pi(s, a, Inf(a, 0, (q,)), b) is q
    with pytest.raises(ImpossibleRefl):
        pi(s, a, Refl(a), b)
    with pytest.raises(NotAChild):
        pi(fib, N(2), p, N(3))


def test_pi_totality_on_corpus():
    for _, nodes, graph in corpus(5, 200):
        s = from_graph(graph)
        for root in nodes:
            r = derive(s, EMPTY, root)
            if isinstance(r, Covered):
                for y in s.children(root):
                    q = pi(s, root, r.proof, y)
                    assert check_proof(s, EMPTY, y, q)


def test_bar_leaves_examples():
    assert bar_leaves(Inf(a, 0, ())) == Finite()
    assert bar_leaves(Refl(a)) == Finite.of(a)
    assert bar_leaves(Inf(a, 0, (Refl(b), Inf(c, 0, (Refl(b),))))) == Finite.of(b)


def test_no_self_membership_examples():
    assert no_self_membership(fib_axioms(), N(5))
    assert isinstance(derive(from_graph({a: [a]}), EMPTY, a), Uncovered)
    assert no_self_membership(from_graph({a: []}), a)


# -- serialisation ----------------------------------------------------------

def test_proof_json_shape_and_round_trip():
    p = derive(fib_axioms(), EMPTY, N(3)).proof
    obj = proof_to_json(p)
    assert obj["element"] == "3" and obj["rule"] == "inf" and obj["index"] == 0
    assert proof_to_json(Refl(a)) == {"element": "a", "rule": "refl"}
    assert proof_from_json(obj) == p
    for bad in [{}, {"element": "1", "rule": "weird"}, {"element": "(", "rule": "refl"},
                {"element": "1", "rule": "inf", "index": 0}, []]:
        with pytest.raises(CertificateFormatError):
            proof_from_json(bad)


def test_witness_json_round_trip():
    w = LassoWitness((a,), (b, c))
    assert witness_to_json(w) == {"lasso": {"stem": ["a"], "cycle": ["b", "c"]}}
    assert witness_from_json(witness_to_json(w)) == w
    w = UncoveredSetWitness((b, a))
    assert witness_to_json(w) == {"uncoveredSet": ["a", "b"]}
    assert witness_from_json(witness_to_json(w)) == w


def test_result_envelope():
    env = result_to_json(derive(from_graph({a: [a]}), EMPTY, a), EMPTY, a)
    assert env == {"query": {"u": {"finite": []}, "root": "a"}, "result": "uncovered",
                   "witness": {"lasso": {"stem": [], "cycle": ["a"]}}}
    env = result_to_json(derive(succ_axioms(), EMPTY, N(0), budget=5), UNIVERSAL, N(0))
    assert env["result"] == "unknown" and env["budget"] == 5
    env = result_to_json(derive(fib_axioms(), EMPTY, N(1)), EMPTY, N(1))
    assert env["certificate"] == {"element": "1", "rule": "inf", "index": 0, "children": []}
    assert decode(env["query"]["root"]) == N(1)
