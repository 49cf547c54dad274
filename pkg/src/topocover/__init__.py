"""Termination certificates for general recursion via inductively generated formal topologies."""
from .axioms import (
    IndexedAxiomSet, SingletonAxiomSet, axioms_from_json, choice_axioms, fib_axioms,
    from_graph, from_indexed_graph, from_relation, succ_axioms, transform_axioms,
)
from .cover import (
    Covered, Inf, LassoWitness, Refl, Uncovered, UncoveredSetWitness, Unknown, axiom_condition,
    bar_leaves, check_proof, check_witness, derive, explain_proof, no_self_membership, pi,
    transitivity,
)
from .elements import Atom, Nat, Tuple, compare, decode, encode
from .positivity import NotPositive, Positive, PositivityUnknown, check_coinduction, infinite_chain, positivity
from .recursion import (
    Divergence, Functional, NondetFunctional, OracleTable, enumerate_outcomes, eval_certified,
    eval_extracted, eval_relative, fib_functional,
)
from .subsets import EMPTY, UNIVERSAL, Comparator, Compound, Finite, member

__version__ = "0.1.0"

__all__ = [
    "IndexedAxiomSet",
    "SingletonAxiomSet",
    "axioms_from_json",
    "choice_axioms",
    "fib_axioms",
    "from_graph",
    "from_indexed_graph",
    "from_relation",
    "succ_axioms",
    "transform_axioms",
    "Covered",
    "Inf",
    "LassoWitness",
    "Refl",
    "Uncovered",
    "UncoveredSetWitness",
    "Unknown",
    "axiom_condition",
    "bar_leaves",
    "check_proof",
    "check_witness",
    "derive",
    "explain_proof",
    "no_self_membership",
    "pi",
    "transitivity",
    "Atom",
    "Nat",
    "Tuple",
    "compare",
    "decode",
    "encode",
    "NotPositive",
    "Positive",
    "PositivityUnknown",
    "check_coinduction",
    "infinite_chain",
    "positivity",
    "Divergence",
    "Functional",
    "NondetFunctional",
    "OracleTable",
    "enumerate_outcomes",
    "eval_certified",
    "eval_extracted",
    "eval_relative",
    "fib_functional",
    "EMPTY",
    "UNIVERSAL",
    "Comparator",
    "Compound",
    "Finite",
    "member",
]
