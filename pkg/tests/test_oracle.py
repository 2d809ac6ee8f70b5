import math

import pytest

from hamdual.graph import complete_graph, cycle_graph, generate, path_graph, petersen_graph
from hamdual.oracle import (
    OracleUnresolved,
    backtracking,
    count_hamiltonian_cycles,
    held_karp,
    is_hamiltonian_exact,
)
from hamdual.decider import verify_certificate

from oracles import permutation_cycle_count, permutation_hamiltonian


def test_methods_agree_on_all_small_graphs(small_connected):
    for n in (3, 4, 5, 6):
        for g in small_connected[n]:
            truth = permutation_hamiltonian(g)
            for res in (held_karp(g), backtracking(g)):
                assert res.is_hamiltonian == truth
                if truth:
                    assert verify_certificate(g, res.cycle)


@pytest.mark.parametrize("seed", range(25))
def test_methods_agree_on_random_graphs(seed):
    n = 7 + seed % 2
    g = generate("gnp", {"n": n, "p": "1/2"}, seed)
    truth = permutation_hamiltonian(g)
    assert held_karp(g).is_hamiltonian == backtracking(g).is_hamiltonian == truth
    assert count_hamiltonian_cycles(g) == permutation_cycle_count(g)


def test_examples():
    res = is_hamiltonian_exact(complete_graph(4))
    assert res.is_hamiltonian and verify_certificate(complete_graph(4), res.cycle)
    assert not is_hamiltonian_exact(petersen_graph()).is_hamiltonian
    assert not is_hamiltonian_exact(petersen_graph(), "backtracking").is_hamiltonian
    assert not is_hamiltonian_exact(path_graph(3)).is_hamiltonian
    assert is_hamiltonian_exact(cycle_graph(12), "backtracking").cycle is not None


def test_counts():
    assert count_hamiltonian_cycles(complete_graph(4)) == 3
    assert count_hamiltonian_cycles(cycle_graph(5)) == 1
    assert count_hamiltonian_cycles(path_graph(3)) == 0
    for n in range(3, 7):
        assert count_hamiltonian_cycles(complete_graph(n)) == math.factorial(n - 1) // 2
    assert count_hamiltonian_cycles(petersen_graph()) == 0


def test_unresolved_budget():
    with pytest.raises(OracleUnresolved) as info:
        backtracking(petersen_graph(), node_budget=3)
    assert info.value.expanded >= 3


def test_bad_method():
    with pytest.raises(ValueError):
        is_hamiltonian_exact(complete_graph(3), "guess")


def test_json_shape():
    assert is_hamiltonian_exact(path_graph(3)).to_json()["cycle"] is None
