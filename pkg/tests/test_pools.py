import itertools

import numpy as np
import pytest
from scipy.linalg import expm

from adapt_forge.pauli import number_operator, sz_operator
from adapt_forge.pools import (
    KINDS,
    POOL_KINDS,
    PoolOperator,
    build_generator,
    canonical_indices,
    cnot_cost,
    equivalent_indices,
    generate_pool,
    parse_pool_dump,
    symmetry_admissible,
)

QUARTETS = [(0, 1, 2, 3), (1, 0, 3, 2), (0, 3, 4, 1), (5, 2, 1, 4)]


def _index_sets(kind):
    return [(0, 2), (1, 5), (3, 1)] if kind.endswith("1") else QUARTETS


@pytest.mark.parametrize("kind", KINDS)
def test_generators_antihermitian_with_cubic_relation(kind):
    for idx in _index_sets(kind):
        tau = build_generator(kind, idx, 6)
        assert tau.is_antihermitian()
        t = tau.to_dense()
        assert np.allclose(t @ t @ t, -t, atol=1e-12), (kind, idx)


@pytest.mark.parametrize("kind", KINDS)
def test_admissible_generators_conserve_n_and_sz(kind):
    n = 6
    N, Sz = number_operator(n).to_dense(), sz_operator(n).to_dense()
    for idx in _index_sets(kind):
        if not symmetry_admissible(kind, idx):
            continue
        t = build_generator(kind, idx, n).to_dense()
        assert np.allclose(t @ N, N @ t) and np.allclose(t @ Sz, Sz @ t)


def test_sqeb_is_sum_of_two_kappas_and_pairs_average_to_kappa():
    n = 4
    for p, q, r, s in [(0, 1, 2, 3), (2, 0, 3, 1)]:
        k1 = build_generator("QEB2", (p, q, r, s), n)
        k2 = build_generator("QEB2", (q, r, s, p), n)
        tau = build_generator("SQEB2", (p, q, r, s), n)
        assert tau.allclose(k1 + k2)
        other = build_generator("SQEB2", (q, p, s, r), n)
        assert ((tau + other) * 0.5).allclose(k1)
        assert (tau * other - other * tau).simplify(1e-12).is_zero()
        # kappa^{ps}_{rq} = -kappa^{qr}_{sp}
        assert build_generator("QEB2", (p, s, r, q), n).allclose(-1 * k2)


def test_equivalent_indices_name_the_same_generator():
    for kind in ("QEB2", "FEB2", "SQEB2", "SFEB2", "QEB1", "FEB1"):
        idx = (0, 1, 2, 3) if kind.endswith("2") else (0, 2)
        ref = build_generator(kind, idx, 4).to_dense()
        for alt in equivalent_indices(kind, idx):
            t = build_generator(kind, alt, 4).to_dense()
            assert np.allclose(t, ref) or np.allclose(t, -ref), (kind, alt)
        assert canonical_indices(kind, idx) == min(equivalent_indices(kind, idx))


def test_cnot_costs():
    assert cnot_cost("QEB1", (0, 2)) == 2
    assert cnot_cost("QEB2", (0, 1, 2, 3)) == 13
    assert cnot_cost("SQEB2", (5, 2, 1, 4)) == 9
    assert cnot_cost("FEB1", (0, 4)) == 9
    assert cnot_cost("FEB2", (0, 1, 2, 3)) == 13
    assert cnot_cost("FEB2", (0, 3, 4, 9)) == 2 * (3 + 5) + 9
    assert cnot_cost("SFEB2", (0, 3, 4, 9)) == 2 * (3 + 5) + 5
    with pytest.raises(ValueError):
        cnot_cost("ZZZ", (0, 1))


@pytest.mark.parametrize("bad", [("QEB2", (0, 1, 2)), ("QEB2", (0, 1, 1, 2)), ("QEB1", (0, 9)), ("XEB1", (0, 1))])
def test_bad_generator_requests(bad):
    with pytest.raises(ValueError):
        build_generator(bad[0], bad[1], 4)


def test_h2_pools():
    labels = {k: [op.label for op in generate_pool(k, 2, 2)] for k in POOL_KINDS}
    assert labels["qeb"] == ["QEB1(0,2)", "QEB1(1,3)", "QEB2(0,1,2,3)"]
    assert labels["sqeb"] == ["QEB1(0,2)", "QEB1(1,3)", "SQEB2(0,1,2,3)", "SQEB2(1,0,3,2)"]
    assert labels["sfeb"][:2] == ["FEB1(0,2)", "FEB1(1,3)"]


@pytest.mark.parametrize("kind", sorted(POOL_KINDS))
def test_pools_are_deterministic_unique_and_admissible(kind):
    a, b = generate_pool(kind, 4, 4), generate_pool(kind, 4, 4)
    assert a.dump() == b.dump()
    keys = [(op.kind, op.indices) for op in a]
    assert len(set(keys)) == len(keys)
    assert all(symmetry_admissible(op.kind, op.indices) for op in a)
    assert parse_pool_dump(a.dump(), 8).dump() == a.dump()
    n_single = sum(op.kind.endswith("1") for op in a)
    assert all(op.kind.endswith("1") for op in list(a)[:n_single])


def test_generalized_pool_contains_restricted():
    r = {(o.kind, o.indices) for o in generate_pool("qeb", 3, 2)}
    g = {(o.kind, o.indices) for o in generate_pool("qeb", 3, 2, "generalized")}
    assert r < g


def test_simplified_pools_double_the_doubles_count():
    # every spin-conserving quartet splits into two independent simplified terms
    for norb, nelec in [(4, 4), (6, 4)]:
        d_qeb = sum(o.kind == "QEB2" for o in generate_pool("qeb", norb, nelec))
        d_sqeb = sum(o.kind == "SQEB2" for o in generate_pool("sqeb", norb, nelec))
        assert d_sqeb > d_qeb


def test_pool_operator_exponential_matches_expm():
    op = PoolOperator.make("sqeb2", (0, 1, 2, 3), 4)
    assert op.kind == "SQEB2" and op.cnot_cost == 9 and op.n_qubits == 4
    t = op.generator.to_dense()
    for theta in (0.2, -1.3):
        closed = np.eye(16) + np.sin(theta) * t + (1 - np.cos(theta)) * t @ t
        assert np.allclose(expm(theta * t), closed, atol=1e-12)


def test_pool_argument_validation():
    with pytest.raises(ValueError):
        generate_pool("xyz", 2, 2)
    with pytest.raises(ValueError):
        generate_pool("qeb", 2, 2, mode="odd")
    with pytest.raises(ValueError):
        generate_pool("qeb", 2, 5)
