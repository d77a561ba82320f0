from __future__ import annotations

import random

import pytest

from conftest import random_vector
from hermlie.connections import (
    CANONICAL,
    LEVI_CIVITA,
    canonical_connection,
    covariant_derivative,
    f_tensor,
    fundamental_relation_check,
    levi_civita,
    torsion,
)
from hermlie.scalars import ZERO, gauss, rat
from hermlie.structures import anti_part, holo_part, nijenhuis, nijenhuis_tensor
from hermlie.tensors import basis_vector, vec_is_zero, vec_scale

# Levi-Civita tables over the raw frame Z_i = X_i - i J X_i, as
# coefficient dictionaries {(direction i, argument j): {k: coeff of
# conj(Z_k)}}; all other frame derivatives vanish.  Entries are fixed by
# the Koszul formula; torsion-freeness ties each (i,j)/(j,i) pair to the
# bracket table, which pins every sign.
IWASAWA_G0_TABLE = {
    (0, 1): {2: 1},
    (1, 0): {2: -1},
    (2, 0): {1: -1},
    (0, 2): {1: -1},
    (2, 1): {0: 1},
    (1, 2): {0: 1},
}

IWASAWA_ALT_TABLE = {
    (0, 0): {1: -2},
    (1, 0): {2: -2},
    (0, 1): {0: 2},
    (2, 1): {2: -2},
    (1, 2): {0: 2},
    (2, 2): {1: 2},
}


def _check_table(triple, table):
    lc = levi_civita(triple)
    frame = triple.frame()
    Z = frame.vectors
    Zb = frame.conj_vectors()
    n = frame.n
    for i in range(n):
        for j in range(n):
            # mixed derivatives vanish identically
            assert vec_is_zero(lc.derive(Zb[i], Z[j]))
            expected = [ZERO] * triple.alg.dim
            for k, coeff in table.get((i, j), {}).items():
                expected = [
                    e + gauss(coeff) * x for e, x in zip(expected, Zb[k])
                ]
            assert lc.derive(Z[i], Z[j]) == tuple(expected)


def test_levi_civita_iwasawa_g0_table(iwasawa):
    _check_table(iwasawa, IWASAWA_G0_TABLE)


def test_levi_civita_iwasawa_alt_table(iwasawa_alt):
    _check_table(iwasawa_alt, IWASAWA_ALT_TABLE)


def test_levi_civita_specific_entries(iwasawa, iwasawa_alt):
    # D_{Z_2} Z_1 = -conj(Z_3) on the first structure,
    # D_{Z_1} Z_1 = -2 conj(Z_2) on the second
    f0 = iwasawa.frame()
    lc0 = levi_civita(iwasawa)
    assert lc0.derive(f0.vectors[1], f0.vectors[0]) == vec_scale(
        -1, f0.conj_vectors()[2]
    )
    f1 = iwasawa_alt.frame()
    lc1 = levi_civita(iwasawa_alt)
    assert lc1.derive(f1.vectors[0], f1.vectors[0]) == vec_scale(
        -2, f1.conj_vectors()[1]
    )


def test_levi_civita_abelian_vanishes(flat_torus_6):
    assert levi_civita(flat_torus_6).gamma.is_zero()


def test_levi_civita_is_metric_and_torsion_free(all_fixtures):
    for triple in all_fixtures.values():
        lc = levi_civita(triple)
        dim = triple.alg.dim
        tor, _ = torsion(lc, triple.alg)
        assert tor.is_zero()
        for a in range(dim):
            for b in range(dim):
                eb = basis_vector(dim, b)
                for u in range(dim):
                    eu = basis_vector(dim, u)
                    s = triple.g.pair(lc.derive_basis(a, eb), eu) + triple.g.pair(
                        eb, lc.derive_basis(a, eu)
                    )
                    assert not s


def test_koszul_identity_on_random_vectors(iwasawa):
    # 2 g(D_v w, u) = g([v,w],u) - g([w,u],v) + g([u,v],w)
    rng = random.Random(11)
    lc = levi_civita(iwasawa)
    alg, g = iwasawa.alg, iwasawa.g
    for _ in range(10):
        v, w, u = (random_vector(rng, 6) for _ in range(3))
        lhs = gauss(2) * g.pair(lc.derive(v, w), u)
        rhs = (
            g.pair(alg.bracket(v, w), u)
            - g.pair(alg.bracket(w, u), v)
            + g.pair(alg.bracket(u, v), w)
        )
        assert lhs == rhs


def test_canonical_equals_levi_civita_when_kahler(flat_torus_6):
    lc = levi_civita(flat_torus_6)
    can = canonical_connection(flat_torus_6, lc)
    assert can.gamma == lc.gamma
    assert can.flavor == CANONICAL and can.canonical_certified


def test_canonical_kills_frame_on_curvature_flat_structures(iwasawa, iwasawa_alt):
    for triple in (iwasawa, iwasawa_alt):
        lc = levi_civita(triple)
        can = canonical_connection(triple, lc)
        frame = triple.frame()
        for v in list(frame.vectors) + list(frame.conj_vectors()):
            for z in frame.vectors:
                assert vec_is_zero(can.derive(v, z))


def test_canonical_differs_but_kills_11_torsion_on_kodaira_thurston(
    kodaira_thurston,
):
    t = kodaira_thurston
    lc = levi_civita(t)
    can = canonical_connection(t, lc)
    assert can.gamma != lc.gamma
    tor, t11 = torsion(can, t.alg, t.frame())
    assert not tor.is_zero()
    assert t11.is_zero()


def test_canonical_preserves_metric_and_j(all_fixtures):
    for triple in all_fixtures.values():
        lc = levi_civita(triple)
        can = canonical_connection(triple, lc)
        dim = triple.alg.dim
        nabla_j = covariant_derivative(can, triple.J)
        assert nabla_j.is_zero()
        nabla_omega = covariant_derivative(can, triple.omega_form())
        assert nabla_omega.is_zero()
        for a in range(dim):
            for b in range(dim):
                eb = basis_vector(dim, b)
                for u in range(dim):
                    eu = basis_vector(dim, u)
                    s = triple.g.pair(can.derive_basis(a, eb), eu) + triple.g.pair(
                        eb, can.derive_basis(a, eu)
                    )
                    assert not s


def test_canonical_torsion_11_vanishes_on_quasi_kahler(all_fixtures):
    for triple in all_fixtures.values():
        lc = levi_civita(triple)
        can = canonical_connection(triple, lc)
        _, t11 = torsion(can, triple.alg, triple.frame())
        assert t11.is_zero()


def test_levi_civita_torsion_is_zero_tensor(iwasawa):
    tor, t11 = torsion(levi_civita(iwasawa), iwasawa.alg, iwasawa.frame())
    assert tor.is_zero() and t11.is_zero()


def test_fund1_mixed_derivative_is_holomorphic(all_fixtures):
    # quasi Kahler: D_{conj(Z_i)} Z_j has no (0,1)-part
    for triple in all_fixtures.values():
        lc = levi_civita(triple)
        frame = triple.frame()
        for zb in frame.conj_vectors():
            for z in frame.vectors:
                d = lc.derive(zb, z)
                assert vec_is_zero(anti_part(triple.J, d))


def test_fund2_on_almost_kahler(kodaira_thurston, flat_torus_6):
    # almost Kahler: g(D_{Z_i} Z_j, Z_k) = g(N(Z_j, Z_k), Z_i) / 4
    for triple in (kodaira_thurston, flat_torus_6):
        lc = levi_civita(triple)
        frame = triple.frame()
        Z = frame.vectors
        for i in range(frame.n):
            for j in range(frame.n):
                for k in range(frame.n):
                    lhs = triple.g.pair(lc.derive(Z[i], Z[j]), Z[k])
                    rhs = triple.g.pair(nijenhuis(triple, Z[j], Z[k]), Z[i]) / 4
                    assert lhs == rhs


def test_nabla_j_vanishes_on_kahler(flat_torus_4):
    lc = levi_civita(flat_torus_4)
    assert covariant_derivative(lc, flat_torus_4.J).is_zero()


def test_nabla_omega_equals_half_nijenhuis_pairing(kodaira_thurston):
    # almost Kahler identity: (D_v omega)(w, u) = g(N(w, u), J v) / 2,
    # both sides computed independently on all basis triples
    t = kodaira_thurston
    lc = levi_civita(t)
    nabla_omega = covariant_derivative(lc, t.omega_form())
    nt = nijenhuis_tensor(t)
    dim = 4
    for a in range(dim):
        jea = t.J.apply(basis_vector(dim, a))
        for b in range(dim):
            for c in range(dim):
                nbc = tuple(nt[(k, b, c)] for k in range(dim))
                assert nabla_omega[(a, b, c)] == t.g.pair(nbc, jea) / 2


def test_f_tensor_antisymmetry_and_formula(iwasawa, iwasawa_alt):
    # F(X,Y,Z,W) = -F(X,Z,Y,W), and on frames with the normalized pattern
    # F(conj(Z_i), Z_j, Z_k, conj(Z_l)) = 4 g([Z_j, Z_k], D_{conj(Z_i)} conj(Z_l))
    for triple in (iwasawa, iwasawa_alt):
        lc = levi_civita(triple)
        F = f_tensor(triple, lc)
        dim = triple.alg.dim
        for a in range(dim):
            for b in range(dim):
                for c in range(dim):
                    for d in range(dim):
                        assert F[(a, b, c, d)] == -F[(a, c, b, d)]
        frame = triple.frame()
        from hermlie.structures import frame_block

        fb = frame_block(F, frame, "czzc")
        Z, Zb = frame.vectors, frame.conj_vectors()
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    for l in range(3):
                        rhs = gauss(4) * triple.g.pair(
                            triple.alg.bracket(Z[j], Z[k]), lc.derive(Zb[i], Zb[l])
                        )
                        assert fb[(i, j, k, l)] == rhs


def test_fundamental_relation_all_fixtures(all_fixtures):
    for triple in all_fixtures.values():
        assert fundamental_relation_check(triple, levi_civita(triple)) == []


def test_connection_sparse_table_round_trip(iwasawa):
    lc = levi_civita(iwasawa)
    table = lc.sparse_table()
    for (a, b), comps in table.items():
        for c, v in comps.items():
            assert lc.gamma[(a, b, c)] == v
    total = sum(len(comps) for comps in table.values())
    assert total == sum(1 for x in lc.gamma.data if x)
