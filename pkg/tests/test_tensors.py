from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_gauss
from hermlie.errors import ShapeMismatch, Singular
from hermlie.scalars import GaussianRational, ZERO, gauss, rat
from hermlie.tensors import (
    Kind,
    Tensor,
    conjugate_tensor,
    contract,
    contract_self,
    determinant,
    invert_matrix,
    invert_rows,
    mat_vec,
    nullspace,
    rank_of,
    solve_with_certificate,
    transform_axes,
)


def identity(n):
    return Tensor.from_function((n, n), lambda a, b: gauss(1) if a == b else ZERO)


def test_invert_identity():
    assert invert_matrix(identity(6)) == identity(6)


def test_invert_diagonal():
    d = Tensor.from_nested([[2, 0], [0, 2]])
    assert invert_matrix(d) == Tensor.from_nested([[rat(1, 2), 0], [0, rat(1, 2)]])


def test_invert_singular():
    with pytest.raises(Singular):
        invert_matrix(Tensor.from_nested([[1, 2], [2, 4]]))


def test_invert_random_matrices_multiply_back_to_identity():
    # the invariant asks for 1000 random nonsingular matrices
    rng = random.Random(20240)
    done = 0
    while done < 1000:
        n = rng.choice((2, 3, 4))
        m = Tensor.from_function(
            (n, n), lambda a, b: random_gauss(rng, span=4)
        )
        if not determinant(m.nested()):
            continue
        inv = invert_matrix(m)
        assert contract(m, inv, [(1, 0)]) == identity(n)
        assert contract(inv, m, [(1, 0)]) == identity(n)
        done += 1


def test_contract_simple_inner_product():
    v = Tensor((3,), [1, 0, 0])
    assert contract(v, v, [(0, 0)], weights=[identity(3)]) == gauss(1)


def test_trace_of_diagonal():
    d = Tensor.from_nested([[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    assert contract_self(d, 0, 1) == gauss(6)
    assert contract(d, identity(3), [(0, 0), (1, 1)]) == gauss(6)


def test_weighted_trace_matches_double_loop_oracle(iwasawa):
    # g^{ab} r_{ab} computed by contract equals a naive double loop
    from hermlie.curvature import riemann_curvature, scalar_invariants

    inv = scalar_invariants(riemann_curvature(iwasawa), iwasawa)
    r = inv["ricci"]
    ginv = Tensor.from_nested(iwasawa.g.inverse)
    via_contract = contract(r, ginv, [(0, 0), (1, 1)])
    naive = ZERO
    for a in range(6):
        for b in range(6):
            naive = naive + r[(a, b)] * ginv[(a, b)]
    assert via_contract == naive == gauss(inv["s"])


def test_contract_shape_mismatch():
    v = Tensor((3,), [1, 0, 0])
    w = Tensor((4,), [1, 0, 0, 0])
    with pytest.raises(ShapeMismatch):
        contract(v, w, [(0, 0)])


def test_contract_kind_inheritance():
    t = Tensor.zeros((2, 3), kinds=(Kind.HOLO, Kind.ANTI))
    u = Tensor.zeros((3, 2), kinds=(Kind.HOLO, Kind.REAL))
    out = contract(t, u, [(1, 0)])
    assert out.kinds == (Kind.HOLO, Kind.REAL)


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_contract_bilinearity(seed):
    rng = random.Random(seed)
    dims = (2, 3)
    t1 = Tensor.from_function(dims, lambda a, b: random_gauss(rng))
    t2 = Tensor.from_function(dims, lambda a, b: random_gauss(rng))
    u = Tensor.from_function((3, 2), lambda a, b: random_gauss(rng))
    c = random_gauss(rng)
    lhs = contract(t1.scale(c) + t2, u, [(1, 0)])
    rhs = contract(t1, u, [(1, 0)]).scale(c) + contract(t2, u, [(1, 0)])
    assert lhs == rhs


def test_conjugate_real_tensor_fixed():
    t = Tensor.from_nested([[1, 2], [3, 4]])
    assert conjugate_tensor(t) == t


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_conjugate_involution(seed):
    rng = random.Random(seed)
    t = Tensor.from_function(
        (2, 2, 2), lambda a, b, c: random_gauss(rng), kinds=(Kind.HOLO, Kind.ANTI, Kind.REAL)
    )
    back = conjugate_tensor(conjugate_tensor(t))
    assert back == t and back.kinds == t.kinds


def test_conjugate_flips_kinds_and_maps_bracket_coefficients(iwasawa):
    # coefficients of [Z_i, Z_j] over the conjugate frame: conjugation
    # carries the [Z_1, Z_2] = 2 conj(Z_3) component to
    # [conj(Z_1), conj(Z_2)] = 2 Z_3
    frame = iwasawa.frame()
    n = frame.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            co = frame.coefficients(iwasawa.alg.bracket(frame.vectors[i], frame.vectors[j]))
            row.append(list(co[n:]))  # anti-holomorphic components
        rows.append(row)
    t = Tensor.from_nested(rows, kinds=(Kind.HOLO, Kind.HOLO, Kind.ANTI))
    assert t[(0, 1, 2)] == gauss(2)
    conj = conjugate_tensor(t)
    assert conj.kinds == (Kind.ANTI, Kind.ANTI, Kind.HOLO)
    assert conj[(0, 1, 2)] == gauss(2)
    # and directly: [conj(Z_1), conj(Z_2)] = 2 Z_3
    zb = frame.conj_vectors()
    co = frame.coefficients(iwasawa.alg.bracket(zb[0], zb[1]))
    assert co[2] == gauss(2) and not any(co[n:])


def test_permute_axes():
    t = Tensor.from_nested([[1, 2], [3, 4]])
    assert t.permute((1, 0))[(0, 1)] == t[(1, 0)]


def test_transform_axes_matches_direct_evaluation():
    rng = random.Random(5)
    t = Tensor.from_function((3, 3), lambda a, b: random_gauss(rng))
    v = tuple(random_gauss(rng) for _ in range(3))
    w = tuple(random_gauss(rng) for _ in range(3))
    out = transform_axes(t, [[v], [w]])
    direct = ZERO
    for a in range(3):
        for b in range(3):
            direct = direct + v[a] * w[b] * t[(a, b)]
    assert out[(0, 0)] == direct


def test_solver_and_certificate():
    one = gauss(1)
    rows = [[one, one], [one, one]]
    sol, cert = solve_with_certificate(rows, [gauss(2), gauss(3)])
    assert sol is None
    # certificate: y.A = 0 but y.b != 0
    assert cert is not None
    lhs = [cert[0] * rows[0][j] + cert[1] * rows[1][j] for j in range(2)]
    assert not any(lhs)
    assert cert[0] * gauss(2) + cert[1] * gauss(3)

    sol, cert = solve_with_certificate(rows, [gauss(2), gauss(2)])
    assert cert is None
    assert sol is not None
    assert sol[0] + sol[1] == gauss(2)


def test_rank_and_nullspace():
    one = gauss(1)
    rows = [[one, one, ZERO], [ZERO, ZERO, one]]
    assert rank_of(rows) == 2
    basis = nullspace(rows)
    assert len(basis) == 1
    v = basis[0]
    assert not any(mat_vec(rows, v))


def test_tensor_immutability_and_validation():
    t = Tensor((2,), [1, 2])
    with pytest.raises(AttributeError):
        t.dims = (3,)
    with pytest.raises(ShapeMismatch):
        Tensor((2, 2), [1, 2, 3])
    with pytest.raises(ShapeMismatch):
        Tensor((2,) * 5, [0] * 32)
