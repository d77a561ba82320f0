from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_gauss, random_rational, random_vector
from hermlie.errors import JacobiViolation, NotAntisymmetric
from hermlie.lie import (
    NOT_NILPOTENT,
    FrameChange,
    LieAlgebra,
    bracket,
    change_frame,
    jacobi_check,
    nilpotency_step,
)
from hermlie.scalars import I, ZERO, gauss, rat
from hermlie.tensors import Tensor, basis_vector, vec_is_zero, vec_scale, vec_sub


def test_iwasawa_basis_brackets(iwasawa):
    alg = iwasawa.alg
    e = lambda k: basis_vector(6, k)
    assert bracket(alg, e(0), e(1)) == e(2)  # [X1, X2] = X3
    assert bracket(alg, e(3), e(4)) == vec_scale(-1, e(2))  # [X4, X5] = -X3
    assert bracket(alg, e(1), e(3)) == e(5)  # [X2, X4] = X6
    assert bracket(alg, e(4), e(0)) == e(5)  # [X5, X1] = X6
    assert vec_is_zero(bracket(alg, e(0), e(2)))


def test_abelian_brackets_vanish(flat_torus_6):
    rng = random.Random(1)
    alg = flat_torus_6.alg
    for _ in range(10):
        v = random_vector(rng, 6)
        w = random_vector(rng, 6)
        assert vec_is_zero(bracket(alg, v, w))


def test_iwasawa_complexified_bracket(iwasawa):
    # Z_i = X_i - i X_{i+3}: [Z_1, Z_2] = 2 conj(Z_3)
    alg = iwasawa.alg
    z1 = tuple(gauss(1) if k == 0 else (-I if k == 3 else ZERO) for k in range(6))
    z2 = tuple(gauss(1) if k == 1 else (-I if k == 4 else ZERO) for k in range(6))
    z3bar = tuple(gauss(1) if k == 2 else (I if k == 5 else ZERO) for k in range(6))
    assert bracket(alg, z1, z2) == vec_scale(2, z3bar)


def test_bracket_bilinear_antisymmetric(iwasawa):
    rng = random.Random(7)
    alg = iwasawa.alg
    for _ in range(20):
        v, w, u = (random_vector(rng, 6) for _ in range(3))
        c = random_gauss(rng)
        assert bracket(alg, v, w) == vec_scale(-1, bracket(alg, w, v))
        lhs = bracket(alg, vec_sub(vec_scale(c, v), vec_scale(-1, u)), w)
        rhs = tuple(
            c * a + b for a, b in zip(bracket(alg, v, w), bracket(alg, u, w))
        )
        assert lhs == rhs


def test_jacobi_check_passes_on_fixtures(all_fixtures):
    for triple in all_fixtures.values():
        assert jacobi_check(triple.alg.c) == []


def test_jacobi_check_zero_constants():
    assert jacobi_check(Tensor.zeros((4, 4, 4))) == []


def test_jacobi_violation_derived_case():
    # [X1,X2]=X1, [X2,X3]=X2, [X3,X1]=X3: the cyclic sum at (X1,X2,X3) is
    # [X1,X3] + [X2,X1] + [X3,X2] = -(X1 + X2 + X3)
    dim = 3
    flat = [ZERO] * 27
    entries = {(0, 0, 1): 1, (1, 1, 2): 1, (2, 2, 0): 1}
    for (k, a, b), v in entries.items():
        flat[(k * dim + a) * dim + b] = gauss(v)
        flat[(k * dim + b) * dim + a] = gauss(-v)
    c = Tensor((3, 3, 3), flat)
    violations = jacobi_check(c)
    assert len(violations) == 1
    (triple_idx, defect) = violations[0]
    assert triple_idx == (0, 1, 2)
    assert defect == (gauss(-1), gauss(-1), gauss(-1))
    with pytest.raises(JacobiViolation):
        LieAlgebra(c)


def test_jacobi_check_requires_antisymmetry():
    flat = [ZERO] * 27
    flat[(0 * 3 + 0) * 3 + 1] = gauss(1)  # c^0_{01} without the mirror entry
    with pytest.raises(NotAntisymmetric):
        jacobi_check(Tensor((3, 3, 3), flat))


def test_nilpotency_abelian(flat_torus_4):
    assert nilpotency_step(flat_torus_4.alg) == 1


def test_nilpotency_iwasawa(iwasawa, iwasawa_alt, kodaira_thurston):
    assert nilpotency_step(iwasawa.alg) == 2
    assert nilpotency_step(iwasawa_alt.alg) == 2
    assert nilpotency_step(kodaira_thurston.alg) == 2


def test_nilpotency_solvable_not_nilpotent():
    alg = LieAlgebra.from_brackets(3, {(0, 1): {1: 1}})
    assert nilpotency_step(alg) == NOT_NILPOTENT


def test_three_step_example():
    # [X1,X2]=X3, [X1,X3]=X4 is 3-step nilpotent (and Jacobi-valid)
    alg = LieAlgebra.from_brackets(4, {(0, 1): {2: 1}, (0, 2): {3: 1}})
    assert nilpotency_step(alg) == 3


def test_change_frame_identity(iwasawa):
    f = FrameChange(Tensor.from_function((6, 6), lambda a, b: gauss(1) if a == b else ZERO))
    assert change_frame(iwasawa.alg, f) == iwasawa.alg.c


def test_change_frame_permutation(iwasawa):
    # swapping X1 and X2 flips the sign of the X3 component
    perm = [[0] * 6 for _ in range(6)]
    order = [1, 0, 2, 3, 4, 5]
    for j, src in enumerate(order):
        perm[src][j] = 1
    f = FrameChange(Tensor.from_nested(perm))
    c2 = change_frame(iwasawa.alg, f)
    assert c2[(2, 0, 1)] == gauss(-1)  # [X2, X1] = -X3
    assert c2[(5, 0, 3)] == gauss(1)  # [X2, X4] = X6


def test_change_frame_round_trip(iwasawa):
    rng = random.Random(99)
    from hermlie.tensors import determinant, invert_rows

    while True:
        rows = [[random_gauss(rng, span=2) for _ in range(6)] for _ in range(6)]
        rows = [[gauss(x.re) for x in row] for row in rows]  # keep it real
        if determinant(rows):
            break
    f = FrameChange(Tensor.from_nested(rows))
    c2 = change_frame(iwasawa.alg, f)
    alg2 = LieAlgebra(c2)
    back = FrameChange(Tensor.from_nested(invert_rows(rows)))
    assert change_frame(alg2, back) == iwasawa.alg.c
    # nilpotency is invariant under real frame changes
    assert nilpotency_step(alg2) == 2


def test_change_frame_transported_bracket_consistency(iwasawa):
    # bracket computed in either frame agrees after transport
    rng = random.Random(5)
    from hermlie.tensors import determinant, mat_vec

    while True:
        rows = [[gauss(random_rational(rng, 2)) for _ in range(6)] for _ in range(6)]
        if determinant(rows):
            break
    f = FrameChange(Tensor.from_nested(rows))
    alg2 = LieAlgebra(change_frame(iwasawa.alg, f))
    for a in range(6):
        for b in range(6):
            va, vb = f.column(a), f.column(b)
            direct = iwasawa.alg.bracket(va, vb)
            transported = mat_vec(
                [[rows[i][j] for j in range(6)] for i in range(6)],
                alg2.bracket_basis(a, b),
            )
            assert direct == transported
