from __future__ import annotations

import random

import pytest

from conftest import random_gauss, random_vector
from hermlie import fixtures
from hermlie.errors import NotTamed
from hermlie.lie import LieAlgebra
from hermlie.scalars import I, ZERO, gauss, rat
from hermlie.structures import (
    AlmostComplexStructure,
    HermitianTriple,
    InvariantForm,
    InvariantMetric,
    anti_part,
    classify,
    d_omega,
    dual_one_form,
    exterior_derivative,
    frame_block,
    holo_part,
    metric_from_taming,
    nijenhuis,
    nijenhuis_tensor,
    pq_decompose,
    standard_10_frame,
    wedge,
)
from hermlie.tensors import Tensor, basis_vector, vec_is_zero, vec_scale


def test_taming_iwasawa_standard_form_gives_identity(iwasawa):
    omega = InvariantForm.from_components(6, 2, {(0, 3): 1, (1, 4): 1, (2, 5): 1})
    g = metric_from_taming(iwasawa.alg, iwasawa.J, omega)
    assert g.g == iwasawa.g.g


def test_taming_compatible_form_returns_same_metric(kodaira_thurston):
    t = kodaira_thurston
    g = metric_from_taming(t.alg, t.J, t.omega_form())
    assert g.g == t.g.g


def test_taming_negative_form_fails(iwasawa):
    omega = InvariantForm.from_components(
        6, 2, {(0, 3): -1, (1, 4): -1, (2, 5): -1}
    )
    with pytest.raises(NotTamed):
        metric_from_taming(iwasawa.alg, iwasawa.J, omega)


def test_standard_frame_iwasawa(iwasawa):
    frame = iwasawa.frame()
    for i, z in enumerate(frame.vectors):
        expected = tuple(
            gauss(1) if k == i else (-I if k == i + 3 else ZERO) for k in range(6)
        )
        assert z == expected
    gram = frame.gram
    assert gram == Tensor.from_function(
        (3, 3), lambda a, b: gauss(2) if a == b else ZERO, kinds=gram.kinds
    )


def test_standard_frame_dim_two():
    alg = LieAlgebra.from_brackets(2, {})
    J = AlmostComplexStructure(Tensor.from_nested([[0, -1], [1, 0]]))
    triple = HermitianTriple(alg, J, Tensor.from_nested([[1, 0], [0, 1]]))
    frame = triple.frame()
    assert frame.vectors == ((gauss(1), -I),)


def test_standard_frame_kodaira_thurston(kodaira_thurston):
    frame = kodaira_thurston.frame()
    assert frame.vectors[0] == (gauss(1), ZERO, -I, ZERO)
    assert frame.vectors[1] == (ZERO, gauss(1), ZERO, -I)
    # eigen-property
    for z in frame.vectors:
        jz = kodaira_thurston.J.apply(z)
        assert jz == tuple(I * x for x in z)


def test_nijenhuis_mixed_pair_vanishes(iwasawa):
    frame = iwasawa.frame()
    zb = frame.conj_vectors()
    for i in range(3):
        for j in range(3):
            assert vec_is_zero(nijenhuis(iwasawa, frame.vectors[i], zb[j]))


def test_nijenhuis_abelian_integrable(flat_torus_6):
    rng = random.Random(3)
    for _ in range(5):
        v, w = random_vector(rng, 6), random_vector(rng, 6)
        assert vec_is_zero(nijenhuis(flat_torus_6, v, w))


def test_nijenhuis_holomorphic_pair_value(iwasawa):
    # N(Z_1, Z_2) = -4 [Z_1, Z_2] = -8 conj(Z_3)
    frame = iwasawa.frame()
    z1, z2 = frame.vectors[0], frame.vectors[1]
    n12 = nijenhuis(iwasawa, z1, z2)
    assert n12 == vec_scale(-4, iwasawa.alg.bracket(z1, z2))
    z3bar = frame.conj_vectors()[2]
    assert n12 == vec_scale(-8, z3bar)


def test_nijenhuis_of_two_holomorphic_is_antiholomorphic(all_fixtures):
    # N(Z_i, Z_j) has vanishing (1,0)-part
    for triple in all_fixtures.values():
        frame = triple.frame()
        for i in range(frame.n):
            for j in range(frame.n):
                nv = nijenhuis(triple, frame.vectors[i], frame.vectors[j])
                assert vec_is_zero(holo_part(triple.J, nv))


def test_exterior_derivative_abelian(flat_torus_4):
    for a in range(4):
        assert exterior_derivative(flat_torus_4.alg, dual_one_form(4, a)).is_zero()


def test_structure_equations_iwasawa_alt(iwasawa_alt):
    # the listed coframe equations: d(alpha_2) = d(alpha_5) = 0, and
    # d(alpha_1) = d(alpha_3) = -a12 + a45 - a23 + a56,
    # d(alpha_4) = d(alpha_6) = -a24 + a15 - a35 + a26
    alg = iwasawa_alt.alg
    d1 = exterior_derivative(alg, dual_one_form(6, 0))
    d2 = exterior_derivative(alg, dual_one_form(6, 1))
    d3 = exterior_derivative(alg, dual_one_form(6, 2))
    d4 = exterior_derivative(alg, dual_one_form(6, 3))
    d5 = exterior_derivative(alg, dual_one_form(6, 4))
    d6 = exterior_derivative(alg, dual_one_form(6, 5))
    assert d2.is_zero() and d5.is_zero()
    expected1 = InvariantForm.from_components(
        6, 2, {(0, 1): -1, (3, 4): 1, (1, 2): -1, (4, 5): 1}
    )
    expected4 = InvariantForm.from_components(
        6, 2, {(1, 3): -1, (0, 4): 1, (2, 4): -1, (1, 5): 1}
    )
    assert d1 == expected1 and d3 == expected1
    assert d4 == expected4 and d6 == expected4


def test_d_omega_iwasawa_has_pure_type_three(iwasawa):
    dom = d_omega(iwasawa)
    assert not dom.is_zero()
    parts = pq_decompose(iwasawa, dom)
    assert parts[(1, 2)].is_zero() and parts[(2, 1)].is_zero()
    assert not parts[(3, 0)].is_zero() and not parts[(0, 3)].is_zero()


def test_pq_parts_sum_and_conjugacy(all_fixtures):
    for triple in all_fixtures.values():
        dom = d_omega(triple)
        parts = pq_decompose(triple, dom)
        total = None
        for form in parts.values():
            total = form if total is None else total + form
        assert total == dom
        assert parts[(0, 3)] == parts[(3, 0)].conjugate()


def test_omega_is_pure_one_one(iwasawa):
    parts = pq_decompose(iwasawa, iwasawa.omega_form())
    assert not parts[(1, 1)].is_zero()
    assert parts[(2, 0)].is_zero() and parts[(0, 2)].is_zero()
    assert parts[(1, 1)] == iwasawa.omega_form()


def test_coframe_wedge_is_pure_type(iwasawa):
    frame = iwasawa.frame()
    zetas = [InvariantForm(Tensor((6,), list(z))) for z in frame.coframe()]
    top = wedge(wedge(zetas[0], zetas[1]), zetas[2])
    parts = pq_decompose(iwasawa, top)
    assert not parts[(3, 0)].is_zero()
    for key, form in parts.items():
        if key != (3, 0):
            assert form.is_zero()


def test_coframe_duality(iwasawa):
    frame = iwasawa.frame()
    zetas = frame.coframe()
    for i, zeta in enumerate(zetas):
        form = InvariantForm(Tensor((6,), list(zeta)))
        for j, z in enumerate(frame.vectors):
            assert form(z) == (gauss(1) if i == j else ZERO)
        for z in frame.conj_vectors():
            assert form(z) == ZERO


def test_classification_flags(all_fixtures):
    expected = {
        "iwasawa_g0": (False, False, False, True),
        "iwasawa_alt": (False, False, False, True),
        "kodaira_thurston": (False, False, True, True),
        "flat_torus_4": (True, True, True, True),
        "flat_torus_6": (True, True, True, True),
    }
    for name, triple in all_fixtures.items():
        flags = classify(triple)
        assert (
            flags["integrable"],
            flags["kahler"],
            flags["almost_kahler"],
            flags["quasi_kahler"],
        ) == expected[name]


def test_classification_chain_on_random_samples():
    from hermlie.search import sample_triple

    for idx in range(12):
        for kind in ("quasi_kahler", "almost_kahler", "flat_abelian"):
            triple = sample_triple(4 if idx % 2 else 6, "chain", idx, kind)
            flags = classify(triple)
            assert not flags["kahler"] or flags["almost_kahler"]
            assert not flags["almost_kahler"] or flags["quasi_kahler"]
            assert flags["kahler"] == (flags["almost_kahler"] and flags["integrable"])


def test_d_squared_zero_on_random_forms(all_fixtures):
    rng = random.Random(17)
    for triple in all_fixtures.values():
        dim = triple.alg.dim
        one = InvariantForm(Tensor((dim,), [random_gauss(rng) for _ in range(dim)]))
        assert exterior_derivative(triple.alg, exterior_derivative(triple.alg, one)).is_zero()
        two = InvariantForm.from_components(
            dim,
            2,
            {
                (a, b): random_gauss(rng)
                for a in range(dim)
                for b in range(a + 1, dim)
                if rng.random() < 0.5
            },
        )
        dd = exterior_derivative(triple.alg, exterior_derivative(triple.alg, two))
        assert dd.is_zero()


def test_pq_decomposition_of_d_respects_types(iwasawa):
    # d of an (r,s)-form only has parts (r+2,s-1), (r+1,s), (r,s+1), (r-1,s+2)
    rng = random.Random(23)
    two = InvariantForm.from_components(
        6,
        2,
        {(a, b): random_gauss(rng) for a in range(6) for b in range(a + 1, 6)},
    )
    for (r, s), part in pq_decompose(iwasawa, two).items():
        if part.is_zero():
            continue
        dpart = exterior_derivative(iwasawa.alg, part)
        allowed = {(r + 2, s - 1), (r + 1, s), (r, s + 1), (r - 1, s + 2)}
        for (p, q), piece in pq_decompose(iwasawa, dpart).items():
            if not piece.is_zero():
                assert (p, q) in allowed


def test_holo_anti_projectors(iwasawa):
    rng = random.Random(31)
    J = iwasawa.J
    for _ in range(10):
        v = random_vector(rng, 6)
        h, a = holo_part(J, v), anti_part(J, v)
        assert tuple(x + y for x, y in zip(h, a)) == v
        assert J.apply(h) == tuple(I * x for x in h)
        assert J.apply(a) == tuple(-I * x for x in a)
