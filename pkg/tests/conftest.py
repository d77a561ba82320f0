from __future__ import annotations

import random

import pytest

from hermlie import fixtures
from hermlie.lie import LieAlgebra
from hermlie.scalars import GaussianRational, rat
from hermlie.structures import AlmostComplexStructure, HermitianTriple, InvariantMetric
from hermlie.tensors import Tensor


@pytest.fixture(scope="session")
def iwasawa():
    return fixtures.iwasawa_g0()


@pytest.fixture(scope="session")
def iwasawa_alt():
    return fixtures.iwasawa_alt()


@pytest.fixture(scope="session")
def kodaira_thurston():
    return fixtures.kodaira_thurston()


@pytest.fixture(scope="session")
def flat_torus_4():
    return fixtures.flat_torus(4)


@pytest.fixture(scope="session")
def flat_torus_6():
    return fixtures.flat_torus(6)


@pytest.fixture(scope="session")
def all_fixtures(iwasawa, iwasawa_alt, kodaira_thurston, flat_torus_4, flat_torus_6):
    return {
        "iwasawa_g0": iwasawa,
        "iwasawa_alt": iwasawa_alt,
        "kodaira_thurston": kodaira_thurston,
        "flat_torus_4": flat_torus_4,
        "flat_torus_6": flat_torus_6,
    }


@pytest.fixture(scope="session")
def hyperbolic_plane():
    """Integrable Kahler surface with nonzero curvature: the solvable
    algebra [X1, X2] = X2 with the standard J and metric."""
    alg = LieAlgebra.from_brackets(2, {(0, 1): {1: 1}})
    J = AlmostComplexStructure(Tensor.from_nested([[0, -1], [1, 0]]))
    g = InvariantMetric(Tensor.from_nested([[1, 0], [0, 1]]))
    return HermitianTriple(alg, J, g)


def random_rational(rng: random.Random, span: int = 3):
    return rat(rng.randrange(-span, span + 1), rng.randrange(1, 4))


def random_gauss(rng: random.Random, span: int = 3) -> GaussianRational:
    return GaussianRational(random_rational(rng, span), random_rational(rng, span))


def random_vector(rng: random.Random, dim: int, complex_entries: bool = True):
    if complex_entries:
        return tuple(random_gauss(rng) for _ in range(dim))
    return tuple(GaussianRational(random_rational(rng), 0) for _ in range(dim))
