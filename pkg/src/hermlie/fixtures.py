"""Built-in example structures.

``iwasawa_g0`` is the standard quasi Kahler structure on the Iwasawa
nilmanifold (the compact quotient of the complex Heisenberg group); its
canonical-connection curvature vanishes identically.  ``iwasawa_alt`` is
a second, non-equivalent structure on the same manifold with the same
property, stated here over the real basis (the table is derived from its
complex-frame brackets ``[Z_1,Z_2] = [Z_2,Z_3] = 2(conj(Z_1)+conj(Z_3))``
and cross-checked against the coframe structure equations).
``kodaira_thurston`` is the 4-dimensional strictly almost Kahler
nilmanifold; the flat tori are the abelian Kahler baselines.
"""

from __future__ import annotations

from .errors import UnknownExample
from .lie import LieAlgebra
from .structures import (
    AlmostComplexStructure,
    HermitianTriple,
    InvariantForm,
    metric_from_taming,
)
from .tensors import Tensor


def _standard_j(dim: int) -> Tensor:
    """J pairing ``X_a`` with ``X_{a+n}``: ``J X_a = X_{a+n}``,
    ``J X_{a+n} = -X_a``."""
    n = dim // 2
    rows = [[0] * dim for _ in range(dim)]
    for a in range(n):
        rows[a + n][a] = 1
        rows[a][a + n] = -1
    return Tensor.from_nested(rows)


def _identity(dim: int) -> Tensor:
    return Tensor.from_nested(
        [[1 if a == b else 0 for b in range(dim)] for a in range(dim)]
    )


# sparse bracket tables, 0-based, a < b
_IWASAWA_G0_BRACKETS = {
    (0, 1): {2: 1},
    (3, 4): {2: -1},
    (1, 3): {5: 1},
    (4, 0): {5: 1},
}

_IWASAWA_ALT_BRACKETS = {
    (0, 1): {0: 1, 2: 1},
    (1, 2): {0: 1, 2: 1},
    (3, 4): {0: -1, 2: -1},
    (4, 5): {0: -1, 2: -1},
    (1, 3): {3: 1, 5: 1},
    (0, 4): {3: -1, 5: -1},
    (1, 5): {3: -1, 5: -1},
    (2, 4): {3: 1, 5: 1},
}

_KODAIRA_THURSTON_BRACKETS = {(0, 1): {2: 1}}


def _normalize(brackets: dict) -> dict:
    out = {}
    for (a, b), comps in brackets.items():
        if a < b:
            out[(a, b)] = dict(comps)
        else:
            out[(b, a)] = {k: -v for k, v in comps.items()}
    return out


def iwasawa_g0() -> HermitianTriple:
    alg = LieAlgebra.from_brackets(6, _normalize(_IWASAWA_G0_BRACKETS))
    return HermitianTriple(alg, _standard_j(6), _identity(6))


def iwasawa_alt() -> HermitianTriple:
    alg = LieAlgebra.from_brackets(6, _normalize(_IWASAWA_ALT_BRACKETS))
    return HermitianTriple(alg, _standard_j(6), _identity(6))


def kodaira_thurston() -> HermitianTriple:
    alg = LieAlgebra.from_brackets(4, _normalize(_KODAIRA_THURSTON_BRACKETS))
    J = AlmostComplexStructure(_standard_j(4))
    omega = InvariantForm.from_components(4, 2, {(0, 2): 1, (1, 3): 1})
    g = metric_from_taming(alg, J, omega)
    return HermitianTriple(alg, J, g)


def flat_torus(dim: int) -> HermitianTriple:
    alg = LieAlgebra.from_brackets(dim, {})
    return HermitianTriple(alg, _standard_j(dim), _identity(dim))


BUILTIN_NAMES = (
    "iwasawa_g0",
    "iwasawa_alt",
    "kodaira_thurston",
    "flat_torus_4",
    "flat_torus_6",
)


def builtin_triple(name: str) -> HermitianTriple:
    if name == "iwasawa_g0":
        return iwasawa_g0()
    if name == "iwasawa_alt":
        return iwasawa_alt()
    if name == "kodaira_thurston":
        return kodaira_thurston()
    if name == "flat_torus_4":
        return flat_torus(4)
    if name == "flat_torus_6":
        return flat_torus(6)
    raise UnknownExample(f"no builtin example named {name!r}")


def builtin_raw_document(name: str) -> dict:
    """The document (wire format) for a builtin example."""
    if name not in BUILTIN_NAMES:
        raise UnknownExample(f"no builtin example named {name!r}")
    if name == "iwasawa_g0":
        dim, brackets = 6, _IWASAWA_G0_BRACKETS
    elif name == "iwasawa_alt":
        dim, brackets = 6, _IWASAWA_ALT_BRACKETS
    elif name == "kodaira_thurston":
        dim, brackets = 4, _KODAIRA_THURSTON_BRACKETS
    else:
        dim, brackets = int(name.rsplit("_", 1)[1]), {}
    doc = {
        "name": name,
        "dim": dim,
        "brackets": {
            f"[{min(a, b) + 1},{max(a, b) + 1}]": {
                str(k + 1): str(v if a < b else -v) for k, v in comps.items()
            }
            for (a, b), comps in brackets.items()
        },
        "J": [[str(x) for x in row] for row in _standard_j(dim).nested()],
    }
    if name == "kodaira_thurston":
        omega = [[0] * dim for _ in range(dim)]
        omega[0][2], omega[2][0] = 1, -1
        omega[1][3], omega[3][1] = 1, -1
        doc["omega"] = [[str(x) for x in row] for row in omega]
    else:
        doc["g"] = "identity"
    return doc
