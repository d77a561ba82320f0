"""Almost complex structures, compatible metrics, fundamental forms,
(1,0)-frames, the Nijenhuis tensor, and the invariant exterior calculus
with (p,q) type decomposition.

Everything is left-invariant, so a structure is a finite pile of rational
matrices and all calculus reduces to exact structure-constant algebra.
Frames are deliberately *not* unitary: the raw vectors ``Z = X - iJX``
give a hermitian gram of ``2 Id`` for orthonormal ``X``, which keeps all
data rational; downstream formulas contract with the inverse gram instead
of assuming unit length.
"""

from __future__ import annotations

from itertools import combinations, permutations

from .errors import (
    JSquaredNotMinusIdentity,
    MetricNotPositiveDefinite,
    NotTamed,
    OddDimension,
    ShapeMismatch,
)
from .lie import LieAlgebra
from .scalars import I, ZERO, GaussianRational, gauss
from .tensors import (
    Kind,
    Tensor,
    determinant,
    invert_rows,
    mat_mul,
    mat_vec,
    row_reduce,
    transform_axes,
    vec_is_zero,
    vec_scale,
    vec_sub,
)

_ONE = gauss(1)
_HALF = gauss(1, 0) / 2


class AlmostComplexStructure:
    """Endomorphism J with J^2 = -Id, as a rational matrix ``J[k][a]``
    giving the ``X_k`` component of ``J X_a``."""

    __slots__ = ("J", "rows")

    def __init__(self, J: Tensor):
        if J.rank != 2 or J.dims[0] != J.dims[1]:
            raise ShapeMismatch("J must be a square matrix")
        rows = J.nested()
        n = len(rows)
        sq = mat_mul(rows, rows)
        for a in range(n):
            for b in range(n):
                expect = -_ONE if a == b else ZERO
                if sq[a][b] != expect:
                    raise JSquaredNotMinusIdentity(
                        f"(J^2)[{a}][{b}] = {sq[a][b]!r}"
                    )
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("AlmostComplexStructure is immutable")

    def apply(self, v) -> tuple:
        return mat_vec(self.rows, v)


def holo_part(J: AlmostComplexStructure, v) -> tuple:
    """(1,0)-part of a complexified vector: ``(v - i J v) / 2``."""
    jv = J.apply(v)
    return tuple(_HALF * (x - I * y) for x, y in zip(v, jv))


def anti_part(J: AlmostComplexStructure, v) -> tuple:
    """(0,1)-part of a complexified vector: ``(v + i J v) / 2``."""
    jv = J.apply(v)
    return tuple(_HALF * (x + I * y) for x, y in zip(v, jv))


class InvariantMetric:
    """Symmetric positive definite rational metric on the algebra."""

    __slots__ = ("g", "rows", "inverse")

    def __init__(self, g: Tensor):
        if g.rank != 2 or g.dims[0] != g.dims[1]:
            raise ShapeMismatch("metric must be a square matrix")
        rows = g.nested()
        n = len(rows)
        for a in range(n):
            for b in range(a, n):
                if not rows[a][b].is_real:
                    raise MetricNotPositiveDefinite("metric entries must be real")
                if rows[a][b] != rows[b][a]:
                    raise MetricNotPositiveDefinite(
                        f"metric not symmetric at ({a},{b})"
                    )
        for k in range(1, n + 1):
            minor = determinant([row[:k] for row in rows[:k]])
            if not (minor.is_real and minor.re > 0):
                raise MetricNotPositiveDefinite(
                    f"leading principal minor {k} is {minor!r}"
                )
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "inverse", invert_rows(rows))

    def __setattr__(self, name, value):
        raise AttributeError("InvariantMetric is immutable")

    def pair(self, v, w) -> GaussianRational:
        """Bilinear (not sesquitilinear) extension of g to complex vectors;
        hermitian pairings are written ``g(v, conj(w))`` explicitly."""
        total = ZERO
        for a, row in enumerate(self.rows):
            va = v[a]
            if not va:
                continue
            for b, gv in enumerate(row):
                if gv and w[b]:
                    total = total + va * gv * w[b]
        return total


class InvariantForm:
    """A left-invariant p-form: a fully antisymmetric tensor over the
    real dual basis (entries may be complex)."""

    __slots__ = ("degree", "dim", "tensor")

    def __init__(self, tensor: Tensor, validate: bool = True):
        object.__setattr__(self, "degree", tensor.rank)
        object.__setattr__(self, "dim", tensor.dims[0])
        if len(set(tensor.dims)) != 1:
            raise ShapeMismatch("form axes must share the algebra dimension")
        if validate:
            _check_antisymmetric(tensor)
        object.__setattr__(self, "tensor", tensor)

    def __setattr__(self, name, value):
        raise AttributeError("InvariantForm is immutable")

    @classmethod
    def from_components(cls, dim: int, degree: int, components: dict) -> "InvariantForm":
        """Build from ``{increasing index tuple: value}``."""

        def fn(idx):
            return components.get(idx, ZERO)

        return cls(_antisymmetric_tensor(dim, degree, fn), validate=False)

    def __call__(self, *vectors) -> GaussianRational:
        if len(vectors) != self.degree:
            raise ShapeMismatch(f"form of degree {self.degree} needs that many vectors")
        total = ZERO
        for idx, v in self.tensor.nonzero_items():
            term = v
            for pos, a in enumerate(idx):
                c = vectors[pos][a]
                if not c:
                    term = ZERO
                    break
                term = term * c
            if term:
                total = total + term
        return total

    def __add__(self, other: "InvariantForm") -> "InvariantForm":
        return InvariantForm(self.tensor + other.tensor, validate=False)

    def __sub__(self, other: "InvariantForm") -> "InvariantForm":
        return InvariantForm(self.tensor - other.tensor, validate=False)

    def __neg__(self) -> "InvariantForm":
        return InvariantForm(-self.tensor, validate=False)

    def scale(self, c) -> "InvariantForm":
        return InvariantForm(self.tensor.scale(c), validate=False)

    def conjugate(self) -> "InvariantForm":
        return InvariantForm(
            self.tensor.map(lambda z: z.conjugate()), validate=False
        )

    def is_zero(self) -> bool:
        return self.tensor.is_zero()

    def __eq__(self, other):
        if not isinstance(other, InvariantForm):
            return NotImplemented
        return self.tensor == other.tensor

    def __hash__(self):
        return hash(self.tensor)

    def __repr__(self):
        nz = [
            (idx, v)
            for idx, v in self.tensor.nonzero_items()
            if all(idx[i] < idx[i + 1] for i in range(len(idx) - 1))
        ]
        return f"InvariantForm(degree={self.degree}, components={nz!r})"


def dual_one_form(dim: int, a: int) -> InvariantForm:
    """The dual-basis 1-form picking out the ``X_a`` coefficient."""
    return InvariantForm.from_components(dim, 1, {(a,): _ONE})


def wedge(f: InvariantForm, g: InvariantForm) -> InvariantForm:
    """Exterior product with the determinant convention:
    ``(a ^ b)(v, w) = a(v) b(w) - a(w) b(v)`` for 1-forms."""
    if f.dim != g.dim:
        raise ShapeMismatch("forms live on different algebras")
    p, q = f.degree, g.degree

    def fn(idx):
        total = ZERO
        positions = range(p + q)
        for left in combinations(positions, p):
            right = tuple(pos for pos in positions if pos not in left)
            sign = _shuffle_sign(left, right)
            a = f.tensor[tuple(idx[pos] for pos in left)]
            if not a:
                continue
            b = g.tensor[tuple(idx[pos] for pos in right)]
            if not b:
                continue
            term = a * b
            total = total + (term if sign > 0 else -term)
        return total

    return InvariantForm(_antisymmetric_tensor(f.dim, p + q, fn), validate=False)


def _shuffle_sign(left, right) -> int:
    merged = list(left) + list(right)
    inv = 0
    for i in range(len(merged)):
        for j in range(i + 1, len(merged)):
            if merged[i] > merged[j]:
                inv += 1
    return -1 if inv % 2 else 1


def _antisymmetric_tensor(dim: int, degree: int, fn) -> Tensor:
    """Dense antisymmetric tensor from values on increasing index tuples."""
    flat = [ZERO] * dim**degree
    strides = [dim ** (degree - 1 - k) for k in range(degree)]
    for idx in combinations(range(dim), degree):
        v = fn(idx)
        if not v:
            continue
        for perm in permutations(range(degree)):
            sign = _perm_sign(perm)
            pos = 0
            for k, p in enumerate(perm):
                pos += idx[p] * strides[k]
            flat[pos] = v if sign > 0 else -v
    return Tensor((dim,) * degree, flat)


def _perm_sign(perm) -> int:
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return -1 if inv % 2 else 1


def _check_antisymmetric(t: Tensor):
    from .errors import NotAntisymmetric
    from .tensors import _all_indices

    for idx in _all_indices(t.dims):
        v = t[idx]
        if len(set(idx)) < len(idx):
            if v:
                raise NotAntisymmetric(f"form nonzero on repeated index {idx}")
            continue
        srt = tuple(sorted(idx))
        inv = sum(
            1
            for i in range(len(idx))
            for j in range(i + 1, len(idx))
            if idx[i] > idx[j]
        )
        expect = t[srt] if inv % 2 == 0 else -t[srt]
        if v != expect:
            raise NotAntisymmetric(f"form not antisymmetric at {idx}")


class ComplexFrame:
    """A basis ``Z_1..Z_n`` of the +i eigenspace of J, with the hermitian
    gram ``g(Z_i, conj(Z_j))`` when a metric is attached.

    ``basis_rows`` lists ``Z_1..Z_n, conj(Z_1)..conj(Z_n)`` over the real
    basis; its inverse converts real-basis data to frame coefficients.
    """

    __slots__ = (
        "vectors",
        "n",
        "dim",
        "gram",
        "gram_inverse",
        "basis_rows",
        "coeff_rows",
    )

    def __init__(self, vectors, J: AlmostComplexStructure, g: InvariantMetric | None):
        vectors = [tuple(v) for v in vectors]
        dim = len(vectors[0])
        n = dim // 2
        if len(vectors) != n:
            raise ShapeMismatch(f"expected {n} frame vectors, got {len(vectors)}")
        for z in vectors:
            jz = J.apply(z)
            if any(jz[k] != I * z[k] for k in range(dim)):
                raise ShapeMismatch("frame vector is not a +i eigenvector of J")
        basis_rows = [list(z) for z in vectors] + [
            [x.conjugate() for x in z] for z in vectors
        ]
        inv = invert_rows(basis_rows)  # raises Singular if not spanning
        coeff_rows = [[inv[b][i] for b in range(dim)] for i in range(dim)]
        gram = None
        gram_inverse = None
        if g is not None:
            gram = Tensor.from_nested(
                [
                    [
                        g.pair(vectors[i], tuple(x.conjugate() for x in vectors[j]))
                        for j in range(n)
                    ]
                    for i in range(n)
                ],
                kinds=(Kind.HOLO, Kind.ANTI),
            )
            gram_inverse = invert_rows(gram.nested())
        object.__setattr__(self, "vectors", tuple(vectors))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "gram_inverse", gram_inverse)
        object.__setattr__(self, "basis_rows", basis_rows)
        object.__setattr__(self, "coeff_rows", coeff_rows)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexFrame is immutable")

    def conj_vectors(self) -> tuple:
        return tuple(tuple(x.conjugate() for x in z) for z in self.vectors)

    def coefficients(self, v) -> tuple:
        """Coefficients ``(h_1..h_n, a_1..a_n)`` of ``v`` over
        ``Z_1..Z_n, conj(Z_1)..conj(Z_n)``."""
        return mat_vec(self.coeff_rows, v)

    def coframe(self) -> list[tuple]:
        """The dual (1,0)-coframe: covectors over the real dual basis."""
        return [tuple(self.coeff_rows[i]) for i in range(self.n)]


class HermitianTriple:
    """A validated compatible triple (algebra, J, g) with fundamental form
    ``omega(v, w) = g(J v, w)``."""

    __slots__ = ("alg", "J", "g", "omega", "cache")

    def __init__(self, alg: LieAlgebra, J, g):
        if alg.dim % 2:
            raise OddDimension(f"dimension {alg.dim} is odd")
        if not isinstance(J, AlmostComplexStructure):
            J = AlmostComplexStructure(J)
        if not isinstance(g, InvariantMetric):
            g = InvariantMetric(g)
        if J.J.dims[0] != alg.dim or g.g.dims[0] != alg.dim:
            raise ShapeMismatch("J and g must match the algebra dimension")
        jt = [[J.rows[b][a] for b in range(alg.dim)] for a in range(alg.dim)]
        jgj = mat_mul(mat_mul(jt, g.rows), J.rows)
        for a in range(alg.dim):
            for b in range(alg.dim):
                if jgj[a][b] != g.rows[a][b]:
                    raise MetricNotPositiveDefinite(
                        f"metric is not J-invariant at ({a},{b})"
                    )
        omega = Tensor.from_nested(mat_mul(jt, g.rows))
        object.__setattr__(self, "alg", alg)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("HermitianTriple is immutable")

    def cached(self, key, fn):
        if key not in self.cache:
            self.cache[key] = fn()
        return self.cache[key]

    @property
    def n(self) -> int:
        return self.alg.dim // 2

    def omega_form(self) -> InvariantForm:
        return self.cached("omega_form", lambda: InvariantForm(self.omega))

    def frame(self) -> ComplexFrame:
        return self.cached("frame", lambda: standard_10_frame(self))


def metric_from_taming(alg: LieAlgebra, J, omega: InvariantForm) -> InvariantMetric:
    """Symmetrized metric ``g(v, w) = (omega(v, Jw) + omega(w, Jv)) / 2``
    of a taming 2-form; raises NotTamed when it is not positive definite."""
    if not isinstance(J, AlmostComplexStructure):
        J = AlmostComplexStructure(J)
    dim = alg.dim
    om = omega.tensor if isinstance(omega, InvariantForm) else omega
    om_rows = om.nested()
    jmat = J.rows
    rows = []
    for a in range(dim):
        row = []
        for b in range(dim):
            s = ZERO
            for k in range(dim):
                if jmat[k][b] and om_rows[a][k]:
                    s = s + om_rows[a][k] * jmat[k][b]
                if jmat[k][a] and om_rows[b][k]:
                    s = s + om_rows[b][k] * jmat[k][a]
            row.append(_HALF * s)
        rows.append(row)
    try:
        return InvariantMetric(Tensor.from_nested(rows))
    except MetricNotPositiveDefinite as exc:
        raise NotTamed(f"form does not tame J: {exc}") from exc


def standard_10_frame(triple: HermitianTriple) -> ComplexFrame:
    """Greedy (1,0)-frame: repeatedly pick the first basis vector outside
    the span of the vectors already chosen together with their J-images,
    and emit ``Z = X - i J X``.  Succeeds for every J with J^2 = -Id."""
    return ComplexFrame(greedy_frame_vectors(triple.J, triple.alg.dim), triple.J, triple.g)


def greedy_frame_vectors(J: AlmostComplexStructure, dim: int) -> list[tuple]:
    """The frame vectors of the greedy construction, from J alone."""
    span_rows: list[list] = []
    span_rank = 0
    vectors = []
    for a in range(dim):
        if len(vectors) == dim // 2:
            break
        e = [ZERO] * dim
        e[a] = _ONE
        if span_rows and _span_rank(span_rows + [e]) == span_rank:
            continue
        je = list(J.apply(tuple(e)))
        span_rows = span_rows + [e, je]
        span_rank = _span_rank(span_rows)
        vectors.append(tuple(x - I * y for x, y in zip(e, je)))
    return vectors


def _span_rank(rows) -> int:
    _, pivots = row_reduce([list(r) for r in rows])
    return len(pivots)


def nijenhuis(triple: HermitianTriple, v, w) -> tuple:
    """``N(v, w) = [Jv, Jw] - J[Jv, w] - J[v, Jw] - [v, w]`` extended
    bilinearly to the complexified algebra."""
    alg, J = triple.alg, triple.J
    jv, jw = J.apply(v), J.apply(w)
    t1 = alg.bracket(jv, jw)
    t2 = J.apply(alg.bracket(jv, w))
    t3 = J.apply(alg.bracket(v, jw))
    t4 = alg.bracket(v, w)
    return tuple(a - b - c - d for a, b, c, d in zip(t1, t2, t3, t4))


def nijenhuis_tensor(triple: HermitianTriple) -> Tensor:
    """Components ``N^k_{ab}`` over the real basis (vector-valued 2-form)."""

    def compute():
        dim = triple.alg.dim
        flat = [ZERO] * dim**3
        for a in range(dim):
            ea = tuple(_ONE if i == a else ZERO for i in range(dim))
            for b in range(a + 1, dim):
                eb = tuple(_ONE if i == b else ZERO for i in range(dim))
                nv = nijenhuis(triple, ea, eb)
                for k, x in enumerate(nv):
                    if x:
                        flat[(k * dim + a) * dim + b] = x
                        flat[(k * dim + b) * dim + a] = -x
        return Tensor((dim, dim, dim), flat)

    return triple.cached("nijenhuis_tensor", compute)


def exterior_derivative(alg: LieAlgebra, form: InvariantForm) -> InvariantForm:
    """Invariant exterior differential: for left-invariant forms only the
    bracket terms survive, so
    ``d f(V_0..V_p) = sum_{a<b} (-1)^{a+b} f([V_a, V_b], .. no V_a, V_b ..)``
    and ``d(d f) = 0`` is forced by the Jacobi identity.
    """
    p = form.degree
    if p + 1 > 4:
        raise ShapeMismatch("forms of degree above 4 are not represented")
    if p >= alg.dim:
        raise ShapeMismatch("degree exceeds the algebra dimension")
    dim = alg.dim
    t = form.tensor

    def value(idx):
        total = ZERO
        for a in range(p + 1):
            for b in range(a + 1, p + 1):
                br = alg.bracket_basis(idx[a], idx[b])
                if vec_is_zero(br):
                    continue
                rest = tuple(idx[k] for k in range(p + 1) if k != a and k != b)
                s = ZERO
                for k, coeff in enumerate(br):
                    if coeff:
                        entry = t[(k,) + rest]
                        if entry:
                            s = s + coeff * entry
                if (a + b) % 2:
                    s = -s
                total = total + s
        return total

    return InvariantForm(_antisymmetric_tensor(dim, p + 1, value), validate=False)


def d_omega(triple: HermitianTriple) -> InvariantForm:
    return triple.cached(
        "d_omega", lambda: exterior_derivative(triple.alg, triple.omega_form())
    )


def pq_decompose(triple: HermitianTriple, form: InvariantForm) -> dict:
    """Split a p-form into its (r, s) parts (r + s = p).

    Components are taken in the complexified frame ``Z_1..Z_n,
    conj(Z)_1..conj(Z)_n`` (axes of the first kind count as holomorphic),
    filtered by type, and transported back to the real basis.  The parts
    sum to the original form exactly.
    """
    frame = triple.frame()
    p = form.degree
    n = frame.n
    basis = frame.basis_rows
    complexified = transform_axes(form.tensor, [basis] * p)
    # rows of the inverse transform: real basis vectors over the frame
    back_rows = [[frame.coeff_rows[i][b] for i in range(2 * n)] for b in range(2 * n)]
    parts = {}
    for r in range(p + 1):
        s = p - r
        flat = []
        for idx, v in zip(_indices(complexified.dims), complexified.data):
            holo = sum(1 for a in idx if a < n)
            flat.append(v if (holo == r and v) else ZERO)
        filtered = Tensor(complexified.dims, flat)
        restored = transform_axes(filtered, [back_rows] * p)
        parts[(r, s)] = InvariantForm(restored, validate=False)
    return parts


def _indices(dims):
    from .tensors import _all_indices

    return _all_indices(dims)


def frame_block(tensor: Tensor, frame: ComplexFrame, pattern: str) -> Tensor:
    """Components of a real-basis covariant tensor on frame vectors.

    ``pattern`` is one letter per axis: ``z`` for ``Z_i`` (holomorphic),
    ``c`` for ``conj(Z_i)``, ``r`` to leave the axis on the real basis;
    e.g. ``frame_block(R, frame, "czzz")`` is the block
    ``R(conj(Z_i), Z_j, Z_k, Z_l)``.
    """
    if len(pattern) != tensor.rank:
        raise ShapeMismatch("one pattern letter per axis")
    holo = [list(z) for z in frame.vectors]
    anti = [list(z) for z in frame.conj_vectors()]
    picks = {"z": (holo, Kind.HOLO), "c": (anti, Kind.ANTI), "r": (None, Kind.REAL)}
    mats = [picks[ch][0] for ch in pattern]
    kinds = tuple(picks[ch][1] for ch in pattern)
    return transform_axes(tensor, mats, kinds=kinds)


def classify(triple: HermitianTriple) -> dict:
    """Kahler-type flags.

    quasi_kahler:  the (1,2)-part of d(omega) vanishes;
    almost_kahler: d(omega) = 0;
    integrable:    the Nijenhuis tensor vanishes;
    kahler:        almost_kahler and integrable.
    The flags are monotone: kahler => almost_kahler => quasi_kahler.
    """

    def compute():
        dom = d_omega(triple)
        almost = dom.is_zero()
        if almost:
            quasi = True
        else:
            frame = triple.frame()
            block_12 = frame_block(dom.tensor, frame, "zcc")
            quasi = block_12.is_zero()
        integrable = nijenhuis_tensor(triple).is_zero()
        return {
            "integrable": integrable,
            "kahler": almost and integrable,
            "almost_kahler": almost,
            "quasi_kahler": quasi,
        }

    return triple.cached("classify", compute)
