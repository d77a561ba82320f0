"""Levi-Civita and canonical Hermitian connections for left-invariant
metrics, torsion with its (1,1)-part, and covariant derivatives of the
constant tensor fields J, omega, N.

Left-invariance collapses all pointwise calculus to structure-constant
algebra: the metric is constant, so the derivative terms of the Koszul
formula vanish and

    2 g(D_v w, u) = g([v,w],u) - g([w,u],v) + g([u,v],w).

The canonical connection is ``D~ = D - (1/2) J (D J)``; it preserves g
and J for every almost-Hermitian triple, and for quasi Kahler triples it
is the unique Hermitian connection with vanishing (1,1)-torsion.
"""

from __future__ import annotations

from .errors import ShapeMismatch, UnsupportedField
from .lie import LieAlgebra
from .scalars import ZERO, GaussianRational, gauss
from .structures import (
    AlmostComplexStructure,
    ComplexFrame,
    HermitianTriple,
    InvariantForm,
    classify,
    d_omega,
    frame_block,
    nijenhuis_tensor,
)
from .tensors import Kind, Tensor, mat_mul, mat_vec, vec_is_zero

_ONE = gauss(1)
_HALF = gauss(1) / 2

LEVI_CIVITA = "levi_civita"
CANONICAL = "canonical"


class Connection:
    """Connection coefficients ``Gamma^c_{ab}`` meaning
    ``D_{X_a} X_b = sum_c Gamma^c_{ab} X_c`` (tensor axes ordered
    direction, argument, component)."""

    __slots__ = ("gamma", "flavor", "canonical_certified", "mats")

    def __init__(self, gamma: Tensor, flavor: str, canonical_certified: bool = True):
        dim = gamma.dims[0]
        if gamma.rank != 3 or len(set(gamma.dims)) != 1:
            raise ShapeMismatch("connection coefficients must be cubical")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "flavor", flavor)
        object.__setattr__(self, "canonical_certified", canonical_certified)
        mats = [
            [[gamma[(a, b, c)] for b in range(dim)] for c in range(dim)]
            for a in range(dim)
        ]
        object.__setattr__(self, "mats", mats)

    def __setattr__(self, name, value):
        raise AttributeError("Connection is immutable")

    @property
    def dim(self) -> int:
        return self.gamma.dims[0]

    def derive_basis(self, a: int, v) -> tuple:
        """``D_{X_a} v`` for a constant (complexified) vector ``v``."""
        return mat_vec(self.mats[a], v)

    def derive(self, v, w) -> tuple:
        """``D_v w`` by bilinearity, for constant vectors ``v``, ``w``."""
        dim = self.dim
        out = [ZERO] * dim
        for a in range(dim):
            va = v[a]
            if not va:
                continue
            dw = self.derive_basis(a, w)
            for c in range(dim):
                if dw[c]:
                    out[c] = out[c] + va * dw[c]
        return tuple(out)

    def sparse_table(self) -> dict:
        """Coefficients as ``{(a, b): {c: value}}`` over nonzero entries."""
        dim = self.dim
        table = {}
        for a in range(dim):
            for b in range(dim):
                entries = {
                    c: self.gamma[(a, b, c)]
                    for c in range(dim)
                    if self.gamma[(a, b, c)]
                }
                if entries:
                    table[(a, b)] = entries
        return table


def levi_civita(triple: HermitianTriple) -> Connection:
    """The Levi-Civita connection of the invariant metric, via the Koszul
    formula; metric compatibility and vanishing torsion are re-verified
    exactly after construction."""

    def compute():
        alg, g = triple.alg, triple.g
        dim = alg.dim
        ginv = g.inverse
        flat = [ZERO] * dim**3
        for a in range(dim):
            ea = _basis(dim, a)
            for b in range(dim):
                eb = _basis(dim, b)
                ab = alg.bracket_basis(a, b)
                rhs = []
                for u in range(dim):
                    eu = _basis(dim, u)
                    s = g.pair(ab, eu)
                    s = s - g.pair(alg.bracket_basis(b, u), ea)
                    s = s + g.pair(alg.bracket_basis(u, a), eb)
                    rhs.append(s)
                coeffs = mat_vec(ginv, rhs)
                for c in range(dim):
                    if coeffs[c]:
                        flat[(a * dim + b) * dim + c] = _HALF * coeffs[c]
        conn = Connection(Tensor((dim, dim, dim), flat), LEVI_CIVITA)
        _assert_metric(conn, triple)
        tor, _ = torsion(conn, alg)
        assert tor.is_zero(), "Levi-Civita torsion must vanish"
        return conn

    return triple.cached("levi_civita", compute)


def _basis(dim: int, a: int) -> tuple:
    return tuple(_ONE if i == a else ZERO for i in range(dim))


def _assert_metric(conn: Connection, triple: HermitianTriple):
    g = triple.g
    dim = conn.dim
    for a in range(dim):
        for b in range(dim):
            db = conn.derive_basis(a, _basis(dim, b))
            for u in range(dim):
                du = conn.derive_basis(a, _basis(dim, u))
                s = g.pair(db, _basis(dim, u)) + g.pair(_basis(dim, b), du)
                assert not s, f"connection not metric at ({a},{b},{u})"


def canonical_connection(triple: HermitianTriple, lc: Connection) -> Connection:
    """``D~ = D - (1/2) J (D J)``, i.e. matrix-wise
    ``Gamma~_a = (Gamma_a - J Gamma_a J) / 2``.

    The result preserves g and J exactly (verified).  It is *the*
    canonical Hermitian connection only for quasi Kahler triples; outside
    that class the connection is still returned but flagged via
    ``canonical_certified = False``.
    """
    if lc.flavor != LEVI_CIVITA:
        raise ShapeMismatch("canonical connection is built from the Levi-Civita one")

    def compute():
        dim = lc.dim
        jrows = triple.J.rows
        flat = [ZERO] * dim**3
        for a in range(dim):
            m = lc.mats[a]  # rows indexed by component c, columns by argument b
            jmj = mat_mul(jrows, mat_mul(m, jrows))
            for c in range(dim):
                for b in range(dim):
                    v = _HALF * (m[c][b] - jmj[c][b])
                    if v:
                        flat[(a * dim + b) * dim + c] = v
        conn = Connection(
            Tensor((dim, dim, dim), flat),
            CANONICAL,
            canonical_certified=classify(triple)["quasi_kahler"],
        )
        _assert_metric(conn, triple)
        _assert_preserves_j(conn, triple)
        return conn

    return triple.cached("canonical_connection", compute)


def _assert_preserves_j(conn: Connection, triple: HermitianTriple):
    nabla_j = covariant_derivative(conn, triple.J)
    assert nabla_j.is_zero(), "canonical connection must preserve J"


def torsion(conn: Connection, alg: LieAlgebra, frame: ComplexFrame | None = None):
    """Torsion ``T(v,w) = D_v w - D_w v - [v,w]`` (axes direction,
    direction, component) and, when a frame is supplied, its (1,1)-part
    ``T(Z_i, conj(Z_j))`` over the frame."""
    dim = conn.dim
    flat = [ZERO] * dim**3
    for a in range(dim):
        for b in range(a + 1, dim):
            br = alg.bracket_basis(a, b)
            da = conn.derive_basis(a, _basis(dim, b))
            db = conn.derive_basis(b, _basis(dim, a))
            for c in range(dim):
                v = da[c] - db[c] - br[c]
                if v:
                    flat[(a * dim + b) * dim + c] = v
                    flat[(b * dim + a) * dim + c] = -v
    tor = Tensor((dim, dim, dim), flat)
    part_11 = None
    if frame is not None:
        part_11 = frame_block(tor, frame, "zcr")
    return tor, part_11


def covariant_derivative(conn: Connection, field):
    """Covariant derivative of a constant invariant field, one rank higher
    (new first axis = direction).

    Accepted fields: an AlmostComplexStructure (or rank-2 endomorphism
    tensor), a rank-2 InvariantForm, a vector-valued 2-form given as a
    rank-3 tensor ``T^k_{ab}`` with component axis first (the Nijenhuis
    tensor's layout), or a plain vector.
    """
    dim = conn.dim
    if isinstance(field, AlmostComplexStructure):
        jrows = field.rows
        flat = []
        for a in range(dim):
            m = conn.mats[a]
            mj = mat_mul(m, jrows)
            jm = mat_mul(jrows, m)
            # (D_a J)(e_b) component c, axes (a, b, c)
            flat.extend(
                mj[c][b] - jm[c][b] for b in range(dim) for c in range(dim)
            )
        return Tensor((dim, dim, dim), flat)
    if isinstance(field, InvariantForm):
        if field.degree != 2:
            raise UnsupportedField("only 2-forms are differentiated")
        om = field.tensor.nested()
        flat = []
        for a in range(dim):
            m = conn.mats[a]
            for b in range(dim):
                gb = [m[c][b] for c in range(dim)]
                for c in range(dim):
                    gc = [m[k][c] for k in range(dim)]
                    s = ZERO
                    for k in range(dim):
                        if gb[k] and om[k][c]:
                            s = s - gb[k] * om[k][c]
                        if gc[k] and om[b][k]:
                            s = s - om[b][k] * gc[k]
                    flat.append(s)
        return Tensor((dim, dim, dim), flat)
    if isinstance(field, Tensor) and field.rank == 3:
        # vector-valued 2-form N^k_{ab}, component axis first
        table = [
            [
                tuple(field[(k, a, b)] for k in range(dim))
                for b in range(dim)
            ]
            for a in range(dim)
        ]

        def bilinear(v, w):
            out = [ZERO] * dim
            for a in range(dim):
                va = v[a]
                if not va:
                    continue
                for b in range(dim):
                    wb = w[b]
                    if not wb:
                        continue
                    cell = table[a][b]
                    coeff = va * wb
                    for k in range(dim):
                        if cell[k]:
                            out[k] = out[k] + coeff * cell[k]
            return tuple(out)

        flat = [ZERO] * dim**4
        for a in range(dim):
            for b in range(dim):
                eb = _basis(dim, b)
                db = conn.derive_basis(a, eb)
                for c in range(dim):
                    ec = _basis(dim, c)
                    dc = conn.derive_basis(a, ec)
                    first = conn.derive_basis(a, table[b][c])
                    second = bilinear(db, ec)
                    third = bilinear(eb, dc)
                    base = ((a * dim + b) * dim + c) * dim
                    for k in range(dim):
                        v = first[k] - second[k] - third[k]
                        if v:
                            flat[base + k] = v
        return Tensor((dim, dim, dim, dim), flat)
    if isinstance(field, tuple):
        flat = []
        for a in range(dim):
            flat.extend(conn.derive_basis(a, field))
        return Tensor((dim, dim), flat)
    raise UnsupportedField(f"cannot differentiate {type(field).__name__}")


def f_tensor(triple: HermitianTriple, lc: Connection) -> Tensor:
    """``F(X,Y,Z,W) = g((D_X N)(Y,Z), W)`` over the real basis; inherits
    the antisymmetry of N in its middle arguments."""

    def compute():
        dim = triple.alg.dim
        nt = nijenhuis_tensor(triple)
        dn = covariant_derivative(lc, nt)  # axes (a, b, c, k)
        grows = triple.g.rows
        flat = [ZERO] * dim**4
        for a in range(dim):
            for b in range(dim):
                for c in range(dim):
                    comps = [dn[(a, b, c, k)] for k in range(dim)]
                    if not any(comps):
                        continue
                    base = ((a * dim + b) * dim + c) * dim
                    for d in range(dim):
                        s = ZERO
                        for k in range(dim):
                            if comps[k] and grows[k][d]:
                                s = s + comps[k] * grows[k][d]
                        if s:
                            flat[base + d] = s
        return Tensor((dim, dim, dim, dim), flat)

    return triple.cached("f_tensor", compute)


def fundamental_relation_check(triple: HermitianTriple, lc: Connection):
    """Verify, on every real basis triple, the universal almost-Hermitian
    identity

        2 g((D_X J) Y, Z)
            = d omega(X, Y, Z) - d omega(X, JY, JZ) + g(N(Y, Z), J X),

    stated here for the structure-equation convention
    ``d a(X, Y) = -a([X, Y])`` used throughout the engine (texts using the
    opposite sign for d list the two d-omega terms in the other order).
    Returns the (empty-when-passing) list of defects ``((a,b,c), value)``;
    a nonempty result indicates an internal convention bug, not a
    property of the input.
    """
    alg, g, J = triple.alg, triple.g, triple.J
    dim = alg.dim
    dom = d_omega(triple)
    nt = nijenhuis_tensor(triple)
    nabla_j = covariant_derivative(lc, J)
    defects = []
    for a in range(dim):
        ea = _basis(dim, a)
        jea = J.apply(ea)
        for b in range(dim):
            eb = _basis(dim, b)
            jeb = J.apply(eb)
            dj_b = tuple(nabla_j[(a, b, c)] for c in range(dim))
            for c in range(dim):
                ec = _basis(dim, c)
                jec = J.apply(ec)
                lhs = gauss(2) * g.pair(dj_b, ec)
                nbc = tuple(nt[(k, b, c)] for k in range(dim))
                rhs = dom(ea, eb, ec) - dom(ea, jeb, jec) + g.pair(nbc, jea)
                if lhs != rhs:
                    defects.append(((a, b, c), lhs - rhs))
    return defects
