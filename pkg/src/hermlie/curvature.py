"""Curvature tensors for both connections and the derived invariants:
Gray identities, first Bianchi defects, scalar and *-scalar curvature,
the squared norm of the covariant derivative of the fundamental form,
the Nijenhuis-derivative condition for the Bianchi identity, and the
Tosatti-Weinkove-Yau tensor.

All complex-frame computations contract with the inverse hermitian gram,
so no unitary normalization (hence no irrational scalars) is ever
needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .connections import (
    CANONICAL,
    LEVI_CIVITA,
    Connection,
    canonical_connection,
    covariant_derivative,
    f_tensor,
    levi_civita,
    torsion,
)
from .errors import DegenerateDimension, ShapeMismatch
from .lie import LieAlgebra
from .scalars import ZERO, GaussianRational, Rational, gauss, rat
from .structures import (
    ComplexFrame,
    HermitianTriple,
    InvariantForm,
    classify,
    frame_block,
    nijenhuis,
    nijenhuis_tensor,
)
from .tensors import Kind, Tensor, transform_axes, vec_is_zero

_ONE = gauss(1)
_HALF = gauss(1) / 2
_QUARTER = gauss(1) / 4

RIEMANN = "riemann"
HERMITIAN = "hermitian"


class CurvatureTensor:
    """Fully lowered curvature ``R(v, w, z, u)`` over the real basis with
    flavor ``riemann`` (Levi-Civita) or ``hermitian`` (canonical).  Both
    connections are metric, so ``R`` is antisymmetric in its first and in
    its last two arguments; this is validated at construction."""

    __slots__ = ("tensor", "flavor")

    def __init__(self, tensor: Tensor, flavor: str):
        if tensor.rank != 4 or len(set(tensor.dims)) != 1:
            raise ShapeMismatch("curvature must be rank 4 over one dimension")
        dim = tensor.dims[0]
        for a in range(dim):
            for b in range(a, dim):
                for c in range(dim):
                    for d in range(c, dim):
                        v = tensor[(a, b, c, d)]
                        if v != -tensor[(b, a, c, d)] or v != -tensor[(a, b, d, c)]:
                            raise ShapeMismatch(
                                f"curvature antisymmetry fails at {(a, b, c, d)}"
                            )
        object.__setattr__(self, "tensor", tensor)
        object.__setattr__(self, "flavor", flavor)

    def __setattr__(self, name, value):
        raise AttributeError("CurvatureTensor is immutable")

    @property
    def dim(self) -> int:
        return self.tensor.dims[0]

    def block(self, frame: ComplexFrame, pattern: str) -> Tensor:
        return frame_block(self.tensor, frame, pattern)

    def is_zero(self) -> bool:
        return self.tensor.is_zero()


def curvature(conn: Connection, alg: LieAlgebra, g) -> CurvatureTensor:
    """``R(v,w)z = D_v D_w z - D_w D_v z - D_{[v,w]} z`` on constant
    fields, lowered with the metric."""
    dim = conn.dim
    grows = g.rows if hasattr(g, "rows") else g.nested()
    flat = [ZERO] * dim**4
    for a in range(dim):
        for b in range(a + 1, dim):
            br = alg.bracket_basis(a, b)
            for c in range(dim):
                ec = tuple(_ONE if i == c else ZERO for i in range(dim))
                v1 = conn.derive_basis(a, conn.derive_basis(b, ec))
                v2 = conn.derive_basis(b, conn.derive_basis(a, ec))
                v3 = conn.derive(br, ec)
                r = tuple(x - y - z for x, y, z in zip(v1, v2, v3))
                if vec_is_zero(r):
                    continue
                for d in range(dim):
                    s = ZERO
                    for k in range(dim):
                        if r[k] and grows[k][d]:
                            s = s + r[k] * grows[k][d]
                    if s:
                        flat[((a * dim + b) * dim + c) * dim + d] = s
                        flat[((b * dim + a) * dim + c) * dim + d] = -s
    flavor = RIEMANN if conn.flavor == LEVI_CIVITA else HERMITIAN
    return CurvatureTensor(Tensor((dim,) * 4, flat), flavor)


def riemann_curvature(triple: HermitianTriple) -> CurvatureTensor:
    return triple.cached(
        "riemann_curvature",
        lambda: curvature(levi_civita(triple), triple.alg, triple.g),
    )


def hermitian_curvature(triple: HermitianTriple) -> CurvatureTensor:
    def compute():
        lc = levi_civita(triple)
        return curvature(canonical_connection(triple, lc), triple.alg, triple.g)

    return triple.cached("hermitian_curvature", compute)


def gray_check(R: CurvatureTensor, frame: ComplexFrame) -> dict:
    """Gray's curvature identities on the complexified frame.

    G3: ``R(conj(Z_i), Z_j, Z_k, Z_l) = 0``;
    G2: G3 and ``R(Z_i, Z_j, Z_k, Z_l) = 0``;
    G1: G2 and all components with two leading (1,0) arguments vanish.
    Nesting the conditions makes G1 => G2 => G3 structural; for the
    Riemann tensor the nested form agrees with the classical one by pair
    symmetry.  Left-invariance means frame components exhaust all cases.
    """
    g3 = R.block(frame, "czzz").is_zero()
    g2 = g3 and R.block(frame, "zzzz").is_zero()
    g1 = g2 and all(
        R.block(frame, "zz" + tail).is_zero() for tail in ("zc", "cz", "cc")
    )
    return {"G1": g1, "G2": g2, "G3": g3}


def first_bianchi_defect(R: CurvatureTensor) -> Tensor:
    """Cyclic sum ``R(v,w,z,u) + R(w,z,v,u) + R(z,v,w,u)`` over the real
    basis; identically zero for the riemann flavor, generally not for the
    hermitian one."""
    dim = R.dim
    t = R.tensor
    flat = []
    for a in range(dim):
        for b in range(dim):
            for c in range(dim):
                base_abc = ((a * dim + b) * dim + c) * dim
                for d in range(dim):
                    flat.append(
                        t[(a, b, c, d)] + t[(b, c, a, d)] + t[(c, a, b, d)]
                    )
    return Tensor((dim,) * 4, flat)


def scalar_invariants(R: CurvatureTensor, triple: HermitianTriple) -> dict:
    """Ricci, *-Ricci and their scalar traces.

    All traces use inverse-metric contraction over the real basis, so no
    orthonormal frame is needed:
    ``r(v,w) = g^{cd} R(X_c, v, w, X_d)``,
    ``r*(v,w) = g^{cd} R(Jv, JX_c, X_d, w)``,
    ``s = g^{vw} r(v,w)``, ``s* = g^{vw} r*(v,w)``.
    """
    if R.flavor != RIEMANN:
        raise ShapeMismatch("scalar invariants are defined for the riemann flavor")
    dim = R.dim
    ginv = triple.g.inverse
    t = R.tensor
    ricci_rows = []
    for v in range(dim):
        row = []
        for w in range(dim):
            s = ZERO
            for c in range(dim):
                for d in range(dim):
                    gcd = ginv[c][d]
                    if gcd:
                        x = t[(c, v, w, d)]
                        if x:
                            s = s + gcd * x
            row.append(s)
        ricci_rows.append(row)
    s_scal = ZERO
    for v in range(dim):
        for w in range(dim):
            gvw = ginv[v][w]
            if gvw and ricci_rows[v][w]:
                s_scal = s_scal + gvw * ricci_rows[v][w]

    jrows = triple.J.rows
    # M[q][d] = sum_c J[q][c] g^{cd}
    m1 = [
        [
            sum((jrows[q][c] * ginv[c][d] for c in range(dim)), ZERO)
            for d in range(dim)
        ]
        for q in range(dim)
    ]
    # K[p][w] = sum_{q,d} M[q][d] R[p,q,d,w]
    kmat = []
    for p in range(dim):
        row = []
        for w in range(dim):
            s = ZERO
            for q in range(dim):
                for d in range(dim):
                    c1 = m1[q][d]
                    if c1:
                        x = t[(p, q, d, w)]
                        if x:
                            s = s + c1 * x
            row.append(s)
        kmat.append(row)
    ricci_star_rows = [
        [
            sum((jrows[p][v] * kmat[p][w] for p in range(dim)), ZERO)
            for w in range(dim)
        ]
        for v in range(dim)
    ]
    s_star = ZERO
    for v in range(dim):
        for w in range(dim):
            gvw = ginv[v][w]
            if gvw and ricci_star_rows[v][w]:
                s_star = s_star + gvw * ricci_star_rows[v][w]

    return {
        "s": rat(s_scal),
        "s_star": rat(s_star),
        "ricci": Tensor.from_nested(ricci_rows),
        "ricci_star": Tensor.from_nested(ricci_star_rows),
    }


def nabla_omega_norm(lc: Connection, triple: HermitianTriple):
    """``|D omega|^2``: one half of the full inverse-metric contraction
    of ``D omega`` with itself (the half makes the *-scalar identity
    ``s* - s = |D omega|^2`` exact for almost Kahler structures, which is
    re-derived against an independent connection-coefficient oracle in
    the test suite)."""
    if lc.flavor != LEVI_CIVITA:
        raise ShapeMismatch("the norm uses the Levi-Civita connection")
    dim = lc.dim
    p = covariant_derivative(lc, triple.omega_form())
    ginv = triple.g.inverse
    raised = transform_axes(p, [ginv, ginv, ginv])
    total = ZERO
    for idx, v in p.nonzero_items():
        w = raised[idx]
        if w:
            total = total + v * w
    total = _HALF * total
    assert total.is_real and total.re >= 0, "squared norm must be nonnegative"
    return rat(total)


def w4_projection(s, s_star, n: int):
    """Projection of the curvature onto the conformal-Kahler component:
    ``(s - s*) / (16 n (n - 1))``."""
    if n < 2:
        raise DegenerateDimension("undefined in complex dimension 1")
    return (rat(s) - rat(s_star)) / (16 * n * (n - 1))


def star_scalar_gap_complex(R: CurvatureTensor, frame: ComplexFrame):
    """``s* - s`` evaluated through the complex frame:
    ``4 sum H_{ca} H_{db} R(Z_a, Z_b, conj(Z_c), conj(Z_d))`` with H the
    inverse hermitian gram (the unitary-frame sum ``4 sum R_{ij i~ j~}``
    rewritten covariantly).  Independent of the real-trace route."""
    block = R.block(frame, "zzcc")
    h = frame.gram_inverse
    n = frame.n
    total = ZERO
    for a in range(n):
        for b in range(n):
            for c in range(n):
                hca = h[c][a]
                if not hca:
                    continue
                for d in range(n):
                    hdb = h[d][b]
                    if hdb:
                        x = block[(a, b, c, d)]
                        if x:
                            total = total + hca * hdb * x
    total = gauss(4) * total
    assert total.is_real
    return rat(total)


def gamma_sum_oracle(lc: Connection, triple: HermitianTriple):
    """The connection-coefficient sum from the *-scalar identity's proof:
    in a unitary frame ``s* - s = 4 sum |g(D_{W_l} W_i, W_j)|^2`` for
    almost Kahler structures.  Stated covariantly with inverse-gram
    weights so the raw (non-unitary) frame can be used directly."""
    frame = triple.frame()
    n = frame.n
    Z = frame.vectors
    h = frame.gram_inverse
    G = [
        [[triple.g.pair(lc.derive(Z[l], Z[i]), Z[j]) for j in range(n)] for i in range(n)]
        for l in range(n)
    ]
    total = ZERO
    for l in range(n):
        for lp in range(n):
            hl = h[lp][l]
            if not hl:
                continue
            for i in range(n):
                for ip in range(n):
                    hi = h[ip][i]
                    if not hi:
                        continue
                    for j in range(n):
                        if not G[l][i][j]:
                            continue
                        for jp in range(n):
                            hj = h[jp][j]
                            if hj and G[lp][ip][jp]:
                                total = (
                                    total
                                    + hl
                                    * hi
                                    * hj
                                    * G[l][i][j]
                                    * G[lp][ip][jp].conjugate()
                                )
    total = gauss(4) * total
    assert total.is_real
    return rat(total)


def f_condition_check(R: CurvatureTensor, F: Tensor, frame: ComplexFrame):
    """The Nijenhuis-derivative curvature condition
    ``R(Z_i, Z_j, conj(Z_k), conj(Z_l))
        = (1/4) F(conj(Z_k), Z_i, Z_j, conj(Z_l))``
    checked over all frame index tuples; returns the defect list."""
    rb = R.block(frame, "zzcc")
    fb = frame_block(F, frame, "czzc")
    n = frame.n
    defects = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    lhs = rb[(i, j, k, l)]
                    rhs = _QUARTER * fb[(k, i, j, l)]
                    if lhs != rhs:
                        defects.append(((i, j, k, l), lhs - rhs))
    return defects


def anti_bracket_coefficients(triple: HermitianTriple, frame: ComplexFrame) -> Tensor:
    """Components ``N^r_{a~ b~}`` of the Nijenhuis tensor on conjugate
    frame pairs: ``N(conj(Z_a), conj(Z_b)) = sum_r N^r_{a~ b~} Z_r``
    (always of type (1,0))."""
    n = frame.n
    zb = frame.conj_vectors()
    flat = [ZERO] * n**3
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            nv = nijenhuis(triple, zb[a], zb[b])
            coeffs = frame.coefficients(nv)
            assert not any(coeffs[n:]), "N on (0,1) pairs must be of type (1,0)"
            for r in range(n):
                if coeffs[r]:
                    flat[(r * n + a) * n + b] = coeffs[r]
    return Tensor((n, n, n), flat, kinds=(Kind.HOLO, Kind.ANTI, Kind.ANTI))


def tosatti_tensor(r_herm: CurvatureTensor, n_coeffs: Tensor, frame: ComplexFrame):
    """The taming-estimate curvature tensor

        T_{i j~ k l~} = R~^j_{i k l~} + 4 sum_r N^r_{l~ j~} conj(N^i_{r~ k~})

    where the hermitian curvature's second slot is raised with the
    inverse hermitian gram.  Returns (tensor, vanishing flag)."""
    n = frame.n
    base = r_herm.block(frame, "zczc")  # R~(Z_i, conj(Z_m), Z_k, conj(Z_l))
    h = frame.gram_inverse
    flat = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    s = ZERO
                    for m in range(n):
                        hm = h[m][j]
                        if hm:
                            x = base[(i, m, k, l)]
                            if x:
                                s = s + hm * x
                    q = ZERO
                    for r in range(n):
                        a1 = n_coeffs[(r, l, j)]
                        if a1:
                            a2 = n_coeffs[(i, r, k)]
                            if a2:
                                q = q + a1 * a2.conjugate()
                    flat.append(s + gauss(4) * q)
    t = Tensor((n,) * 4, flat, kinds=(Kind.HOLO, Kind.ANTI, Kind.HOLO, Kind.ANTI))
    return t, t.is_zero()


def tosatti_positivity(t: Tensor, frame: ComplexFrame) -> str:
    """Best-effort positivity probe of the taming-estimate tensor.

    The pairing being probed is ``Q(v, w) = sum T_{i j~ k l~} v^i
    conj(w^j) v^k conj(w^l)`` on rational probe vectors.  This can refute
    nonnegativity exactly but never certify it, so the verdict is one of
    ``"zero"``, ``"negative_witness"``, ``"indeterminate"`` and is
    convention dependent.
    """
    if t.is_zero():
        return "zero"
    n = frame.n
    probes = [tuple(_ONE if i == k else ZERO for i in range(n)) for k in range(n)]
    probes += [tuple(_ONE for _ in range(n))]
    probes += [tuple(_ONE if i <= 1 else ZERO for i in range(n))]
    for v in probes:
        for w in probes:
            q = ZERO
            for i in range(n):
                if not v[i]:
                    continue
                for j in range(n):
                    if not w[j]:
                        continue
                    for k in range(n):
                        if not v[k]:
                            continue
                        for l in range(n):
                            if w[l]:
                                q = q + t[(i, j, k, l)] * v[i] * w[j].conjugate() * v[k] * w[l].conjugate()
            if q.is_real and q.re < 0:
                return "negative_witness"
    return "indeterminate"


def gnhf_cross_checks(triple: HermitianTriple, lc: Connection, frame: ComplexFrame):
    """Cross-check the normalized-frame component formulas for both
    curvature tensors on a constant frame.

    Requires the frame to satisfy the normalized-frame connection
    pattern (``D_{conj(Z_i)} Z_j = 0``, ``D_{Z_i} Z_j`` of type (0,1),
    ``D_{Z_i} D_{conj(Z_j)} Z_k = 0``); returns ``"skipped"`` otherwise.
    On success verifies, for all index tuples:

    * ``R~(Z_i, conj(Z_j), Z_k, conj(Z_l))
        = R(..same..) - g(D_i Z_k, D_{j~} conj(Z_l))``
    * ``R~(Z_i, Z_j, Z_k, conj(Z_l)) = R(Z_i, Z_j, Z_k, conj(Z_l))``
    * the vanishing of the remaining hermitian-curvature types
    * the second-derivative component formulas for the Riemann tensor.

    Returns ``"pass"`` or the list of defects.
    """
    from .structures import holo_part

    n = triple.n
    Z = frame.vectors
    Zb = frame.conj_vectors()
    g = triple.g

    for i in range(n):
        for j in range(n):
            if not vec_is_zero(lc.derive(Zb[i], Z[j])):
                return "skipped"
            if not vec_is_zero(holo_part(triple.J, lc.derive(Z[i], Z[j]))):
                return "skipped"
            for k in range(n):
                if not vec_is_zero(lc.derive(Z[i], lc.derive(Zb[j], Z[k]))):
                    return "skipped"

    R = riemann_curvature(triple)
    Rt = hermitian_curvature(triple)
    defects = []

    r_zczc = R.block(frame, "zczc")
    rt_zczc = Rt.block(frame, "zczc")
    r_zzzc = R.block(frame, "zzzc")
    rt_zzzc = Rt.block(frame, "zzzc")
    for pattern in ("cczz", "zzzz", "zczz"):
        blk = Rt.block(frame, pattern)
        if not blk.is_zero():
            defects.append((f"hermitian block {pattern} nonzero", None))

    r_czzz = R.block(frame, "czzz")
    r_cczz = R.block(frame, "cczz")
    r_zzzz = R.block(frame, "zzzz")

    for i in range(n):
        for j in range(n):
            for k in range(n):
                d_ik = lc.derive(Z[i], Z[k])
                for l in range(n):
                    # hermitian components against riemann + correction
                    corr = g.pair(d_ik, lc.derive(Zb[j], Zb[l]))
                    if rt_zczc[(i, j, k, l)] != r_zczc[(i, j, k, l)] - corr:
                        defects.append((("zczc", i, j, k, l), None))
                    if rt_zzzc[(i, j, k, l)] != r_zzzc[(i, j, k, l)]:
                        defects.append((("zzzc", i, j, k, l), None))
                    # second-derivative formulas for the Riemann tensor
                    v = -g.pair(lc.derive(Zb[j], d_ik), Zb[l])
                    if r_zczc[(i, j, k, l)] != v:
                        defects.append((("R zczc formula", i, j, k, l), None))
                    v = g.pair(lc.derive(Zb[i], lc.derive(Z[j], Z[k])), Z[l])
                    if r_czzz[(i, j, k, l)] != v:
                        defects.append((("R czzz formula", i, j, k, l), None))
                    v = -g.pair(
                        lc.derive(triple.alg.bracket(Zb[i], Zb[j]), Z[k]), Z[l]
                    )
                    if r_cczz[(i, j, k, l)] != v:
                        defects.append((("R cczz formula", i, j, k, l), None))
                    v = g.pair(lc.derive(Z[i], lc.derive(Z[j], Z[k])), Z[l]) - g.pair(
                        lc.derive(Z[j], lc.derive(Z[i], Z[k])), Z[l]
                    )
                    if r_zzzz[(i, j, k, l)] != v:
                        defects.append((("R zzzz formula", i, j, k, l), None))
    return "pass" if not defects else defects


@dataclass(frozen=True)
class CurvatureReport:
    """All scalar and boolean curvature invariants of one structure."""

    s: object
    s_star: object
    ricci: Tensor
    ricci_star: Tensor
    nabla_omega_sq: object
    gray: dict
    bianchi_defect_zero: dict
    w4: object | None
    hermitian_curvature_zero: bool
    tosatti_zero: bool
    tosatti_positivity: str
    canonical_certified: bool


def curvature_report(triple: HermitianTriple) -> CurvatureReport:
    lc = levi_civita(triple)
    frame = triple.frame()
    R = riemann_curvature(triple)
    Rt = hermitian_curvature(triple)
    inv = scalar_invariants(R, triple)
    gray = {
        RIEMANN: gray_check(R, frame),
        HERMITIAN: gray_check(Rt, frame),
    }
    bianchi = {
        RIEMANN: first_bianchi_defect(R).is_zero(),
        HERMITIAN: first_bianchi_defect(Rt).is_zero(),
    }
    n = triple.n
    w4 = None if n < 2 else w4_projection(inv["s"], inv["s_star"], n)
    ncoef = anti_bracket_coefficients(triple, frame)
    tos, tos_zero = tosatti_tensor(Rt, ncoef, frame)
    return CurvatureReport(
        s=inv["s"],
        s_star=inv["s_star"],
        ricci=inv["ricci"],
        ricci_star=inv["ricci_star"],
        nabla_omega_sq=nabla_omega_norm(lc, triple),
        gray=gray,
        bianchi_defect_zero=bianchi,
        w4=w4,
        hermitian_curvature_zero=Rt.is_zero(),
        tosatti_zero=tos_zero,
        tosatti_positivity=tosatti_positivity(tos, frame),
        canonical_certified=canonical_connection(triple, lc).canonical_certified,
    )
