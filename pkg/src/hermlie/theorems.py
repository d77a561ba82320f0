"""Decision procedures for the classification theorems: each one checks
its hypotheses and conclusion exactly on a given structure and returns a
verdict.  A verdict with hypotheses met and conclusion failed would be a
counterexample, i.e. a hard failure of either the engine or the theorem,
and is surfaced with full witness data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .connections import canonical_connection, covariant_derivative, levi_civita
from .curvature import (
    anti_bracket_coefficients,
    f_condition_check,
    first_bianchi_defect,
    gray_check,
    hermitian_curvature,
    riemann_curvature,
)
from .errors import (
    HypothesisFailed,
    NotApplicable,
    NotAlmostKahler,
    NotQuasiKahler,
    PivotNotFound,
    WrongDimension,
)
from .lie import NOT_NILPOTENT, FrameChange, LieAlgebra, change_frame, nilpotency_step
from .scalars import ZERO, gauss
from .structures import (
    AlmostComplexStructure,
    ComplexFrame,
    HermitianTriple,
    InvariantForm,
    classify,
    d_omega,
    exterior_derivative,
    greedy_frame_vectors,
    holo_part,
    nijenhuis,
    nijenhuis_tensor,
    wedge,
)
from .tensors import (
    Tensor,
    solve_with_certificate,
    vec_conj,
    vec_is_zero,
)

_ONE = gauss(1)


@dataclass(frozen=True)
class TheoremVerdict:
    """Outcome of one theorem instance on one structure."""

    statement: str
    hypotheses_met: bool
    conclusion_holds: bool
    witness: dict | None = None

    @property
    def consistent(self) -> bool:
        """False exactly when this verdict is a counterexample."""
        return self.conclusion_holds or not self.hypotheses_met


def theorem_main(triple: HermitianTriple) -> TheoremVerdict:
    """For quasi Kahler structures, the canonical-connection curvature
    satisfies the first Bianchi identity if and only if the Riemann
    curvature satisfies the third Gray identity *and* the
    Nijenhuis-derivative condition ``R(Z_i,Z_j,-,-) = F/4``.

    Both sides are computed independently; the verdict's conclusion is
    their agreement.
    """
    if not classify(triple)["quasi_kahler"]:
        raise NotQuasiKahler("the Bianchi equivalence needs a quasi Kahler triple")
    from .connections import f_tensor

    frame = triple.frame()
    lc = levi_civita(triple)
    bianchi_zero = first_bianchi_defect(hermitian_curvature(triple)).is_zero()
    R = riemann_curvature(triple)
    g3 = gray_check(R, frame)["G3"]
    f_defects = f_condition_check(R, f_tensor(triple, lc), frame)
    rhs = g3 and not f_defects
    return TheoremVerdict(
        statement="bianchi_gray_equivalence",
        hypotheses_met=True,
        conclusion_holds=bianchi_zero == rhs,
        witness={
            "bianchi_defect_zero": bianchi_zero,
            "third_gray": g3,
            "f_condition_defects": len(f_defects),
        },
    )


def corollary_almost_kahler(triple: HermitianTriple) -> TheoremVerdict:
    """Almost Kahler + first Bianchi identity for the canonical
    connection's curvature forces integrability."""
    if not classify(triple)["almost_kahler"]:
        raise NotAlmostKahler("the corollary needs an almost Kahler triple")
    bianchi_zero = first_bianchi_defect(hermitian_curvature(triple)).is_zero()
    integrable = nijenhuis_tensor(triple).is_zero()
    return TheoremVerdict(
        statement="almost_kahler_bianchi_integrability",
        hypotheses_met=bianchi_zero,
        conclusion_holds=integrable,
        witness=None
        if integrable or not bianchi_zero
        else {"nonzero_nijenhuis": True},
    )


def rflat_frame_pattern(triple: HermitianTriple, frame: ComplexFrame) -> dict:
    """The bracket pattern equivalent to vanishing hermitian curvature:
    mixed brackets ``[Z_i, conj(Z_j)]`` vanish, and brackets of two
    (1,0)-vectors are purely (0,1).  Frame-independent: the flags only
    depend on the eigen-distributions of J."""
    Z = frame.vectors
    Zb = frame.conj_vectors()
    n = frame.n
    mixed = all(
        vec_is_zero(triple.alg.bracket(Z[i], Zb[j]))
        for i in range(n)
        for j in range(n)
    )
    holo = all(
        vec_is_zero(holo_part(triple.J, triple.alg.bracket(Z[i], Z[j])))
        for i in range(n)
        for j in range(i + 1, n)
    )
    return {
        "mixed_brackets_zero": mixed,
        "holomorphic_brackets_antiholomorphic": holo,
    }


def heisenberg_normalize(alg: LieAlgebra, J) -> FrameChange:
    """Normalize a 6-dimensional non-integrable curvature-flat-pattern
    algebra to the complex Heisenberg bracket table.

    Produces a (1,0)-frame ``W`` with ``[W_1, W_2] = conj(W_3)`` and all
    other basis brackets zero: the pivot pair is the lexicographically
    smallest ``(i, j)`` with ``[Z_i, Z_j] != 0`` (the Jacobi identity
    then forces the third-coordinate coefficient to be nonzero), and
    ``W_3 := conj([Z_i, Z_j])``, which is automatically a (1,0)-vector
    independent of ``Z_i, Z_j``.  The output bracket table is re-verified
    exactly.
    """
    if alg.dim != 6:
        raise WrongDimension("normalization is for 6-dimensional algebras")
    if not isinstance(J, AlmostComplexStructure):
        J = AlmostComplexStructure(J)
    Z = greedy_frame_vectors(J, 6)
    Zb = [vec_conj(z) for z in Z]
    for i in range(3):
        for j in range(3):
            if not vec_is_zero(alg.bracket(Z[i], Zb[j])):
                raise NotApplicable("mixed frame brackets do not vanish")
    pivot = None
    for i in range(3):
        for j in range(i + 1, 3):
            br = alg.bracket(Z[i], Z[j])
            if not vec_is_zero(holo_part(J, br)):
                raise NotApplicable("a holomorphic bracket has a (1,0)-part")
            if pivot is None and not vec_is_zero(br):
                pivot = (i, j, br)
    if pivot is None:
        raise NotApplicable("all frame brackets vanish (integrable structure)")
    i, j, br = pivot
    k = next(m for m in range(3) if m not in (i, j))
    # the coefficient of conj(Z_k) in [Z_i, Z_j] is forced nonzero by Jacobi
    coeffs = ComplexFrame(Z, J, None).coefficients(br)
    if not coeffs[3 + k]:
        raise PivotNotFound(
            "third-coordinate bracket coefficient vanished; this contradicts "
            "the Jacobi identity"
        )
    w1, w2, w3 = Z[i], Z[j], vec_conj(br)
    cols = [w1, w2, w3, vec_conj(w1), vec_conj(w2), vec_conj(w3)]
    f = FrameChange.from_columns(cols)
    table = change_frame(alg, f)
    for a in range(6):
        for b in range(6):
            for c in range(6):
                expect = ZERO
                if (a, b, c) == (0, 1, 5):
                    expect = _ONE
                elif (a, b, c) == (1, 0, 5):
                    expect = -_ONE
                elif (a, b, c) == (3, 4, 2):
                    expect = _ONE
                elif (a, b, c) == (4, 3, 2):
                    expect = -_ONE
                if table[(c, a, b)] != expect:
                    raise PivotNotFound(
                        f"normalized bracket table wrong at {(a, b, c)}"
                    )
    return f


def two_step_check(triple: HermitianTriple) -> TheoremVerdict:
    """A quasi Kahler structure with vanishing hermitian curvature lives
    on an at-most-2-step nilpotent algebra."""
    if not classify(triple)["quasi_kahler"]:
        raise NotQuasiKahler("hypothesis needs a quasi Kahler triple")
    if not hermitian_curvature(triple).is_zero():
        raise HypothesisFailed("hermitian curvature does not vanish")
    step = nilpotency_step(triple.alg)
    ok = step != NOT_NILPOTENT and step <= 2
    return TheoremVerdict(
        statement="curvature_flat_two_step",
        hypotheses_met=True,
        conclusion_holds=ok,
        witness=None if ok else {"nilpotency_step": step},
    )


def flat_coframe_proposition(
    triple: HermitianTriple, frame: ComplexFrame
) -> TheoremVerdict:
    """An almost Kahler structure whose frame satisfies the flat bracket
    pattern is integrable.

    The procedure extracts the coefficients ``A^k_{ij}`` of
    ``[Z_i, Z_j] = sum_k A^k_{ij} conj(Z_k)``, verifies the cyclic
    identity coming from ``cyclic-sum g(N(X,Y),Z) = 0`` (gram-weighted,
    since the frame is not unitary), verifies the quadratic
    ``sum_k A^k_{ij} conj(A^s_{kr}) = 0`` forced by the Jacobi identity,
    and then asserts the conclusion ``A = 0``, i.e. the Nijenhuis tensor
    vanishes.
    """
    flags = classify(triple)
    pattern = rflat_frame_pattern(triple, frame)
    hypotheses = flags["almost_kahler"] and all(pattern.values())
    n = frame.n
    Z = frame.vectors
    gram = frame.gram.nested()

    A = [[[ZERO] * n for _ in range(n)] for _ in range(n)]  # A[k][i][j]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            co = frame.coefficients(triple.alg.bracket(Z[i], Z[j]))
            for k in range(n):
                A[k][i][j] = co[n + k]

    witness: dict = {}
    if hypotheses:
        # gram-weighted cyclic identity (reduces to A^k_{ij}+A^j_{ki}+A^i_{jk}=0
        # for a scalar gram)
        cyclic_ok = True
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    s = ZERO
                    for m in range(n):
                        s = (
                            s
                            + A[m][i][j] * gram[k][m]
                            + A[m][k][i] * gram[j][m]
                            + A[m][j][k] * gram[i][m]
                        )
                    if s:
                        cyclic_ok = False
        jacobi_ok = True
        for i in range(n):
            for j in range(n):
                for r in range(n):
                    for s_idx in range(n):
                        total = ZERO
                        for k in range(n):
                            total = total + A[k][i][j] * A[s_idx][k][r].conjugate()
                        if total:
                            jacobi_ok = False
        a_zero = all(
            not A[k][i][j] for k in range(n) for i in range(n) for j in range(n)
        )
        n_zero = nijenhuis_tensor(triple).is_zero()
        conclusion = cyclic_ok and jacobi_ok and a_zero and n_zero
        if not conclusion:
            witness = {
                "cyclic_identity": cyclic_ok,
                "jacobi_quadratic": jacobi_ok,
                "coefficients_zero": a_zero,
                "nijenhuis_zero": n_zero,
            }
    else:
        conclusion = nijenhuis_tensor(triple).is_zero()
    return TheoremVerdict(
        statement="flat_coframe_integrability",
        hypotheses_met=hypotheses,
        conclusion_holds=conclusion,
        witness=witness or None,
    )


def cyclic_nabla_n_check(triple: HermitianTriple, lc) -> TheoremVerdict:
    """For quasi Kahler structures, a vanishing cyclic sum of the
    covariant derivative of the Nijenhuis tensor forces integrability."""
    if not classify(triple)["quasi_kahler"]:
        raise NotQuasiKahler("hypothesis needs a quasi Kahler triple")
    dim = triple.alg.dim
    dn = covariant_derivative(lc, nijenhuis_tensor(triple))  # axes (a, b, c, k)
    cyclic_zero = True
    for a in range(dim):
        for b in range(dim):
            for c in range(dim):
                for k in range(dim):
                    v = dn[(a, b, c, k)] + dn[(b, c, a, k)] + dn[(c, a, b, k)]
                    if v:
                        cyclic_zero = False
                        break
                else:
                    continue
                break
    integrable = nijenhuis_tensor(triple).is_zero()
    return TheoremVerdict(
        statement="cyclic_nijenhuis_derivative_integrability",
        hypotheses_met=cyclic_zero,
        conclusion_holds=integrable,
        witness=None,
    )


@dataclass(frozen=True)
class TamingObstruction:
    """Outcome of the taming-deformation search: either a constant
    correction ``beta`` with ``d(omega + beta + conj(beta)) = 0``, or an
    exact inconsistency certificate (a left null combination of the
    linear system with nonzero right-hand pairing)."""

    solvable: bool
    coefficients: tuple | None
    beta: InvariantForm | None
    certificate: tuple | None
    equations: list | None = None


def taming_obstruction(triple: HermitianTriple) -> TamingObstruction:
    """Search for a constant 2-form ``beta = a z_12 + b z_23 + c z_13``
    (built from the (1,0)-coframe) making ``omega + beta + conj(beta)``
    closed.  The search is an exact rational linear solve; insolvability
    is certified by a left null vector of the augmented system."""
    if triple.alg.dim != 6:
        raise WrongDimension("the deformation ansatz lives in dimension 6")
    if not classify(triple)["quasi_kahler"]:
        raise NotQuasiKahler("the obstruction question assumes quasi Kahler")
    alg = triple.alg
    frame = triple.frame()
    zetas = frame.coframe()
    one_forms = [InvariantForm(Tensor((6,), list(z))) for z in zetas]
    basis_2forms = [
        wedge(one_forms[0], one_forms[1]),
        wedge(one_forms[1], one_forms[2]),
        wedge(one_forms[0], one_forms[2]),
    ]
    iunit = gauss(0, 1)
    # real unknowns: re(a), im(a), re(b), im(b), re(c), im(c)
    columns = []
    for bf in basis_2forms:
        re_dir = bf + bf.conjugate()
        im_dir = (bf.scale(iunit)) + (bf.scale(iunit)).conjugate()
        columns.append(exterior_derivative(alg, re_dir))
        columns.append(exterior_derivative(alg, im_dir))
    dom = d_omega(triple)
    triples = [(p, q, r) for p in range(6) for q in range(p + 1, 6) for r in range(q + 1, 6)]
    rows = []
    rhs = []
    for (p, q, r) in triples:
        row = [col.tensor[(p, q, r)] for col in columns]
        rows.append(row)
        rhs.append(-dom.tensor[(p, q, r)])
    solution, certificate = solve_with_certificate(rows, rhs)
    if solution is None:
        return TamingObstruction(
            solvable=False,
            coefficients=None,
            beta=None,
            certificate=certificate,
            equations=[rows, rhs],
        )
    coeffs = tuple(
        solution[2 * m] + iunit * solution[2 * m + 1] for m in range(3)
    )
    beta = basis_2forms[0].scale(coeffs[0])
    beta = beta + basis_2forms[1].scale(coeffs[1])
    beta = beta + basis_2forms[2].scale(coeffs[2])
    corrected = triple.omega_form() + beta + beta.conjugate()
    assert exterior_derivative(alg, corrected).is_zero()
    return TamingObstruction(
        solvable=True,
        coefficients=coeffs,
        beta=beta,
        certificate=None,
    )


def all_verdicts(triple: HermitianTriple) -> list[TheoremVerdict]:
    """Run every theorem decision procedure applicable to the triple."""
    flags = classify(triple)
    verdicts = []
    if flags["quasi_kahler"]:
        verdicts.append(theorem_main(triple))
        verdicts.append(cyclic_nabla_n_check(triple, levi_civita(triple)))
        if hermitian_curvature(triple).is_zero():
            verdicts.append(two_step_check(triple))
    if flags["almost_kahler"]:
        verdicts.append(corollary_almost_kahler(triple))
    verdicts.append(flat_coframe_proposition(triple, triple.frame()))
    return verdicts
