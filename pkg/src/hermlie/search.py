"""Seeded random-structure sampler and theorem search harness.

Candidate algebras are 2-step nilpotent by construction: a basis split
into generators and a central bracket image makes the Jacobi identity
automatic (every double bracket dies in the center), which is the only
way to hit the measure-zero variety of valid structure constants with a
random draw.  Within each family the Kahler-type class conditions
(closedness of the standard fundamental form, or vanishing of its (1,2)
component) are *linear* in the structure constants, so the sampler draws
random rational points from the exact nullspace of those conditions
rather than rejection-sampling an equality that almost never holds.

The almost complex structure is then varied by conjugating the standard
one with a random rational symplectic matrix (a random symplectic basis)
and the metric is recovered from taming, so every emitted structure is a
validated triple of the requested class.  Everything is driven by a
deterministic seed: sample ``i`` of a run depends only on ``(seed, i)``,
which makes partitioning across workers order-independent.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import NotApplicable
from .lie import FrameChange, LieAlgebra, change_frame, nilpotency_step
from .scalars import ZERO, GaussianRational, gauss, rat
from .structures import (
    AlmostComplexStructure,
    HermitianTriple,
    InvariantForm,
    classify,
    metric_from_taming,
)
from .tensors import Tensor, invert_rows, mat_mul, nullspace
from .theorems import TheoremVerdict, all_verdicts, heisenberg_normalize

_ONE = gauss(1)

SAMPLE_KINDS = (
    "quasi_kahler",
    "almost_kahler",
    "flat_abelian",
    "heisenberg_scaled",
)


def _standard_j_rows(dim: int):
    n = dim // 2
    rows = [[ZERO] * dim for _ in range(dim)]
    for a in range(n):
        rows[a + n][a] = _ONE
        rows[a][a + n] = -_ONE
    return rows


def _standard_omega(dim: int) -> list[list[GaussianRational]]:
    # omega(v, w) = g0(J0 v, w) for the identity metric
    n = dim // 2
    rows = [[ZERO] * dim for _ in range(dim)]
    for a in range(n):
        rows[a][a + n] = _ONE
        rows[a + n][a] = -_ONE
    return rows


def _centers(dim: int) -> list[tuple]:
    n = dim // 2
    j_pair = tuple(range(n - 1, n)) + tuple(range(dim - 1, dim))  # {X_n, X_2n}
    if dim == 4:
        return [(2, 3)]
    if dim == 6:
        return [(2, 5), (4, 5), (2, 4), (1, 2, 4, 5)]
    return [j_pair, (n - 2, n - 1, dim - 2, dim - 1)]


def _slot_brackets(slot, value=_ONE) -> dict:
    a, b, k = slot
    return {(a, b): {k: value}}


def _d_omega_rows(dim: int, slots, complex_frame_rows=None):
    """For each parameter slot, the vector of d(omega0) components that a
    unit structure constant in that slot produces."""
    om = _standard_omega(dim)

    def omega(v, w):
        total = ZERO
        for a in range(dim):
            if v[a]:
                for b in range(dim):
                    if om[a][b] and w[b]:
                        total = total + v[a] * om[a][b] * w[b]
        return total

    rows = []
    triples = [
        (p, q, r)
        for p in range(dim)
        for q in range(p + 1, dim)
        for r in range(q + 1, dim)
    ]
    for slot in slots:
        a, b, k = slot
        ek = tuple(_ONE if i == k else ZERO for i in range(dim))

        def bracket(v, w):
            coeff = v[a] * w[b] - v[b] * w[a]
            return tuple(coeff * x for x in ek)

        if complex_frame_rows is None:
            row = []
            for (p, q, r) in triples:
                ep = tuple(_ONE if i == p else ZERO for i in range(dim))
                eq = tuple(_ONE if i == q else ZERO for i in range(dim))
                er = tuple(_ONE if i == r else ZERO for i in range(dim))
                row.append(
                    -omega(bracket(ep, eq), er)
                    + omega(bracket(ep, er), eq)
                    - omega(bracket(eq, er), ep)
                )
        else:
            row = []
            n = dim // 2
            Z = complex_frame_rows[:n]
            Zb = complex_frame_rows[n:]
            for i in range(n):
                for j in range(n):
                    for kk in range(j + 1, n):
                        v = (
                            -omega(bracket(Z[i], Zb[j]), Zb[kk])
                            + omega(bracket(Z[i], Zb[kk]), Zb[j])
                            - omega(bracket(Zb[j], Zb[kk]), Z[i])
                        )
                        row.append(v)
        rows.append(row)
    return rows


_FAMILY_CACHE: dict = {}


def _family_basis(dim: int, center: tuple, kind: str):
    """Nullspace basis of the class condition inside the 2-step family
    with the given central subspace (parameter slots are (a, b, k) with
    a < b generators and k central)."""
    key = (dim, center, kind)
    if key in _FAMILY_CACHE:
        return _FAMILY_CACHE[key]
    gens = [a for a in range(dim) if a not in center]
    slots = [
        (a, b, k)
        for i, a in enumerate(gens)
        for b in gens[i + 1 :]
        for k in center
    ]
    if kind == "almost_kahler" or dim == 4:
        rows = _d_omega_rows(dim, slots)
    else:
        n = dim // 2
        frame = [
            tuple(
                (_ONE if i == a else ZERO) - gauss(0, 1) * (_ONE if i == a + n else ZERO)
                for i in range(dim)
            )
            for a in range(n)
        ]
        frame += [tuple(x.conjugate() for x in z) for z in frame]
        complex_rows = _d_omega_rows(dim, slots, complex_frame_rows=frame)
        rows = []
        for crow in complex_rows:
            rows.append([x for v in crow for x in (gauss(v.re), gauss(v.im))])
    # condition matrix: one column per condition, one row per slot -> we
    # need combinations of slots killing every condition, i.e. the
    # nullspace of the transposed matrix
    if slots:
        mat = [[rows[s][c] for s in range(len(slots))] for c in range(len(rows[0]))]
        basis = nullspace(mat) if mat else []
    else:
        basis = []
    _FAMILY_CACHE[key] = (slots, basis)
    return slots, basis


_COEFF_POOL = (1, -1, 2, -2, rat(1, 2), rat(-1, 2), 1, -1)


def _random_symplectic(rng: random.Random, dim: int):
    """A random rational symplectic matrix: a short product of block
    shears and diagonal rescalings preserving the standard form."""
    n = dim // 2
    total = [[_ONE if i == j else ZERO for j in range(dim)] for i in range(dim)]
    for _ in range(rng.randrange(1, 3)):
        style = rng.randrange(3)
        m = [[_ONE if i == j else ZERO for j in range(dim)] for i in range(dim)]
        if style == 0:
            # [[A, 0], [0, (A^T)^{-1}]] with A a unit shear or rescale
            a_rows = [[_ONE if i == j else ZERO for j in range(n)] for i in range(n)]
            if rng.random() < 0.5 and n >= 2:
                i, j = rng.sample(range(n), 2)
                a_rows[i][j] = gauss(rng.choice(_COEFF_POOL))
            else:
                i = rng.randrange(n)
                a_rows[i][i] = gauss(rng.choice((2, rat(1, 2), -1)))
            a_inv_t = [list(col) for col in zip(*invert_rows(a_rows))]
            for i in range(n):
                for j in range(n):
                    m[i][j] = a_rows[i][j]
                    m[i + n][j + n] = a_inv_t[i][j]
        else:
            # [[I, B], [0, I]] or [[I, 0], [C, I]] with B, C symmetric
            i = rng.randrange(n)
            j = rng.randrange(n)
            v = gauss(rng.choice(_COEFF_POOL))
            if style == 1:
                m[i][j + n] = m[i][j + n] + v
                if i != j:
                    m[j][i + n] = m[j][i + n] + v
            else:
                m[i + n][j] = m[i + n][j] + v
                if i != j:
                    m[j + n][i] = m[j + n][i] + v
        total = mat_mul(total, m)
    return total


_IWASAWA_PATTERN = {(0, 1): {2: 1}, (3, 4): {2: -1}, (1, 3): {5: 1}, (4, 0): {5: 1}}


def sample_triple(dim: int, seed, index: int, kind: str) -> HermitianTriple:
    """Deterministically generate sample ``index`` of the given kind."""
    rng = random.Random(f"{seed}:{index}:{kind}")
    brackets: dict = {}
    if kind == "flat_abelian":
        pass
    elif kind == "heisenberg_scaled":
        t = rat(rng.choice((1, 2, 3, -1, -2)), rng.choice((1, 2)))
        if dim == 6:
            brackets = {
                pair: {k: t * v for k, v in comps.items()}
                for pair, comps in _IWASAWA_PATTERN.items()
            }
        else:
            brackets = {(0, 1): {2: t}}
    else:
        centers = list(_centers(dim))
        start = rng.randrange(len(centers))
        slots, basis = [], []
        for offset in range(len(centers)):
            slots, basis = _family_basis(dim, centers[(start + offset) % len(centers)], kind)
            if basis:
                break
        coeffs = [ZERO] * len(basis)
        if basis:
            picks = min(len(basis), 1 + rng.randrange(3))
            for pos in rng.sample(range(len(basis)), picks):
                coeffs[pos] = gauss(rng.choice(_COEFF_POOL))
        accum: dict = {}
        for coeff, vec in zip(coeffs, basis):
            if not coeff:
                continue
            for slot, x in zip(slots, vec):
                if x:
                    a, b, k = slot
                    accum.setdefault((a, b), {}).setdefault(k, ZERO)
                    accum[(a, b)][k] = accum[(a, b)][k] + coeff * x
        brackets = {
            pair: {k: v for k, v in comps.items() if v}
            for pair, comps in accum.items()
        }
        brackets = {pair: comps for pair, comps in brackets.items() if comps}

    alg = LieAlgebra.from_brackets(dim, brackets)
    j_rows = _standard_j_rows(dim)
    omega = Tensor.from_nested(_standard_omega(dim))

    if rng.random() < 0.5:
        m = _random_symplectic(rng, dim)
        alg = LieAlgebra(change_frame(alg, FrameChange(Tensor.from_nested(m))))
        m_inv = invert_rows(m)
        j_rows = mat_mul(m_inv, mat_mul(j_rows, m))

    J = AlmostComplexStructure(Tensor.from_nested(j_rows))
    g = metric_from_taming(alg, J, InvariantForm(omega))
    return HermitianTriple(alg, J, g)


@dataclass(frozen=True)
class SearchResult:
    """One evaluated sample: classification flags, verdicts, and a lazy
    handle to regenerate the exact triple (samples are deterministic in
    (seed, index, kind))."""

    index: int
    dim: int
    seed: object
    kind: str
    flags: dict
    verdicts: tuple
    hermitian_flat: bool
    nilpotency: object

    @property
    def counterexamples(self) -> tuple:
        return tuple(v for v in self.verdicts if not v.consistent)

    def triple(self) -> HermitianTriple:
        return sample_triple(self.dim, self.seed, self.index, self.kind)


def evaluate_sample(dim: int, seed, index: int, kind: str) -> SearchResult:
    triple = sample_triple(dim, seed, index, kind)
    from .curvature import hermitian_curvature

    verdicts = tuple(all_verdicts(triple))
    return SearchResult(
        index=index,
        dim=dim,
        seed=seed,
        kind=kind,
        flags=dict(classify(triple)),
        verdicts=verdicts,
        hermitian_flat=hermitian_curvature(triple).is_zero(),
        nilpotency=nilpotency_step(triple.alg),
    )


def random_structure_search(
    dim: int,
    samples: int,
    seed,
    workers: int = 1,
    mix: tuple = SAMPLE_KINDS,
):
    """Generate and evaluate ``samples`` structures; yields SearchResult
    in index order.  Results are a pure function of (seed, index), so any
    worker partition produces the same stream."""
    if dim not in (4, 6, 8):
        raise NotApplicable(f"search supports dims 4, 6, 8, not {dim}")
    if samples <= 0:
        return
    tasks = [(dim, seed, i, mix[i % len(mix)]) for i in range(samples)]
    if workers <= 1:
        for t in tasks:
            yield evaluate_sample(*t)
        return
    import multiprocessing

    with multiprocessing.Pool(workers) as pool:
        for result in pool.imap(_evaluate_star, tasks, chunksize=8):
            yield result


def _evaluate_star(args):
    return evaluate_sample(*args)
