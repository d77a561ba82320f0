"""Finite-dimensional real Lie algebras given by rational structure
constants: bracket evaluation (with bilinear complex extension), Jacobi
validation, frame changes, and the lower central series.
"""

from __future__ import annotations

from .errors import JacobiViolation, NotAntisymmetric, ShapeMismatch, Singular
from .scalars import ZERO, GaussianRational, gauss
from .tensors import (
    Kind,
    Tensor,
    invert_rows,
    mat_vec,
    row_reduce,
    vec_add,
    vec_is_zero,
    vec_scale,
)


class LieAlgebra:
    """A Lie algebra of even dimension ``2n`` with structure constants
    ``c^k_{ab}`` meaning ``[X_a, X_b] = sum_k c^k_{ab} X_k``.

    Antisymmetry and the Jacobi identity are validated at construction;
    instances are immutable and safe to share.
    """

    __slots__ = ("dim", "c", "_table", "_pairs")

    def __init__(self, c: Tensor):
        if c.rank != 3 or len(set(c.dims)) != 1:
            raise ShapeMismatch(f"structure constants must be cubical, got {c.dims}")
        dim = c.dims[0]
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "c", c)
        table = [
            [tuple(c[(k, a, b)] for k in range(dim)) for b in range(dim)]
            for a in range(dim)
        ]
        object.__setattr__(self, "_table", table)
        pairs = [
            (a, b, table[a][b])
            for a in range(dim)
            for b in range(a + 1, dim)
            if not vec_is_zero(table[a][b])
        ]
        object.__setattr__(self, "_pairs", pairs)
        violations = jacobi_check(c)
        if violations:
            raise JacobiViolation(violations)

    def __setattr__(self, name, value):
        raise AttributeError("LieAlgebra is immutable")

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict) -> "LieAlgebra":
        """Build from a sparse table ``{(a, b): {k: coefficient}}`` with
        0-based indices and ``a < b``; antisymmetry is filled in."""
        flat = [ZERO] * dim**3
        for (a, b), comps in brackets.items():
            if a == b:
                if any(gauss(v) for v in comps.values()):
                    raise NotAntisymmetric(f"bracket [{a},{a}] must vanish")
                continue
            for k, v in comps.items():
                v = gauss(v)
                flat[(k * dim + a) * dim + b] = v
                flat[(k * dim + b) * dim + a] = -v
        return cls(Tensor((dim, dim, dim), flat))

    def bracket_basis(self, a: int, b: int) -> tuple:
        """``[X_a, X_b]`` as a coefficient vector."""
        return self._table[a][b]

    def bracket(self, v, w) -> tuple:
        """Bilinear extension of the bracket to (complexified) vectors."""
        if len(v) != self.dim or len(w) != self.dim:
            raise ShapeMismatch("vectors must have the algebra's dimension")
        out = [ZERO] * self.dim
        for a, b, vecs in self._pairs:
            coeff = v[a] * w[b] - v[b] * w[a]
            if not coeff:
                continue
            for k, ck in enumerate(vecs):
                if ck:
                    out[k] = out[k] + coeff * ck
        return tuple(out)

    def is_abelian(self) -> bool:
        return not self._pairs


def bracket(alg: LieAlgebra, v, w) -> tuple:
    return alg.bracket(v, w)


def jacobi_check(c: Tensor):
    """Return every basis triple where the cyclic Jacobi sum is nonzero,
    as ``[((a, b, d), defect_vector), ...]``; empty list means pass."""
    if c.rank != 3 or len(set(c.dims)) != 1:
        raise ShapeMismatch(f"structure constants must be cubical, got {c.dims}")
    dim = c.dims[0]
    for k in range(dim):
        for a in range(dim):
            for b in range(a, dim):
                if c[(k, a, b)] != -c[(k, b, a)]:
                    raise NotAntisymmetric(
                        f"c^{k}_{{{a},{b}}} != -c^{k}_{{{b},{a}}}"
                    )
    table = [
        [tuple(c[(k, a, b)] for k in range(dim)) for b in range(dim)]
        for a in range(dim)
    ]

    def brk(v, w):
        out = [ZERO] * dim
        for a in range(dim):
            va = v[a]
            if not va:
                continue
            for b in range(dim):
                wb = w[b]
                if not wb:
                    continue
                t = table[a][b]
                coeff = va * wb
                for k in range(dim):
                    if t[k]:
                        out[k] = out[k] + coeff * t[k]
        return tuple(out)

    violations = []
    for a in range(dim):
        for b in range(a + 1, dim):
            tab = table[a][b]
            for d in range(b + 1, dim):
                ea = tuple(ZERO if i != a else _ONE for i in range(dim))
                eb = tuple(ZERO if i != b else _ONE for i in range(dim))
                ed = tuple(ZERO if i != d else _ONE for i in range(dim))
                defect = vec_add(
                    vec_add(brk(tab, ed), brk(table[b][d], ea)),
                    brk(table[d][a], eb),
                )
                if not vec_is_zero(defect):
                    violations.append(((a, b, d), defect))
    return violations


_ONE = gauss(1)


NOT_NILPOTENT = "not_nilpotent"


def nilpotency_step(alg: LieAlgebra):
    """Smallest ``s`` with ``C^{s+1} = 0`` for the lower central series
    ``C^1 = g``, ``C^{k+1} = [g, C^k]``; returns ``NOT_NILPOTENT`` if the
    series stabilizes at a nonzero subspace."""
    dim = alg.dim
    current = [tuple(_ONE if i == k else ZERO for i in range(dim)) for k in range(dim)]
    step = 1
    prev_rank = dim
    while True:
        generated = []
        for a in range(dim):
            ea = tuple(_ONE if i == a else ZERO for i in range(dim))
            for v in current:
                w = alg.bracket(ea, v)
                if not vec_is_zero(w):
                    generated.append(list(w))
        if not generated:
            return step
        red, pivots = row_reduce(generated)
        rank = len(pivots)
        if rank == prev_rank:
            return NOT_NILPOTENT
        current = [tuple(red[r]) for r in range(rank)]
        prev_rank = rank
        step += 1


class FrameChange:
    """An invertible change of frame on the (complexified) algebra.

    The columns of ``matrix`` are the new frame vectors expressed over
    the old basis.
    """

    __slots__ = ("matrix", "inverse")

    def __init__(self, matrix: Tensor):
        if matrix.rank != 2 or matrix.dims[0] != matrix.dims[1]:
            raise ShapeMismatch("frame change must be a square matrix")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "inverse", invert_rows(matrix.nested()))

    def __setattr__(self, name, value):
        raise AttributeError("FrameChange is immutable")

    @classmethod
    def from_columns(cls, columns) -> "FrameChange":
        n = len(columns)
        rows = [[columns[j][i] for j in range(n)] for i in range(len(columns[0]))]
        return cls(Tensor.from_nested(rows))

    def column(self, j: int) -> tuple:
        return tuple(self.matrix[(i, j)] for i in range(self.matrix.dims[0]))


def change_frame(alg: LieAlgebra, f: FrameChange) -> Tensor:
    """Structure constants of ``alg`` expressed in the new frame."""
    dim = alg.dim
    if f.matrix.dims[0] != dim:
        raise ShapeMismatch("frame change dimension mismatch")
    cols = [f.column(j) for j in range(dim)]
    flat = [ZERO] * dim**3
    for a in range(dim):
        for b in range(a + 1, dim):
            u = alg.bracket(cols[a], cols[b])
            if vec_is_zero(u):
                continue
            coeffs = mat_vec(f.inverse, u)
            for k, v in enumerate(coeffs):
                if v:
                    flat[(k * dim + a) * dim + b] = v
                    flat[(k * dim + b) * dim + a] = -v
    return Tensor((dim, dim, dim), flat)
