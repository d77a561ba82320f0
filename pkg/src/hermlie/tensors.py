"""Dense exact tensors with per-axis index kinds, plus the rational linear
algebra (inversion, solving, rank, nullspaces) used throughout the engine.

Tensors are immutable, stored densely in row-major order, and carry one
kind tag per axis: ``REAL`` for the real basis of the algebra, ``HOLO``
for a complex-frame (1,0) axis, ``ANTI`` for a (0,1) axis.  Conjugation
flips the two complex kinds.  Dimensions of interest are at most 8, so a
rank-4 tensor has at most 4096 entries and dense storage is cheap.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .errors import ShapeMismatch, Singular
from .scalars import ZERO, GaussianRational, gauss


class Kind:
    REAL = "real"
    HOLO = "(1,0)"
    ANTI = "(0,1)"

    _CONJ = {REAL: REAL, HOLO: ANTI, ANTI: HOLO}

    @classmethod
    def conj(cls, kind: str) -> str:
        return cls._CONJ[kind]


def _prod(xs) -> int:
    p = 1
    for x in xs:
        p *= x
    return p


class Tensor:
    """Immutable dense tensor of GaussianRational entries, rank 1..4."""

    __slots__ = ("dims", "kinds", "data", "_strides")

    def __init__(self, dims, data, kinds=None):
        dims = tuple(int(d) for d in dims)
        if not 1 <= len(dims) <= 4:
            raise ShapeMismatch(f"rank {len(dims)} outside 1..4")
        data = tuple(x if isinstance(x, GaussianRational) else gauss(x) for x in data)
        if len(data) != _prod(dims):
            raise ShapeMismatch(f"{len(data)} entries for dims {dims}")
        if kinds is None:
            kinds = (Kind.REAL,) * len(dims)
        kinds = tuple(kinds)
        if len(kinds) != len(dims):
            raise ShapeMismatch("one index kind required per axis")
        strides = []
        acc = 1
        for d in reversed(dims):
            strides.append(acc)
            acc *= d
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "_strides", tuple(reversed(strides)))

    def __setattr__(self, name, value):
        raise AttributeError("Tensor is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, dims, kinds=None) -> "Tensor":
        return cls(dims, [ZERO] * _prod(dims), kinds)

    @classmethod
    def from_nested(cls, nested, kinds=None) -> "Tensor":
        dims = []
        probe = nested
        while isinstance(probe, (list, tuple)):
            dims.append(len(probe))
            probe = probe[0]
        flat: list = []

        def walk(node, depth):
            if depth == len(dims):
                flat.append(node)
                return
            if len(node) != dims[depth]:
                raise ShapeMismatch("ragged nested data")
            for child in node:
                walk(child, depth + 1)

        walk(nested, 0)
        return cls(dims, flat, kinds)

    @classmethod
    def from_function(cls, dims, fn: Callable, kinds=None) -> "Tensor":
        flat = []
        for idx in _all_indices(dims):
            flat.append(fn(*idx))
        return cls(dims, flat, kinds)

    @classmethod
    def identity(cls, n: int, kinds=None) -> "Tensor":
        return cls.from_function((n, n), lambda a, b: ONE_ if a == b else ZERO, kinds)

    # -- access -------------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.dims)

    def __getitem__(self, idx):
        if isinstance(idx, int):
            idx = (idx,)
        flat = 0
        for i, s in zip(idx, self._strides):
            flat += i * s
        return self.data[flat]

    def nested(self):
        """Entries as nested lists (row-major)."""

        def build(depth, offset):
            if depth == self.rank - 1:
                s = self._strides[depth]
                return [self.data[offset + i * s] for i in range(self.dims[depth])]
            s = self._strides[depth]
            return [build(depth + 1, offset + i * s) for i in range(self.dims[depth])]

        return build(0, 0)

    def nonzero_items(self):
        for idx in _all_indices(self.dims):
            v = self[idx]
            if v:
                yield idx, v

    def is_zero(self) -> bool:
        return not any(self.data)

    # -- algebra ------------------------------------------------------------
    def map(self, fn: Callable) -> "Tensor":
        return Tensor(self.dims, [fn(x) for x in self.data], self.kinds)

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check_same_shape(other)
        return Tensor(
            self.dims, [a + b for a, b in zip(self.data, other.data)], self.kinds
        )

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check_same_shape(other)
        return Tensor(
            self.dims, [a - b for a, b in zip(self.data, other.data)], self.kinds
        )

    def __neg__(self) -> "Tensor":
        return Tensor(self.dims, [-a for a in self.data], self.kinds)

    def scale(self, c) -> "Tensor":
        c = gauss(c)
        return Tensor(self.dims, [c * a for a in self.data], self.kinds)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.dims == other.dims and self.data == other.data

    def __hash__(self):
        return hash((self.dims, self.data))

    def permute(self, order: Sequence[int]) -> "Tensor":
        order = tuple(order)
        dims = tuple(self.dims[a] for a in order)
        kinds = tuple(self.kinds[a] for a in order)
        out = []
        for idx in _all_indices(dims):
            src = [0] * self.rank
            for new_pos, old_axis in enumerate(order):
                src[old_axis] = idx[new_pos]
            out.append(self[tuple(src)])
        return Tensor(dims, out, kinds)

    def _check_same_shape(self, other: "Tensor"):
        if self.dims != other.dims:
            raise ShapeMismatch(f"{self.dims} vs {other.dims}")

    def __repr__(self):
        nz = sum(1 for x in self.data if x)
        return f"Tensor(dims={self.dims}, kinds={self.kinds}, nonzero={nz})"


ONE_ = gauss(1)


def _all_indices(dims):
    if not dims:
        yield ()
        return
    head, rest = dims[0], dims[1:]
    for i in range(head):
        for tail in _all_indices(rest):
            yield (i,) + tail


def conjugate_tensor(t: Tensor) -> Tensor:
    """Entrywise complex conjugate; complex-frame axis kinds are flipped."""
    return Tensor(
        t.dims,
        [x.conjugate() for x in t.data],
        tuple(Kind.conj(k) for k in t.kinds),
    )


def contract(
    t: Tensor,
    u: Tensor,
    axis_pairs: Sequence[tuple[int, int]],
    weights: Sequence[Tensor | None] | None = None,
):
    """Multilinear contraction of ``t`` with ``u`` along ``axis_pairs``.

    Each pair ``(i, j)`` sums axis ``i`` of ``t`` against axis ``j`` of
    ``u``; an optional rank-2 weight per pair inserts ``w[a][b]`` into the
    sum (inverse metrics, hermitian grams).  Result axes are the unpaired
    axes of ``t`` followed by those of ``u``, kinds inherited; a full
    contraction returns a scalar.
    """
    pairs = list(axis_pairs)
    if weights is None:
        weights = [None] * len(pairs)
    if len(weights) != len(pairs):
        raise ShapeMismatch("one weight slot per contracted pair")
    for (i, j), w in zip(pairs, weights):
        if w is None:
            if t.dims[i] != u.dims[j]:
                raise ShapeMismatch(f"axis {i} of t vs axis {j} of u")
        else:
            if w.rank != 2 or w.dims != (t.dims[i], u.dims[j]):
                raise ShapeMismatch("weight dims must match the paired axes")

    t_free = [a for a in range(t.rank) if a not in {i for i, _ in pairs}]
    u_free = [a for a in range(u.rank) if a not in {j for _, j in pairs}]
    out_dims = tuple(t.dims[a] for a in t_free) + tuple(u.dims[a] for a in u_free)
    out_kinds = tuple(t.kinds[a] for a in t_free) + tuple(u.kinds[a] for a in u_free)

    sum_dims_t = [t.dims[i] for i, _ in pairs]
    sum_dims_u = [u.dims[j] for _, j in pairs]

    def cell(free_idx):
        nt = len(t_free)
        ti = [0] * t.rank
        ui = [0] * u.rank
        for pos, a in enumerate(t_free):
            ti[a] = free_idx[pos]
        for pos, a in enumerate(u_free):
            ui[a] = free_idx[nt + pos]
        total = ZERO
        for ks in _all_indices(tuple(sum_dims_t)):
            for pos, (i, _) in enumerate(pairs):
                ti[i] = ks[pos]
            tv = t[tuple(ti)]
            if not tv:
                continue
            if all(w is None for w in weights):
                for pos, (_, j) in enumerate(pairs):
                    ui[j] = ks[pos]
                uv = u[tuple(ui)]
                if uv:
                    total = total + tv * uv
            else:
                for ls in _all_indices(tuple(sum_dims_u)):
                    wprod = ONE_
                    ok = True
                    for pos, w in enumerate(weights):
                        if w is None:
                            if ks[pos] != ls[pos]:
                                ok = False
                                break
                        else:
                            wv = w[(ks[pos], ls[pos])]
                            if not wv:
                                ok = False
                                break
                            wprod = wprod * wv
                    if not ok:
                        continue
                    for pos, (_, j) in enumerate(pairs):
                        ui[j] = ls[pos]
                    uv = u[tuple(ui)]
                    if uv:
                        total = total + tv * wprod * uv
        return total

    if not out_dims:
        return cell(())
    flat = [cell(idx) for idx in _all_indices(out_dims)]
    return Tensor(out_dims, flat, out_kinds)


def contract_self(t: Tensor, axis_a: int, axis_b: int, weight: Tensor | None = None):
    """Trace two axes of one tensor against each other (optionally weighted)."""
    if t.dims[axis_a] != (t.dims[axis_b] if weight is None else weight.dims[1]):
        pass
    d_a, d_b = t.dims[axis_a], t.dims[axis_b]
    if weight is None and d_a != d_b:
        raise ShapeMismatch("traced axes must have equal dims")
    free = [a for a in range(t.rank) if a not in (axis_a, axis_b)]
    out_dims = tuple(t.dims[a] for a in free)
    out_kinds = tuple(t.kinds[a] for a in free)

    def cell(free_idx):
        idx = [0] * t.rank
        for pos, a in enumerate(free):
            idx[a] = free_idx[pos]
        total = ZERO
        for a in range(d_a):
            idx[axis_a] = a
            if weight is None:
                idx[axis_b] = a
                v = t[tuple(idx)]
                if v:
                    total = total + v
            else:
                for b in range(d_b):
                    wv = weight[(a, b)]
                    if not wv:
                        continue
                    idx[axis_b] = b
                    v = t[tuple(idx)]
                    if v:
                        total = total + wv * v
        return total

    if not out_dims:
        return cell(())
    return Tensor(out_dims, [cell(i) for i in _all_indices(out_dims)], out_kinds)


def transform_axes(t: Tensor, mats, kinds=None) -> Tensor:
    """Re-express covariant axes of ``t`` in new basis vectors.

    ``mats[k]`` is either ``None`` (axis untouched) or a sequence of new
    basis vectors (each a length ``dims[k]`` sequence over the old basis);
    the result's axis ``k`` then indexes those vectors:
    ``T'(i, ...) = sum_a mats[k][i][a] T(a, ...)``.
    """
    data = list(t.data)
    dims = t.dims
    for k, M in enumerate(mats):
        if M is None:
            continue
        before = _prod(dims[:k])
        d = dims[k]
        after = _prod(dims[k + 1 :])
        m = len(M)
        out = [ZERO] * (before * m * after)
        for o in range(before):
            base_src = o * d * after
            base_dst = o * m * after
            for i, row in enumerate(M):
                dst = base_dst + i * after
                for a in range(d):
                    coeff = row[a]
                    if not coeff:
                        continue
                    src = base_src + a * after
                    for r in range(after):
                        v = data[src + r]
                        if v:
                            out[dst + r] = out[dst + r] + coeff * v
        data = out
        dims = dims[:k] + (m,) + dims[k + 1 :]
    if kinds is None:
        kinds = t.kinds
    return Tensor(dims, data, kinds)


# ---------------------------------------------------------------------------
# exact linear algebra on nested lists of GaussianRational
# ---------------------------------------------------------------------------


def mat_from_tensor(m: Tensor) -> list[list[GaussianRational]]:
    if m.rank != 2:
        raise ShapeMismatch("matrix expected")
    return m.nested()


def invert_matrix(m: Tensor) -> Tensor:
    """Exact inverse of a square rank-2 tensor (Gauss-Jordan)."""
    if m.rank != 2 or m.dims[0] != m.dims[1]:
        raise ShapeMismatch(f"square matrix expected, got dims {m.dims}")
    inv = invert_rows(m.nested())
    return Tensor.from_nested(inv, kinds=m.kinds)


def invert_rows(rows) -> list[list[GaussianRational]]:
    n = len(rows)
    a = [list(r) for r in rows]
    inv = [[ONE_ if i == j else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise Singular("matrix is singular")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
        p = a[col][col]
        if p != ONE_:
            a[col] = [x / p for x in a[col]]
            inv[col] = [x / p for x in inv[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if not f:
                continue
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
            inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return inv


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = [[ZERO] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if not c:
                continue
            bt = b[t]
            for j in range(m):
                v = bt[j]
                if v:
                    oi[j] = oi[j] + c * v
    return out


def mat_vec(a, v):
    out = []
    for row in a:
        s = ZERO
        for c, x in zip(row, v):
            if c and x:
                s = s + c * x
        out.append(s)
    return tuple(out)


def determinant(rows) -> GaussianRational:
    a = [list(r) for r in rows]
    n = len(a)
    det = ONE_
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if not f:
                continue
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def row_reduce(rows, aug=0):
    """Reduced row echelon form.  The last ``aug`` columns are carried
    along but never used as pivots.  Returns (matrix, pivot_columns)."""
    a = [list(r) for r in rows]
    if not a:
        return a, []
    n, m = len(a), len(a[0])
    pivots = []
    r = 0
    for col in range(m - aug):
        pivot = next((i for i in range(r, n) if a[i][col]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][col]
        if p != ONE_:
            a[r] = [x / p for x in a[r]]
        for i in range(n):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    return a, pivots


def rank_of(rows) -> int:
    _, pivots = row_reduce(rows)
    return len(pivots)


def nullspace(rows) -> list[tuple]:
    """Basis of the right nullspace of a matrix (list of vectors)."""
    if not rows:
        return []
    m = len(rows[0])
    red, pivots = row_reduce(rows)
    free_cols = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free_cols:
        v = [ZERO] * m
        v[fc] = ONE_
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(tuple(v))
    return basis


def solve_with_certificate(rows, rhs):
    """Solve ``A x = b`` exactly.

    Returns ``(solution, None)`` with free variables set to zero when the
    system is consistent, or ``(None, witness)`` where ``witness`` is a
    row combination ``y`` with ``y A = 0`` and ``y . b != 0`` proving
    inconsistency.
    """
    n = len(rows)
    m = len(rows[0]) if rows else 0
    # augment with b and an identity block that tracks row operations
    work = [
        list(rows[i]) + [rhs[i]] + [ONE_ if j == i else ZERO for j in range(n)]
        for i in range(n)
    ]
    red, pivots = row_reduce(work, aug=n + 1)
    for row in red:
        if not any(row[:m]) and row[m]:
            witness = tuple(row[m + 1 :])
            return None, witness
    x = [ZERO] * m
    for r, pc in enumerate(pivots):
        x[pc] = red[r][m]
    return tuple(x), None


# -- vector helpers ---------------------------------------------------------


def vec(entries) -> tuple:
    return tuple(x if isinstance(x, GaussianRational) else gauss(x) for x in entries)


def basis_vector(n: int, k: int) -> tuple:
    return tuple(ONE_ if i == k else ZERO for i in range(n))


def vec_add(v, w):
    return tuple(a + b for a, b in zip(v, w))


def vec_sub(v, w):
    return tuple(a - b for a, b in zip(v, w))


def vec_scale(c, v):
    c = gauss(c)
    return tuple(c * a for a in v)


def vec_conj(v):
    return tuple(a.conjugate() for a in v)


def vec_is_zero(v) -> bool:
    return not any(v)
