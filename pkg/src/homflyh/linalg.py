"""Sparse exact linear algebra over the rationals.

Vectors are ``{index: coefficient}`` dicts with no zero entries.  The central
tool is :class:`SparseEchelon`, an incremental echelon form that remembers how
each stored row decomposes over the vectors that were inserted, which gives
kernels, ranks, and homology representatives with a projection map in one
pass.  Pivots are chosen deterministically (smallest index) so results are
identical across runs and thread counts.
"""

from __future__ import annotations

import heapq

from .exact import QQ0, QQ1, rational

Vec = dict


def vec_add_scaled(target: Vec, src: Vec, c) -> None:
    """In place: target += c * src."""
    if c == 0:
        return
    for i, v in src.items():
        s = target.get(i, QQ0) + c * v
        if s == 0:
            target.pop(i, None)
        else:
            target[i] = s


def vec_scale(v: Vec, c) -> Vec:
    if c == 0:
        return {}
    return {i: c * x for i, x in v.items()}


class SparseEchelon:
    """Incremental row echelon with optional provenance combos.

    Each stored row is normalized to pivot coefficient 1.  Vectors inserted
    with a tag carry a ``combo``: their expression over the tagged originals;
    untagged insertions skip provenance bookkeeping entirely.
    """

    def __init__(self):
        self.rows: dict = {}  # pivot index -> (vector, combo)

    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Vec) -> tuple[Vec, Vec]:
        """Reduce ``v`` against the stored rows.

        Returns ``(residual, combo)`` with ``v = residual + sum combo[tag] *
        original[tag]``.  Stored rows have their pivot at the minimum of
        their support, so processing indices in increasing order visits each
        pivot once.
        """
        residual = dict(v)
        combo: Vec = {}
        rows = self.rows
        heap = [i for i in residual if i in rows]
        heapq.heapify(heap)
        while heap:
            i = heapq.heappop(heap)
            c = residual.get(i)
            if c is None or c == 0:
                continue
            got = rows.get(i)
            if got is None:
                continue
            row, row_combo = got
            vec_add_scaled(residual, row, -c)
            if row_combo:
                vec_add_scaled(combo, row_combo, c)
            for j in row:
                if j > i and j in residual and j in rows:
                    heapq.heappush(heap, j)
        return residual, combo

    def insert(self, v: Vec, tag=None) -> tuple[bool, Vec]:
        """Insert a vector, optionally tagged for provenance.

        Returns ``(added, combo)``.  When the vector is dependent, ``added``
        is False and ``combo`` expresses it over previously inserted tags.
        """
        residual, combo = self.reduce(v)
        if not residual:
            return False, combo
        piv = min(residual)
        c = residual[piv]
        inv = QQ1 / c
        row = vec_scale(residual, inv)
        if tag is None:
            row_combo: Vec = {}
        else:
            # residual = v - sum combo*orig  =>  row = (orig[tag] - sum combo*orig)/c
            row_combo = vec_scale(combo, -inv)
            row_combo[tag] = row_combo.get(tag, QQ0) + inv
            if row_combo[tag] == 0:
                del row_combo[tag]
        self.rows[piv] = (row, row_combo)
        return True, combo


def column_reduce(cols: list[Vec]) -> tuple[SparseEchelon, list[Vec]]:
    """Echelonize columns; return (image echelon, kernel combinations).

    Kernel vectors are expressed over column indices and satisfy
    ``sum_j ker[j] * cols[j] = 0``.  Columns are inserted sparsest first to
    limit fill-in; the result is deterministic.
    """
    ech = SparseEchelon()
    kernel = []
    order = sorted(range(len(cols)), key=lambda j: (len(cols[j]), j))
    for j in order:
        added, combo = ech.insert(cols[j], j)
        if not added:
            z = vec_scale(combo, rational(-1))
            z[j] = QQ1
            kernel.append(z)
    kernel.sort(key=lambda z: max(z))
    return ech, kernel


def rank(cols: list[Vec]) -> int:
    """Rank of a sparse column family, no provenance tracking."""
    ech = SparseEchelon()
    for j in sorted(range(len(cols)), key=lambda j: (len(cols[j]), j)):
        if cols[j]:
            ech.insert(cols[j])
    return ech.rank()


class DegreeHomology:
    """Homology at one chain degree, with representatives and projection.

    Built from the outgoing differential (as columns over this degree's
    basis) and the incoming one (as columns over this degree's basis indices
    in the target role).  Realizes the decomposition
    ``C = H + B + d^{-1}(B')``: representatives span ``H``, the image echelon
    spans ``B``, and :meth:`project` writes any cycle over that basis.
    """

    def __init__(self, dim: int, out_cols: list[Vec], in_cols: list[Vec]):
        self.chain_dim = dim
        self._trivial = not any(out_cols) and not any(in_cols)
        if self._trivial:
            self.representatives = [{i: QQ1} for i in range(dim)]
            self.dim = dim
            return
        _, kernel = column_reduce(out_cols)
        self._ech = SparseEchelon()
        for t in sorted(range(len(in_cols)), key=lambda t: (len(in_cols[t]), t)):
            if in_cols[t]:
                self._ech.insert(in_cols[t])
        self.representatives: list[Vec] = []
        for z in kernel:
            added, _ = self._ech.insert(z, ("h", len(self.representatives)))
            if added:
                self.representatives.append(z)
        self.dim = len(self.representatives)

    def project(self, cycle: Vec) -> Vec:
        """Coordinates of a cycle on the homology representatives.

        Raises if the vector is not in the span of boundaries and
        representatives (i.e. not a cycle): that signals an internal
        consistency error upstream.
        """
        if self._trivial:
            return dict(cycle)
        residual, combo = self._ech.reduce(cycle)
        if residual:
            raise ArithmeticError("vector is not a cycle relative to this decomposition")
        return {tag[1]: c for tag, c in combo.items() if tag[0] == "h"}


def homology_dims_dense(matrices: dict[int, list[list]], dims: dict[int, int]) -> dict[int, int]:
    """Independent dense-elimination homology dimensions, for cross-checking.

    ``matrices[d]`` is the differential from degree d to d+1 as a dense
    row-major matrix (rows = target, cols = source).  Kept deliberately
    separate from the sparse path: rank via fraction-free style elimination
    on dense rational rows.
    """

    def dense_rank(mat: list[list]) -> int:
        if not mat or not mat[0]:
            return 0
        m = [list(map(rational, row)) for row in mat]
        nrows, ncols = len(m), len(m[0])
        r = 0
        for c in range(ncols):
            piv = None
            for i in range(r, nrows):
                if m[i][c] != 0:
                    piv = i
                    break
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            pv = m[r][c]
            for i in range(nrows):
                if i != r and m[i][c] != 0:
                    f = m[i][c] / pv
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            r += 1
            if r == nrows:
                break
        return r

    ranks = {d: dense_rank(mat) for d, mat in matrices.items()}
    out = {}
    for d, n in dims.items():
        rk_out = ranks.get(d, 0)
        rk_in = ranks.get(d - 1, 0)
        out[d] = n - rk_out - rk_in
    return out
