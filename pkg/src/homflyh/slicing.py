"""Level slices: finite-dimensional rational chain data.

The level-l slice of the cube vertex (v, h) is spanned by the monomials of
degree ``e(l, v, h) = l + |h| + (i0 - i_(v,h)) / 2``; it is empty for
``e < 0`` and the whole slice vanishes for ``l < -2n``.  Slicing applies both
to the full double complex (used by the oracle path and the structural
property tests) and to a reduced horizontal cube, whose excluded directions
sit at coordinate 1 and whose ring may cap bound variables at power 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cube import CubeSpec
from .exact import MultiPoly
from .exclusion import HCube
from .linalg import DegreeHomology, Vec


class ResourceLimitExceeded(RuntimeError):
    """A configured slice-size cap was hit; results are partial."""


@dataclass
class VertexBasis:
    monomials: list
    index: dict  # monomial -> position


def _expand(poly: MultiPoly, basis: VertexBasis, out: Vec, offset: int, scale=1) -> None:
    for m, c in poly.terms.items():
        pos = basis.index.get(m)
        if pos is None:
            raise ArithmeticError("polynomial leaves the slice basis")
        v = c if scale == 1 else c * scale
        key = offset + pos
        s = out.get(key, 0) + v
        if s == 0:
            out.pop(key, None)
        else:
            out[key] = s


class SlicedHorizontal:
    """The level-l slice of one (possibly reduced) horizontal cube.

    Chain degrees are the original horizontal degrees: alpha = |h| + number
    of excluded directions.  Bases are materialized for alpha in
    ``[alpha_lo - 1, alpha_hi + 1]`` so homology is exact on the requested
    window.
    """

    def __init__(self, hcube: HCube, l: int, alpha_lo: int, alpha_hi: int,
                 dim_budget=None):
        self.hcube = hcube
        self.l = l
        self.alpha_lo = alpha_lo
        self.alpha_hi = alpha_hi
        self.bases: dict = {}
        self.offsets: dict = {}
        self.dims: dict = {}
        self.degree_of: dict = {}
        by_alpha: dict[int, list] = {}
        total = 0
        for h, alpha, base_e in hcube.slice_vertices():
            if alpha < alpha_lo - 1 or alpha > alpha_hi + 1:
                continue
            monos, index = hcube.slice_basis(l + base_e)
            if not monos:
                continue
            total += len(monos)
            if dim_budget is not None and total > dim_budget:
                raise ResourceLimitExceeded(
                    "slice dimension exceeded budget %d at level %d" % (dim_budget, l)
                )
            self.bases[h] = VertexBasis(monos, index)
            self.degree_of[h] = l + base_e
            by_alpha.setdefault(alpha, []).append(h)
        for alpha, hs in by_alpha.items():
            hs.sort()
            off = 0
            for h in hs:
                self.offsets[h] = off
                off += len(self.bases[h].monomials)
            self.dims[alpha] = off
        self._vertex_by_alpha = by_alpha
        self._homology: dict[int, DegreeHomology] = {}
        self._columns: dict[int, list] = {}

    def chain_dim(self, alpha: int) -> int:
        return self.dims.get(alpha, 0)

    def differential_columns(self, alpha: int) -> list:
        """Columns of d: C^alpha -> C^(alpha+1), one per source basis element."""
        if alpha in self._columns:
            return self._columns[alpha]
        hcube = self.hcube
        stage = hcube.final
        ring = stage.ring
        cube = hcube.cube
        cols: list[Vec] = [dict() for _ in range(self.chain_dim(alpha))]
        if hcube.all_factors_zero():
            self._columns[alpha] = cols
            return cols
        for h in self._vertex_by_alpha.get(alpha, ()):  # sorted at build time
            basis = self.bases[h]
            full = hcube.embed(len(hcube.stages) - 1, h)
            src_off = self.offsets[h]
            for pos, d in enumerate(stage.dirs):
                if h[pos]:
                    continue
                f = stage.factors[d]
                if f.is_zero():
                    continue
                target = h[:pos] + (1,) + h[pos + 1 :]
                tb = self.bases.get(target)
                sgn = cube.hsign(full, d)
                block = hcube.mult_columns(d, self.degree_of[h])
                for i in range(len(basis.monomials)):
                    src = block[i]
                    if not src:
                        continue
                    if tb is None:
                        raise ArithmeticError("differential image leaves the windowed slice")
                    t_off = self.offsets[target]
                    col = cols[src_off + i]
                    if sgn > 0:
                        for r, c in src.items():
                            key = t_off + r
                            s = col.get(key, 0) + c
                            if s == 0:
                                col.pop(key, None)
                            else:
                                col[key] = s
                    else:
                        for r, c in src.items():
                            key = t_off + r
                            s = col.get(key, 0) - c
                            if s == 0:
                                col.pop(key, None)
                            else:
                                col[key] = s
        self._columns[alpha] = cols
        return cols

    def homology(self, alpha: int) -> DegreeHomology:
        if alpha not in self._homology:
            out_cols = self.differential_columns(alpha)
            in_cols = self.differential_columns(alpha - 1) if self.chain_dim(alpha - 1) else []
            self._homology[alpha] = DegreeHomology(self.chain_dim(alpha), out_cols, in_cols)
        return self._homology[alpha]

    def _lookup(self, alpha: int) -> list:
        table = []
        for h in self._vertex_by_alpha.get(alpha, ()):
            for mono in self.bases[h].monomials:
                table.append((h, mono))
        return table

    def vector_from_coords(self, alpha: int, coords: Vec) -> dict:
        """Chain-level {vertex: polynomial} vector from coordinates at alpha."""
        table = self._lookup(alpha)
        polys: dict = {}
        cube_n = self.hcube.cube.n
        for idx, c in coords.items():
            h, mono = table[idx]
            term = MultiPoly(cube_n, {mono: c})
            polys[h] = polys[h] + term if h in polys else term
        return polys

    def coords_from_vector(self, vec: dict, alpha: int) -> Vec:
        """Slice coordinates of a chain-level vector concentrated at alpha."""
        out: Vec = {}
        m = len(self.hcube.final.fixed_ones)
        for h, poly in vec.items():
            if poly.is_zero():
                continue
            if sum(h) + m != alpha:
                raise ArithmeticError("vector is not concentrated in degree %d" % alpha)
            basis = self.bases.get(h)
            if basis is None:
                raise ArithmeticError("vector leaves the windowed slice")
            _expand(poly, basis, out, self.offsets[h])
        return out


def _vertices(k: int):
    if k == 0:
        yield ()
        return
    for rest in _vertices(k - 1):
        yield (0,) + rest
        yield (1,) + rest


# -- the full (unreduced) double-complex slice --------------------------------


class SliceComplex:
    """The whole level-l slice of the double complex, unreduced.

    Intended for small diagrams: structural property tests (d_H^2 = 0,
    d_V^2 = 0, anticommutation) and the exclusion-free oracle all run on
    this object.  Bases are indexed by full (v, h) pairs.
    """

    def __init__(self, cube: CubeSpec, l: int):
        self.cube = cube
        self.l = l
        n = cube.n
        self.bases: dict = {}
        if l < -2 * n:
            return
        from .exact import monomials_of_degree

        for v in _vertices(n):
            for h in _vertices(n):
                e = cube.monomial_degree(l, v, h)
                if e < 0:
                    continue
                monos = monomials_of_degree(n, e)
                self.bases[(v, h)] = VertexBasis(monos, {m: i for i, m in enumerate(monos)})

    def dim(self) -> int:
        return sum(len(b.monomials) for b in self.bases.values())

    def dh_entries(self):
        """Horizontal differential as ((v,h,i) -> list of ((v,h',j), coeff))."""
        return self._entries(horizontal=True)

    def dv_entries(self):
        return self._entries(horizontal=False)

    def _entries(self, horizontal: bool):
        cube = self.cube
        out = {}
        for (v, h), basis in self.bases.items():
            for p in range(cube.n):
                if horizontal:
                    if h[p]:
                        continue
                    f = cube.hfactors[p][v[p]]
                    target = (v, h[:p] + (1,) + h[p + 1 :])
                    sgn = cube.hsign(h, p)
                else:
                    if v[p]:
                        continue
                    f = cube.vfactors[p][h[p]]
                    target = (v[:p] + (1,) + v[p + 1 :], h)
                    # global (-1)^|h| twist makes d_H and d_V anticommute
                    sgn = cube.vsign(v, p) * (-1 if sum(h) & 1 else 1)
                if f.is_zero():
                    continue
                tb = self.bases.get(target)
                if tb is None:
                    continue
                for i, mono in enumerate(basis.monomials):
                    img = f.mul_monomial(mono)
                    cell = []
                    for mm, c in img.terms.items():
                        j = tb.index.get(mm)
                        if j is None:
                            raise ArithmeticError("slice is not closed under the differential")
                        cell.append(((target[0], target[1], j), c if sgn > 0 else -c))
                    if cell:
                        out.setdefault((v, h, i), []).extend(cell)
        return out
