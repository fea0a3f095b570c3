"""Two-stage homology over the rationals and the top-level algorithms.

Per level l the engine computes, for every cube vertex v, the homology of the
sliced (reduced) horizontal complex with representatives, assembles the
induced vertical complex from transported blocks ``phi . d_V . psi``, and
takes homology again.  In knot mode (braid closures) the levels run over
``[-2n, -n]`` and cells are skipped unless their final triple grading lies in
the support windows:

* q-degree i in ``[-n+s-1, 0]``, the positive half filled in afterwards by
  the symmetry ``h(-i, j, k+2i) = h(i, j, k)``;
* a-degree j in ``[w-s+1, w+s-1]``;
* k and k+2i in ``[-n+s-1, n-s+1]``.

General mode computes every cell of every level up to a caller-supplied
cutoff and flags the result as partial.  The final grading shift
``(-w+s-1, w+s-1, w-s+1)`` is applied when recording cells.

The mirror-dual algorithm computes on the mirror diagram when the writhe is
positive and returns the dual dimensions ``h(i,j,k) = h_mirror(-i,-j,-k)``;
negative crossings make slice bases strictly smaller.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .cube import CubeSpec, build_cube
from .edge_ring import build_basis
from .exclusion import HCube
from .knots import (
    BraidWord,
    Diagram,
    DiagramError,
    braid_closure,
    free_reduce_cyclic,
    mirror,
    seifert_data,
)
from .linalg import DegreeHomology, Vec, rank
from .slicing import ResourceLimitExceeded, SlicedHorizontal

ALGORITHM_VERSION = "1"


@dataclass(frozen=True)
class EngineOptions:
    mode: str = "knot"  # "knot" | "general"
    max_level: int | None = None  # general-mode level cutoff (inclusive)
    threads: int = 1
    tree_variant: int = 0
    sign_variant: int = 0
    pivot_variant: int = 0
    use_exclusion: bool = True
    symmetric_fill: bool = True
    full_i_range: bool = False  # compute both signs of i instead of filling by symmetry
    max_slice_dim: int | None = None


@dataclass
class TripleGradedDims:
    """The invariant: a finitely supported map (i, j, k) -> dimension."""

    dims: dict
    w: int
    s: int
    n: int
    source: str = ""
    mode: str = "knot"
    levels: tuple | None = None
    complete: bool = True
    mirrored: bool = False
    aborted: bool = False

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def support(self):
        return sorted(self.dims)

    def dual(self) -> "TripleGradedDims":
        return TripleGradedDims(
            dims={(-i, -j, -k): d for (i, j, k), d in self.dims.items()},
            w=-self.w,
            s=self.s,
            n=self.n,
            source="dual of %s" % self.source,
            mode=self.mode,
            levels=self.levels,
            complete=self.complete,
            mirrored=not self.mirrored,
            aborted=self.aborted,
        )

    def to_dict(self) -> dict:
        return {
            "w": self.w,
            "s": self.s,
            "n": self.n,
            "mode": self.mode,
            "complete": self.complete,
            "generators": [
                {"i": i, "j": j, "k": k, "dim": d}
                for (i, j, k), d in sorted(self.dims.items())
            ],
        }


def unknot_dims(source: str = "unknot") -> TripleGradedDims:
    return TripleGradedDims(
        dims={(0, 0, 0): 1}, w=0, s=1, n=0, source=source, mode="knot", complete=True
    )


class HomologyEngine:
    """Algorithm state for one diagram; immutable inputs, cached reductions."""

    def __init__(self, diagram: Diagram, options: EngineOptions = EngineOptions()):
        self.diagram = diagram
        self.options = options
        self.sd = seifert_data(diagram)
        self.basis = build_basis(diagram, self.sd, variant=options.tree_variant)
        self.cube: CubeSpec = build_cube(
            diagram, self.basis, self.sd, sign_variant=options.sign_variant
        )
        self._hcubes: dict = {}
        self._hcube_lock = threading.Lock()

    # -- plumbing ---------------------------------------------------------------

    def hcube(self, v: tuple) -> HCube:
        got = self._hcubes.get(v)
        if got is not None:
            return got
        built = HCube(
            self.cube,
            v,
            use_exclusion=self.options.use_exclusion,
            pivot_variant=self.options.pivot_variant,
        )
        with self._hcube_lock:
            return self._hcubes.setdefault(v, built)

    def _windows(self, l: int):
        """Admissible (alpha, cell-filter) data for one level.

        Returns (alphas, beta_lo, beta_hi, keep) where keep(alpha, beta) says
        whether the final (i, j, k) cell is inside the knot-mode windows.
        """
        g = self.cube.grading
        n, s, w = g.n, g.s, g.w
        di, dj, dk = g.bar_shift
        if self.options.mode != "knot":
            alphas = list(range(0, n + 1))
            return alphas, 0, n, (lambda a, b: True)
        lo = -(n - s + 1)
        i_hi = -lo if self.options.full_i_range else 0
        alphas = []
        for a in range(max(0, n - s + 1), n + 1):
            i_bar = g.i0 + 2 * l + 2 * a + di
            if lo <= i_bar <= i_hi:
                alphas.append(a)
        if not alphas:
            return [], 0, -1, (lambda a, b: False)
        betas = set()
        for a in alphas:
            i_bar = g.i0 + 2 * l + 2 * a + di
            for b in range(0, n + 1):
                k_bar = g.k0 + 2 * b + dk
                if lo <= k_bar <= -lo and lo <= k_bar + 2 * i_bar <= -lo:
                    betas.add(b)
        if not betas:
            return [], 0, -1, (lambda a, b: False)

        def keep(a: int, b: int) -> bool:
            i_bar = g.i0 + 2 * l + 2 * a + di
            k_bar = g.k0 + 2 * b + dk
            return (
                lo <= i_bar <= i_hi
                and lo <= k_bar <= -lo
                and lo <= k_bar + 2 * i_bar <= -lo
            )

        return alphas, min(betas), max(betas), keep

    # -- stage 1: horizontal homology --------------------------------------------

    def _horizontal(self, l: int, alphas, beta_lo: int, beta_hi: int):
        """SlicedHorizontal + homology per nonempty vertex v."""
        n = self.cube.n
        a_lo, a_hi = min(alphas), max(alphas)
        data = {}
        for v_int in range(1 << n):
            v = tuple((v_int >> p) & 1 for p in range(n))
            if not (beta_lo - 1 <= sum(v) <= beta_hi + 1):
                continue
            hc = self.hcube(v)
            sl = SlicedHorizontal(
                hc, l, a_lo, a_hi, dim_budget=self.options.max_slice_dim
            )
            if not sl.bases:
                continue
            hom = {}
            any_dim = False
            for a in alphas:
                ha = sl.homology(a)
                if ha.dim:
                    any_dim = True
                hom[a] = ha
            if any_dim:
                data[v] = (sl, hom)
        return data

    # -- stage 2: transported vertical homology ----------------------------------

    def _rep_lift(self, cache: dict, v, sl: SlicedHorizontal, alpha: int, idx: int):
        key = (v, alpha, idx)
        got = cache.get(key)
        if got is None:
            rep = sl.homology(alpha).representatives[idx]
            chain = sl.vector_from_coords(alpha, rep)
            got = sl.hcube.psi(chain)
            cache[key] = got
        return got

    def _transport(self, lifted: dict, v, p: int, dst_sl: SlicedHorizontal, alpha: int) -> Vec:
        cube = self.cube
        vsg = cube.vsign(v, p)
        out0: dict = {}
        for h_full, poly in lifted.items():
            f = cube.vfactors[p][h_full[p]]
            if f.is_zero():
                continue
            sgn = vsg * (-1 if sum(h_full) & 1 else 1)
            q = f * poly
            if sgn < 0:
                q = -q
            out0[h_full] = out0[h_full] + q if h_full in out0 else q
        z = dst_sl.hcube.phi(out0)
        coords = dst_sl.coords_from_vector(z, alpha)
        return dst_sl.homology(alpha).project(coords)

    def level_contribution(self, l: int) -> dict:
        """Map (alpha, beta) -> homology dimension for one level."""
        alphas, beta_lo, beta_hi, keep = self._windows(l)
        if not alphas:
            return {}
        data = self._horizontal(l, alphas, beta_lo, beta_hi)
        if not data:
            return {}
        psi_cache: dict = {}
        out = {}
        n = self.cube.n
        for a in alphas:
            groups: dict[int, list] = {}
            for v, (sl, hom) in data.items():
                if hom[a].dim:
                    groups.setdefault(sum(v), []).append(v)
            for lst in groups.values():
                lst.sort()
            offsets: dict = {}
            layer_dim: dict[int, int] = {}
            for b, lst in groups.items():
                off = 0
                for v in lst:
                    offsets[v] = off
                    off += data[v][1][a].dim
                layer_dim[b] = off
            cols: dict[int, list] = {}
            for b in range(beta_lo - 1, beta_hi + 1):
                src = groups.get(b, [])
                columns = [dict() for _ in range(layer_dim.get(b, 0))]
                for v in src:
                    sl, hom = data[v]
                    for idx in range(hom[a].dim):
                        col = columns[offsets[v] + idx]
                        lifted = None
                        for p in range(n):
                            if v[p]:
                                continue
                            v2 = v[:p] + (1,) + v[p + 1 :]
                            if v2 not in data or not data[v2][1][a].dim:
                                continue
                            if lifted is None:
                                lifted = self._rep_lift(psi_cache, v, sl, a, idx)
                            coords = self._transport(lifted, v, p, data[v2][0], a)
                            base = offsets[v2]
                            for r, cval in coords.items():
                                key = base + r
                                s = col.get(key, 0) + cval
                                if s == 0:
                                    col.pop(key, None)
                                else:
                                    col[key] = s
                cols[b] = columns
            ranks: dict[int, int] = {}

            def layer_rank(b: int) -> int:
                if b not in ranks:
                    ranks[b] = rank(cols.get(b, []))
                return ranks[b]

            for b in range(beta_lo, beta_hi + 1):
                if not keep(a, b):
                    continue
                dim_b = layer_dim.get(b, 0)
                if dim_b == 0:
                    continue
                hdim = dim_b - layer_rank(b) - layer_rank(b - 1)
                if hdim:
                    out[(a, b)] = hdim
        return out

    # -- the full run -------------------------------------------------------------

    def run(self) -> TripleGradedDims:
        g = self.cube.grading
        n = self.cube.n
        if self.options.mode == "knot":
            levels = list(range(-2 * n, -n + 1))
        else:
            top = self.options.max_level
            if top is None:
                top = -n
            levels = list(range(-2 * n, top + 1))
        dims: dict = {}
        aborted = False

        def work(l: int):
            return l, self.level_contribution(l)

        results = {}
        try:
            if self.options.threads > 1:
                with ThreadPoolExecutor(max_workers=self.options.threads) as pool:
                    for l, cells in pool.map(work, levels):
                        results[l] = cells
            else:
                for l in levels:
                    results[l] = work(l)[1]
        except ResourceLimitExceeded:
            aborted = True
        for l in sorted(results):
            for (a, b), d in results[l].items():
                ijk = g.hat_to_bar(g.levels_to_grading(l, a, b))
                dims[ijk] = dims.get(ijk, 0) + d
        if (
            self.options.mode == "knot"
            and self.options.symmetric_fill
            and not self.options.full_i_range
        ):
            for (i, j, k), d in list(dims.items()):
                if i < 0:
                    tgt = (-i, j, k + 2 * i)
                    if dims.get(tgt, 0) not in (0, d):
                        raise DiagramError("symmetry fill clashes with computed cell %s" % (tgt,))
                    dims[tgt] = d
        complete = self.options.mode == "knot" and not aborted
        return TripleGradedDims(
            dims=dims,
            w=g.w,
            s=g.s,
            n=n,
            source=self.diagram.meta,
            mode=self.options.mode,
            levels=(levels[0], levels[-1]) if levels else None,
            complete=complete,
            aborted=aborted,
        )


def compute_diagram_homology(
    diagram: Diagram, options: EngineOptions = EngineOptions()
) -> TripleGradedDims:
    """Homology of one diagram as given (no mirror trick)."""
    if options.mode == "knot":
        if diagram.component_count() != 1:
            raise DiagramError(
                "knot mode needs a one-component closure; use general mode with a level cutoff"
            )
    else:
        if diagram.component_count() != 1 and options.max_level is None:
            raise DiagramError(
                "multi-component diagrams need an explicit level cutoff (no symmetry bound)"
            )
    return HomologyEngine(diagram, options).run()


def compute_braid_homology(
    word: BraidWord, options: EngineOptions = EngineOptions()
) -> TripleGradedDims:
    """Reduced homology of a braid-closure knot, mirroring when the writhe is positive."""
    if not word.letters:
        return unknot_dims("empty braid")
    if options.mode == "knot" and not free_reduce_cyclic(word.letters):
        # words reducing freely to the identity braid present the unknot
        return unknot_dims("trivial braid %s" % (list(word.letters),))
    if options.mode != "knot":
        return compute_diagram_homology(braid_closure(word), options)
    if word.component_count() != 1:
        raise DiagramError(
            "braid closure has %d components; knot mode needs a knot" % word.component_count()
        )
    d = braid_closure(word)
    if d.writhe > 0:
        res = compute_diagram_homology(mirror(d), options)
        out = res.dual()
        out.source = d.meta
        out.mirrored = True
        return out
    return compute_diagram_homology(d, options)


def gauss_decompose(dims_by_degree: dict, columns_by_degree: dict) -> dict:
    """Homology of a finite graded complex with representatives per degree.

    ``columns_by_degree[d]`` holds the differential from degree d to d+1 as a
    list of sparse columns.  Returns {degree: DegreeHomology}.
    """
    out = {}
    for deg, dim in dims_by_degree.items():
        out[deg] = DegreeHomology(
            dim,
            columns_by_degree.get(deg, [dict() for _ in range(dim)]),
            columns_by_degree.get(deg - 1, []),
        )
    return out
