"""Exclusion of variables on horizontal cube complexes.

A horizontal complex at a cube vertex ``v`` is the Koszul-style cube on the
factors ``f_p`` (one per crossing).  Excluding a direction ``p`` whose factor
is monic in a pivot variable ``X_k`` replaces the cube by the smaller cube on
the remaining directions over the quotient ring ``R/(f)``:

* linear ``f``: the pivot is substituted away, one variable disappears;
* quadratic ``f``: the pivot becomes *bound*, the ring keeps a basis
  ``{1, X_k}`` over the rest via ``X_k^2 = u X_k + w``, and every variable
  occurring in ``u, w`` is marked non-excludable from then on.

The reduced cube lives on the ``p = 1`` face, so excluded directions sit at
coordinate 1 when computing edge signs and slice degrees.  The chain
homotopy equivalences are

    phi(x0, x1) = pi(x1)
    psi(y) = ((iota(d'' y) - b iota(y)) / (sigma f), iota(y))

where ``b`` is the pre-step differential restricted to the ``p = 1`` face,
``sigma`` the sign of the ``p``-edge at each vertex, ``pi`` the
substitution/reduction map and ``iota`` the canonical-representative
embedding.  The division is exact; a nonzero remainder signals a bug in
complex construction.  Both maps preserve the triple grading, so they
restrict to every slice.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cube import CubeSpec
from .exact import MultiPoly, QQ1


class InternalConsistencyError(ArithmeticError):
    """A chain-map identity failed; indicates a construction bug."""


def _all_bits(k: int):
    for x in range(1 << k):
        yield tuple((x >> i) & 1 for i in range(k))


class RingState:
    """Presentation of the current quotient ring during exclusion.

    Variables are partitioned into free, substituted (by linear steps) and
    bound (by quadratic steps).  Canonical representatives contain no
    substituted variable and carry each bound variable to power at most 1.
    Quadratic coefficient variables are tainted: they stay in the ring but
    can no longer serve as pivots.
    """

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.substitutions: list[tuple[int, MultiPoly]] = []
        self.bound: list[tuple[int, MultiPoly, MultiPoly]] = []  # (k, u, w)
        self.free: set[int] = set(range(nvars))
        self.tainted: set[int] = set()
        self._sub_final: dict | None = None

    def copy(self) -> "RingState":
        r = RingState(self.nvars)
        r.substitutions = list(self.substitutions)
        r.bound = list(self.bound)
        r.free = set(self.free)
        r.tainted = set(self.tainted)
        return r

    def _final_substitutions(self) -> dict:
        """Substitutions composed into one simultaneous map."""
        if self._sub_final is None:
            final: dict[int, MultiPoly] = {}
            for k, g in reversed(self.substitutions):
                for k2 in list(g.variables()):
                    if k2 in final:
                        g = g.substitute(k2, final[k2])
                final[k] = g
            self._sub_final = final
        return self._sub_final

    def caps(self) -> dict[int, int]:
        caps = {}
        for (k, _g) in self.substitutions:
            caps[k] = 0
        for (k, _u, _w) in self.bound:
            caps[k] = 1
        return caps

    # -- canonical arithmetic -------------------------------------------------

    def canonical(self, p: MultiPoly) -> MultiPoly:
        """Reduce bound-variable powers; assumes no substituted variables."""
        if not self.bound:
            return p
        for (k, u, w) in reversed(self.bound):
            while p.degree_in(k) >= 2:
                low = MultiPoly(p.nvars, {m: c for m, c in p.terms.items() if m[k] < 2})
                rest = MultiPoly(p.nvars)
                for m, c in p.terms.items():
                    e = m[k]
                    if e < 2:
                        continue
                    mm = list(m)
                    mm[k] = e - 2
                    rest = rest + MultiPoly(p.nvars, {tuple(mm): c})
                xk = MultiPoly.variable(p.nvars, k)
                p = low + rest * (u * xk + w)
        return p

    def project(self, p: MultiPoly) -> MultiPoly:
        """The full quotient map pi: apply substitutions, then reduce."""
        final = self._final_substitutions()
        if final:
            p = p.substitute_many(final)
        return self.canonical(p)

    def mul(self, p: MultiPoly, q: MultiPoly) -> MultiPoly:
        return self.canonical(p * q)

    def divmod_in_var(self, num: MultiPoly, f: MultiPoly, k: int):
        """Division with remainder along an untainted pivot, canonically.

        The taint discipline guarantees no binding coefficient contains
        ``X_k``, so canonical reduction never raises the pivot degree and the
        loop terminates.
        """
        d = f.degree_in(k)
        lead = f.coeff_of_power(k, d)
        if lead.degree() != 0:
            raise InternalConsistencyError("divisor not monic in pivot")
        lc = lead.terms[(0,) * f.nvars]
        q = MultiPoly(f.nvars)
        r = num
        while True:
            high = {m: c for m, c in r.terms.items() if m[k] >= d}
            if not high:
                return q, r
            part = MultiPoly(f.nvars)
            for m, c in high.items():
                mm = list(m)
                mm[k] -= d
                part = part + MultiPoly(f.nvars, {tuple(mm): c / lc})
            part = self.canonical(part)
            q = q + part
            r = self.canonical(r - part * f)

    def divide_exact(self, num: MultiPoly, f: MultiPoly, k: int) -> MultiPoly:
        q, r = self.divmod_in_var(num, f, k)
        if not r.is_zero():
            raise InternalConsistencyError(
                "inexact division in psi: remainder %r" % r
            )
        return q


@dataclass(frozen=True)
class ExclusionStep:
    direction: int
    kind: str  # "linear" | "quadratic"
    pivot: int
    factor: MultiPoly  # as seen at step time, canonical in the pre-step ring
    subst: MultiPoly | None = None  # linear: X_pivot -> subst
    bind_u: MultiPoly | None = None  # quadratic: X_pivot^2 = u X_pivot + w
    bind_w: MultiPoly | None = None


@dataclass
class Stage:
    dirs: tuple  # remaining directions, ascending
    fixed_ones: frozenset  # excluded directions (coordinate 1)
    factors: dict  # direction -> canonical MultiPoly
    ring: RingState

    def alpha_offset(self) -> int:
        return len(self.fixed_ones)


class HCube:
    """One horizontal complex with its exclusion history."""

    def __init__(self, cube: CubeSpec, v: tuple, use_exclusion: bool = True, pivot_variant: int = 0):
        self.cube = cube
        self.v = tuple(v)
        n = cube.n
        ring0 = RingState(n)
        factors0 = {p: cube.hfactors[p][self.v[p]] for p in range(n)}
        stage0 = Stage(
            dirs=tuple(range(n)), fixed_ones=frozenset(), factors=factors0, ring=ring0
        )
        self.stages: list[Stage] = [stage0]
        self.steps: list[ExclusionStep] = []
        if use_exclusion:
            self._run_schedule(pivot_variant)

    # -- scheduling -----------------------------------------------------------

    def _occurrences(self, stage: Stage, skip_dir: int) -> dict[int, int]:
        occ: dict[int, int] = {}
        for d, f in stage.factors.items():
            if d == skip_dir:
                continue
            for k in f.variables():
                occ[k] = occ.get(k, 0) + 1
        return occ

    def _linear_pivot(self, stage: Stage, d: int, variant: int) -> int | None:
        f = stage.factors[d]
        cands = sorted(f.variables() & stage.ring.free)
        if not cands:
            return None
        occ = self._occurrences(stage, d)
        best = min(
            cands,
            key=lambda k: (occ.get(k, 0), -k if variant else k),
        )
        return best

    def _quadratic_pivot(self, stage: Stage, d: int, variant: int) -> int | None:
        f = stage.factors[d]
        ring = stage.ring
        cands = []
        for k in sorted(f.variables()):
            if k not in ring.free or k in ring.tainted:
                continue
            lead = f.coeff_of_power(k, 2)
            if not lead.is_zero() and lead.degree() == 0:
                cands.append(k)
        if not cands:
            return None
        occ = self._occurrences(stage, d)
        return min(cands, key=lambda k: (occ.get(k, 0), -k if variant else k))

    def _run_schedule(self, variant: int) -> None:
        # linear factors first, then the remaining quadratics
        while True:
            stage = self.stages[-1]
            lin = [d for d in stage.dirs if stage.factors[d].degree() == 1]
            if not lin:
                break
            d = lin[0]
            k = self._linear_pivot(stage, d, variant)
            if k is None:  # cannot happen for homogeneous linear factors
                break
            self._exclude_linear(d, k)
        changed = True
        while changed:
            changed = False
            stage = self.stages[-1]
            for d in stage.dirs:
                if stage.factors[d].degree() != 2:
                    continue
                k = self._quadratic_pivot(stage, d, variant)
                if k is None:
                    continue
                self._exclude_quadratic(d, k)
                changed = True
                break

    def _exclude_linear(self, d: int, k: int) -> None:
        stage = self.stages[-1]
        f = stage.factors[d]
        n = f.nvars
        c = f.coeff_of_power(k, 1).terms[(0,) * n]
        rest = MultiPoly(n, {m: v for m, v in f.terms.items() if m[k] == 0})
        g = rest.scale(-QQ1 / c)
        ring = stage.ring.copy()
        ring.substitutions.append((k, g))
        ring.free.discard(k)
        new_factors = {}
        for dd in stage.dirs:
            if dd == d:
                continue
            new_factors[dd] = ring.canonical(stage.factors[dd].substitute(k, g))
        self.steps.append(
            ExclusionStep(direction=d, kind="linear", pivot=k, factor=f, subst=g)
        )
        self.stages.append(
            Stage(
                dirs=tuple(dd for dd in stage.dirs if dd != d),
                fixed_ones=stage.fixed_ones | {d},
                factors=new_factors,
                ring=ring,
            )
        )

    def _exclude_quadratic(self, d: int, k: int) -> None:
        stage = self.stages[-1]
        f = stage.factors[d]
        n = f.nvars
        a = f.coeff_of_power(k, 2).terms[(0,) * n]
        b = f.coeff_of_power(k, 1)
        c0 = f.coeff_of_power(k, 0)
        u = b.scale(-QQ1 / a)
        w = c0.scale(-QQ1 / a)
        ring = stage.ring.copy()
        u = ring.canonical(u)
        w = ring.canonical(w)
        ring.bound.append((k, u, w))
        ring.free.discard(k)
        ring.tainted |= u.variables() | w.variables()
        new_factors = {}
        for dd in stage.dirs:
            if dd == d:
                continue
            new_factors[dd] = ring.canonical(stage.factors[dd])
        self.steps.append(
            ExclusionStep(
                direction=d, kind="quadratic", pivot=k, factor=f, bind_u=u, bind_w=w
            )
        )
        self.stages.append(
            Stage(
                dirs=tuple(dd for dd in stage.dirs if dd != d),
                fixed_ones=stage.fixed_ones | {d},
                factors=new_factors,
                ring=ring,
            )
        )

    # -- geometry --------------------------------------------------------------

    @property
    def final(self) -> Stage:
        return self.stages[-1]

    def slice_vertices(self) -> list:
        """Final-stage vertices with level-independent degree data.

        Returns [(h, alpha, base_e)] where the slice degree at level l is
        ``l + base_e``; cached once per cube.
        """
        got = self.__dict__.get("_slice_vertices")
        if got is None:
            cube = self.cube
            stage = self.final
            m = len(stage.fixed_ones)
            got = []
            idx = len(self.stages) - 1
            for h in _all_bits(len(stage.dirs)):
                full = self.embed(idx, h)
                base_e = sum(full) + (cube.grading.i0 - cube.i_shift(self.v, full)) // 2
                got.append((h, sum(h) + m, base_e))
            self.__dict__["_slice_vertices"] = got
        return got

    def all_factors_zero(self) -> bool:
        return all(f.is_zero() for f in self.final.factors.values())

    def mult_columns(self, d: int, e: int) -> list:
        """Matrix of multiplication by the final factor of direction d.

        Maps the degree-e basis to the degree-(e + deg f) basis; entries as
        sparse columns.  Depends only on (d, e), so it is shared by every
        cube vertex of source degree e at every level (cached).
        """
        cache = self.__dict__.setdefault("_mult_cache", {})
        got = cache.get((d, e))
        if got is None:
            stage = self.final
            ring = stage.ring
            f = stage.factors[d]
            src, _ = self.slice_basis(e)
            _, tindex = self.slice_basis(e + f.degree())
            cols = []
            for mono in src:
                img = ring.canonical(f.mul_monomial(mono))
                col = {}
                for mm, c in img.terms.items():
                    col[tindex[mm]] = c
                cols.append(col)
            got = cols
            cache[(d, e)] = got
        return got

    def slice_basis(self, e: int) -> tuple:
        """Monomial basis of the final ring in degree e, with index (cached)."""
        cache = self.__dict__.setdefault("_basis_cache", {})
        got = cache.get(e)
        if got is None:
            from .exact import capped_monomials

            monos = capped_monomials(self.cube.n, e, self.final.ring.caps()) if e >= 0 else []
            got = (monos, {m: i for i, m in enumerate(monos)})
            cache[e] = got
        return got

    def embed(self, stage_idx: int, h) -> tuple:
        stage = self.stages[stage_idx]
        bits = [0] * self.cube.n
        for d in stage.fixed_ones:
            bits[d] = 1
        for pos, d in enumerate(stage.dirs):
            bits[d] = h[pos]
        return tuple(bits)

    def alpha(self, stage_idx: int, h) -> int:
        return sum(h) + len(self.stages[stage_idx].fixed_ones)

    # -- symbolic differentials and the equivalences ----------------------------

    def apply_differential(self, stage_idx: int, vec: dict) -> dict:
        """The cube differential of one stage on a {vertex: poly} vector."""
        stage = self.stages[stage_idx]
        ring = stage.ring
        out: dict = {}
        for h, poly in vec.items():
            if poly.is_zero():
                continue
            full = self.embed(stage_idx, h)
            for pos, d in enumerate(stage.dirs):
                if h[pos]:
                    continue
                f = stage.factors[d]
                if f.is_zero():
                    continue
                sgn = self.cube.hsign(full, d)
                target = h[:pos] + (1,) + h[pos + 1 :]
                contrib = ring.mul(f, poly)
                if sgn < 0:
                    contrib = -contrib
                if target in out:
                    out[target] = out[target] + contrib
                else:
                    out[target] = contrib
        return {h: p for h, p in out.items() if not p.is_zero()}

    def _p_position(self, stage_idx: int, p: int) -> int:
        return self.stages[stage_idx].dirs.index(p)

    def psi_step(self, step_idx: int, y: dict) -> dict:
        """Lift a vector from stage step_idx+1 back to stage step_idx."""
        step = self.steps[step_idx]
        pre = self.stages[step_idx]
        p = step.direction
        pos = self._p_position(step_idx, p)

        def up(h):  # post-stage vertex -> pre-stage vertex with p-bit 1
            return h[:pos] + (1,) + h[pos:]

        iy = {up(h): poly for h, poly in y.items()}
        d2y = self.apply_differential(step_idx + 1, y)
        numerator = {up(h): poly for h, poly in d2y.items()}
        b_iy = self.apply_differential(step_idx, iy)
        for h, poly in b_iy.items():
            numerator[h] = (numerator[h] - poly) if h in numerator else -poly
        out = dict(iy)
        ring = pre.ring
        for h, num in numerator.items():
            if num.is_zero():
                continue
            if h[pos] != 1:
                raise InternalConsistencyError("psi numerator escaped the p=1 face")
            h0 = h[:pos] + (0,) + h[pos + 1 :]
            full0 = self.embed(step_idx, h0)
            sigma = self.cube.hsign(full0, p)
            quot = ring.divide_exact(num, step.factor, step.pivot)
            if sigma < 0:
                quot = -quot
            if h0 in out:
                out[h0] = out[h0] + quot
            else:
                out[h0] = quot
        return {h: poly for h, poly in out.items() if not poly.is_zero()}

    def phi_step(self, step_idx: int, x: dict) -> dict:
        """Project a vector from stage step_idx to stage step_idx+1."""
        step = self.steps[step_idx]
        post = self.stages[step_idx + 1]
        p = step.direction
        pos = self._p_position(step_idx, p)
        out: dict = {}
        for h, poly in x.items():
            if h[pos] != 1:
                continue
            h2 = h[:pos] + h[pos + 1 :]
            if step.kind == "linear":
                q = post.ring.canonical(poly.substitute(step.pivot, step.subst))
            else:
                q = post.ring.canonical(poly)
            if q.is_zero():
                continue
            if h2 in out:
                out[h2] = out[h2] + q
            else:
                out[h2] = q
        return {h: poly for h, poly in out.items() if not poly.is_zero()}

    def psi(self, y: dict) -> dict:
        """Composite lift: final stage -> original cube."""
        for i in range(len(self.steps) - 1, -1, -1):
            y = self.psi_step(i, y)
        return y

    def phi_by_steps(self, x: dict) -> dict:
        """Composite projection applied one step at a time (reference path)."""
        for i in range(len(self.steps)):
            x = self.phi_step(i, x)
        return x

    def phi(self, x: dict) -> dict:
        """Composite projection: original cube -> final stage, in one pass.

        Components off the fixed-coordinate face die; survivors map through
        the composed substitutions and bound-power reduction of the final
        ring.  Agrees with :meth:`phi_by_steps` (tested).
        """
        if not self.steps:
            return dict(x)
        stage = self.final
        ring = stage.ring
        excl = sorted(stage.fixed_ones)
        out: dict = {}
        for h, poly in x.items():
            if any(h[d] == 0 for d in excl):
                continue
            h2 = tuple(h[d] for d in stage.dirs)
            q = ring.project(poly)
            if q.is_zero():
                continue
            out[h2] = out[h2] + q if h2 in out else q
        return {h: p for h, p in out.items() if not p.is_zero()}
