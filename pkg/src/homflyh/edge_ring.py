"""The reduced edge ring presented by a spanning-tree basis.

To each crossing ``p`` attach the linear forms ``X_p = x_b - x_c`` and
``X'_p = x_a - x_c`` of the edge variables.  For a spanning tree ``T`` of the
Seifert graph with crossing set ``S``, the set ``{X_p : p in S} union
{X'_p : p not in S}`` freely generates the quotient of the edge-variable ring
by the relations ``theta`` and ``rho_p``; basis variable ``p`` stands for
``X_p`` when ``p in S`` and for ``X'_p`` otherwise.

Differences ``x_e - x_f`` are expanded in that basis by walking the knot
diagram obtained from resolving every crossing outside ``S``: its underlying
curve is a single cycle, and passing a crossing contributes one signed basis
variable.  The four passage cases are

* through a crossing in S:      c -> b gives +X_p,   d -> a gives -X_p;
* through a resolved crossing:  c -> a gives +X'_p,  d -> b gives -X'_p.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact import MultiPoly, linear_combination
from .knots import Diagram, DiagramError, SeifertData


@dataclass(frozen=True)
class EdgeRingBasis:
    n: int
    tree_crossings: frozenset
    # position of each edge along the resolved single cycle, and the partial
    # sums expressing x_e - x_(start edge) in the basis
    cycle: tuple
    prefix: tuple  # prefix[i] = x_(cycle[i]) - x_(cycle[0]) as MultiPoly

    def var_of_crossing(self, p: int) -> int:
        return p


def _spanning_tree(sd: SeifertData, variant: int = 0) -> frozenset:
    """BFS spanning tree from the lowest-indexed circle, deterministic.

    ``variant=1`` reverses the crossing tie-break; homology must not depend
    on the choice (tested).
    """
    adjacency: dict[int, list[tuple[int, int]]] = {}
    for (p, u, v) in sd.graph_edges:
        adjacency.setdefault(u, []).append((p, v))
        adjacency.setdefault(v, []).append((p, u))
    for lst in adjacency.values():
        lst.sort(reverse=(variant == 1))
    visited = {0}
    tree = set()
    frontier = [0]
    while frontier:
        nxt = []
        for u in sorted(frontier):
            for (p, v) in adjacency.get(u, []):
                if v not in visited:
                    visited.add(v)
                    tree.add(p)
                    nxt.append(v)
        frontier = nxt
    if len(visited) != sd.s:
        raise DiagramError("Seifert graph is not connected")
    return frozenset(tree)


def build_basis(d: Diagram, sd: SeifertData, variant: int = 0) -> EdgeRingBasis:
    """Spanning-tree basis of the reduced edge ring; n variables, one per crossing."""
    n = d.n
    tree = _spanning_tree(sd, variant)
    succ: dict[int, tuple[int, MultiPoly]] = {}
    for p, x in enumerate(d.crossings):
        if p in tree:
            succ[x.c] = (x.b, linear_combination(n, [(p, 1)]))
            succ[x.d] = (x.a, linear_combination(n, [(p, -1)]))
        else:
            succ[x.c] = (x.a, linear_combination(n, [(p, 1)]))
            succ[x.d] = (x.b, linear_combination(n, [(p, -1)]))
    start = 0
    cycle = [start]
    prefix = [MultiPoly.zero(n)]
    e = start
    while True:
        e2, contrib = succ[e]
        if e2 == start:
            total = prefix[-1] + contrib
            if not total.is_zero():
                raise DiagramError("edge walk does not telescope to zero")
            break
        cycle.append(e2)
        prefix.append(prefix[-1] + contrib)
        e = e2
    if len(cycle) != d.n_edges:
        raise DiagramError("resolved diagram is not a single cycle")
    return EdgeRingBasis(
        n=n, tree_crossings=tree, cycle=tuple(cycle), prefix=tuple(prefix)
    )


def edge_difference(basis: EdgeRingBasis, e: int, f: int) -> MultiPoly:
    """The element ``x_e - x_f`` of the edge ring, in the basis."""
    pos = {edge: i for i, edge in enumerate(basis.cycle)}
    return basis.prefix[pos[e]] - basis.prefix[pos[f]]


class _EdgeDiff:
    """Memoized edge-difference lookups for one basis."""

    def __init__(self, basis: EdgeRingBasis):
        self.basis = basis
        self.pos = {edge: i for i, edge in enumerate(basis.cycle)}

    def __call__(self, e: int, f: int) -> MultiPoly:
        return self.basis.prefix[self.pos[e]] - self.basis.prefix[self.pos[f]]


def crossing_forms(basis: EdgeRingBasis, d: Diagram, p: int) -> tuple[MultiPoly, MultiPoly]:
    """``(X_p, X'_p)`` expanded in the basis."""
    diff = _EdgeDiff(basis)
    x = d.crossings[p]
    return diff(x.b, x.c), diff(x.a, x.c)


def all_crossing_forms(basis: EdgeRingBasis, d: Diagram) -> list[tuple[MultiPoly, MultiPoly]]:
    diff = _EdgeDiff(basis)
    return [(diff(x.b, x.c), diff(x.a, x.c)) for x in d.crossings]
