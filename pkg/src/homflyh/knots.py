"""Braid words, planar diagram codes, and the oriented diagram model.

A diagram is a list of crossings; each crossing records its sign and the four
edge ids around it in the convention of the local picture used throughout:

* ``a`` = outgoing left, ``b`` = outgoing right,
* ``c`` = incoming left, ``d`` = incoming right.

At a positive crossing the strand entering at ``c`` passes over and exits at
``b``; at a negative crossing the strand entering at ``d`` passes over and
exits at ``a``.  Either way the through-strand connectivity is ``c -> b`` and
``d -> a``, while the oriented (Seifert) smoothing joins ``c -> a`` and
``d -> b``.

PD codes use the knot-atlas convention: ``X_{t0,t1,t2,t3}`` lists the four
edges counterclockwise starting from the incoming under-strand, with edges
numbered 1..2n along the orientation.  The paper leaves the orientation
convention of the over-strand implicit; we fix it by the label-successor rule
(out-label = in-label + 1 mod 2n) with a global consistency search for the
rare ambiguous crossings (reducible kinks), defaulting those to positive.
This choice reproduces the published general-diagram computations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class ParseError(ValueError):
    """Bad textual input (braid word or PD code)."""


class DiagramError(ValueError):
    """Structurally invalid diagram."""


@dataclass(frozen=True)
class BraidWord:
    letters: tuple[int, ...]
    strands: int

    def __post_init__(self):
        if any(g == 0 for g in self.letters):
            raise ParseError("zero is not a braid letter")
        need = max((abs(g) for g in self.letters), default=0) + 1
        if self.strands < need:
            raise ParseError(
                "braid on %d strands cannot contain letter of index %d"
                % (self.strands, need - 1)
            )

    @property
    def writhe(self) -> int:
        return sum(1 if g > 0 else -1 for g in self.letters)

    def mirror(self) -> "BraidWord":
        return BraidWord(tuple(-g for g in self.letters), self.strands)

    def permutation(self) -> list[int]:
        """Bottom position -> top position of the strand starting there."""
        perm = list(range(self.strands))
        pos_of = list(range(self.strands))  # strand -> current position
        for g in self.letters:
            i = abs(g) - 1
            lo = next(s for s in range(self.strands) if pos_of[s] == i)
            hi = next(s for s in range(self.strands) if pos_of[s] == i + 1)
            pos_of[lo], pos_of[hi] = i + 1, i
        for s in range(self.strands):
            perm[s] = pos_of[s]
        return perm

    def component_count(self) -> int:
        perm = self.permutation()
        seen = [False] * self.strands
        count = 0
        for s in range(self.strands):
            if not seen[s]:
                count += 1
                t = s
                while not seen[t]:
                    seen[t] = True
                    t = perm[t]
        return count


def free_reduce_cyclic(letters: tuple) -> tuple:
    """Cancel adjacent inverse pairs, also across the closure point."""
    word = list(letters)
    changed = True
    while changed and word:
        changed = False
        out = []
        for g in word:
            if out and out[-1] == -g:
                out.pop()
                changed = True
            else:
                out.append(g)
        while len(out) >= 2 and out[0] == -out[-1]:
            out = out[1:-1]
            changed = True
        word = out
    return tuple(word)


def parse_braid(text: str) -> BraidWord:
    """Parse a braid word given as a bracketed or bare integer list."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    elif body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    tokens = [t for t in re.split(r"[\s,;]+", body.strip()) if t]
    if not tokens:
        raise ParseError("empty braid word")
    letters = []
    for t in tokens:
        try:
            g = int(t)
        except ValueError:
            raise ParseError("not a braid letter: %r" % t) from None
        if g == 0:
            raise ParseError("zero is not a braid letter")
        letters.append(g)
    word = tuple(letters)
    return BraidWord(word, max(abs(g) for g in word) + 1)


@dataclass(frozen=True)
class Crossing:
    sign: int
    a: int  # out left
    b: int  # out right
    c: int  # in left
    d: int  # in right

    def slots(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class Diagram:
    crossings: tuple[Crossing, ...]
    n_edges: int
    meta: str = ""

    def __post_init__(self):
        outs = [0] * self.n_edges
        ins = [0] * self.n_edges
        for x in self.crossings:
            for e in (x.a, x.b):
                outs[e] += 1
            for e in (x.c, x.d):
                ins[e] += 1
        if any(v != 1 for v in outs) or any(v != 1 for v in ins):
            raise DiagramError("every edge must occur exactly once outgoing and once incoming")
        if self.crossings and not self._connected():
            raise DiagramError("diagram graph is not connected")

    def _connected(self) -> bool:
        owner: dict[int, list[int]] = {}
        for i, x in enumerate(self.crossings):
            for e in x.slots():
                owner.setdefault(e, []).append(i)
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for e in self.crossings[i].slots():
                for j in owner[e]:
                    if j not in seen:
                        seen.add(j)
                        stack.append(j)
        return len(seen) == len(self.crossings)

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def writhe(self) -> int:
        return sum(x.sign for x in self.crossings)

    def component_count(self) -> int:
        """Components of the underlying oriented curve (c->b, d->a through-map)."""
        succ = {}
        for x in self.crossings:
            succ[x.c] = x.b
            succ[x.d] = x.a
        seen = set()
        count = 0
        for e in range(self.n_edges):
            if e not in seen:
                count += 1
                t = e
                while t not in seen:
                    seen.add(t)
                    t = succ[t]
        return count


def braid_closure(word: BraidWord) -> Diagram:
    """Closed braid diagram with deterministic edge ids.

    Edge ids follow crossing creation order: crossing i emits out-left 2i and
    out-right 2i+1; the bottom edge of each strand is identified with the top
    edge it closes onto.
    """
    if not word.letters:
        raise DiagramError("empty braid word: the 0-crossing unknot bypasses diagram construction")
    cur: list = [("bottom", p) for p in range(word.strands)]
    rows = []
    for i, g in enumerate(word.letters):
        k = abs(g) - 1
        sign = 1 if g > 0 else -1
        c_sym, d_sym = cur[k], cur[k + 1]
        a_id, b_id = 2 * i, 2 * i + 1
        rows.append((sign, a_id, b_id, c_sym, d_sym))
        cur[k], cur[k + 1] = a_id, b_id
    alias = {}
    for p in range(word.strands):
        top = cur[p]
        if isinstance(top, tuple):
            raise DiagramError("strand %d is not involved in any crossing" % (p + 1))
        alias[("bottom", p)] = top

    def resolve(sym):
        return alias[sym] if isinstance(sym, tuple) else sym

    crossings = tuple(
        Crossing(sign, a, b, resolve(c), resolve(d)) for (sign, a, b, c, d) in rows
    )
    return Diagram(crossings, 2 * len(word.letters), meta="braid %s" % (list(word.letters),))


def mirror(d: Diagram) -> Diagram:
    """Mirror image: every crossing switched (sign flipped), same edges."""
    return Diagram(
        tuple(Crossing(-x.sign, x.a, x.b, x.c, x.d) for x in d.crossings),
        d.n_edges,
        meta="mirror of %s" % d.meta,
    )


@dataclass(frozen=True)
class SeifertData:
    circles: tuple[tuple[int, ...], ...]  # each: sorted edge ids
    writhe: int
    n_plus: int
    n_minus: int
    graph_edges: tuple[tuple[int, int, int], ...]  # (crossing, circle_u, circle_v)

    @property
    def s(self) -> int:
        return len(self.circles)


def seifert_data(d: Diagram) -> SeifertData:
    """Seifert circles via the oriented smoothing c->a, d->b at every crossing."""
    parent = list(range(d.n_edges))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for x in d.crossings:
        union(x.c, x.a)
        union(x.d, x.b)
    groups: dict[int, list[int]] = {}
    for e in range(d.n_edges):
        groups.setdefault(find(e), []).append(e)
    circles = tuple(tuple(sorted(g)) for g in sorted(groups.values(), key=min))
    circle_of = {}
    for idx, circ in enumerate(circles):
        for e in circ:
            circle_of[e] = idx
    edges = tuple(
        (i, circle_of[x.a], circle_of[x.b]) for i, x in enumerate(d.crossings)
    )
    # connectivity of the Seifert graph follows from diagram connectivity
    n_plus = sum(1 for x in d.crossings if x.sign > 0)
    return SeifertData(
        circles=circles,
        writhe=d.writhe,
        n_plus=n_plus,
        n_minus=d.n - n_plus,
        graph_edges=edges,
    )


# -- planar diagram codes ----------------------------------------------------

_PD_TERM = re.compile(r"X_?\{?\[?([0-9,\s]+)\]?\}?", re.IGNORECASE)


@dataclass(frozen=True)
class PDCode:
    crossings: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self):
        counts: dict[int, int] = {}
        for t in self.crossings:
            for e in t:
                counts[e] = counts.get(e, 0) + 1
        bad = sorted(e for e, c in counts.items() if c != 2)
        if bad:
            raise ParseError("edge labels must occur exactly twice, offending: %s" % bad)
        n = len(self.crossings)
        if set(counts) != set(range(1, 2 * n + 1)):
            raise ParseError("edge labels must be exactly 1..%d" % (2 * n))


def parse_pd(text: str) -> PDCode:
    """Parse the textual X_{abcd} form, compact or comma-separated."""
    body = text.strip()
    if not body:
        raise ParseError("empty PD code")
    terms = []
    consumed = 0
    for m in _PD_TERM.finditer(body):
        consumed += 1
        inner = m.group(1).strip()
        if "," in inner:
            labels = [int(t) for t in inner.split(",") if t.strip()]
        else:
            digits = inner.replace(" ", "")
            labels = [int(ch) for ch in digits]
        if len(labels) != 4:
            raise ParseError("PD term needs 4 labels: %r" % m.group(0))
        terms.append(tuple(labels))
    if not terms or consumed == 0:
        raise ParseError("no X-terms found in PD code")
    return PDCode(tuple(terms))


def render_pd(code: PDCode) -> str:
    return "".join("X_{%s}" % ",".join(str(e) for e in t) for t in code.crossings)


def pd_to_diagram(code: PDCode) -> Diagram:
    """Decode a PD code into a Diagram, deducing over-strand orientations.

    Each term (t0,t1,t2,t3) has under-strand t0 -> t2.  The over-strand is
    t3 -> t1 (a positive crossing here) when t1 = t3 + 1 mod 2n, or t1 -> t3
    (negative) when t3 = t1 + 1.  Crossings satisfying both (only possible in
    tiny codes) or neither are resolved by searching for a globally consistent
    assignment, preferring positive.
    """
    n = len(code.crossings)
    total = 2 * n

    def succ(x: int) -> int:
        return x % total + 1

    choices = []
    for (t0, t1, t2, t3) in code.crossings:
        cands = []
        if succ(t3) == t1:
            # over flows t3 -> t1: positive; slots (a,b,c,d) = (t2, t1, t3, t0)
            cands.append(Crossing(1, t2, t1, t3, t0))
        if succ(t1) == t3:
            # over flows t1 -> t3: negative; slots (a,b,c,d) = (t3, t2, t0, t1)
            cands.append(Crossing(-1, t3, t2, t0, t1))
        if not cands or succ(t0) != t2:
            # nonstandard labeling (reducible kinks like X_{1212}): try both
            # orientations, positive first, and let global validation decide.
            cands = [
                Crossing(1, t2, t1, t3, t0),
                Crossing(-1, t3, t2, t0, t1),
            ]
        choices.append(cands)

    def assemble(selection) -> Diagram:
        crossings = tuple(
            Crossing(x.sign, x.a - 1, x.b - 1, x.c - 1, x.d - 1) for x in selection
        )
        return Diagram(crossings, total, meta="pd %s" % render_pd(code))

    def search(i, selection):
        if i == n:
            try:
                return assemble(selection)
            except DiagramError:
                return None
        for cand in choices[i]:
            got = search(i + 1, selection + [cand])
            if got is not None:
                return got
        return None

    diagram = search(0, [])
    if diagram is None:
        raise ParseError("no globally consistent over-strand orientation exists")
    return diagram
