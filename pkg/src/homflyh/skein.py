"""Independent HOMFLY polynomial oracle via the skein relation.

Implements ``a^{-1} P(L+) - a P(L-) = (q^{-1} - q) P(L0)`` with
``P(unknot) = 1`` by recursive crossing resolution on braid words.  This
module deliberately shares nothing with the homology engine beyond the braid
word type: its value as an oracle comes from that independence.

Internally polynomials live in ``Z[a^{±1}, z^{±1}]`` with ``z = q^{-1} - q``
(the c-component unlink is ``((a^{-1} - a) z^{-1})^(c-1)``); knot values
carry no negative z-powers and convert exactly to ``Z[q^{±1}, a^{±1}]``.

Resolution strategy: traverse the closed braid component by component; the
first crossing whose first visit runs under gets switched and smoothed,
which moves the diagram toward a descending one, and descending closed
braids are unlinks.  Word cleanup (inverse-pair cancellation, splitting off
crossingless circles, removing once-occurring generators) preserves the
closure's link type, tracking split unknot circles explicitly.
"""

from __future__ import annotations

from math import comb

from .knots import BraidWord, ParseError

# polynomials in (a, z): {(a_exp, z_exp): int}
AZ = dict


class SkeinBudgetExceeded(RuntimeError):
    """The resolution tree outgrew the configured budget."""


def az_add(p: AZ, q: AZ, scale: int = 1) -> AZ:
    out = dict(p)
    for k, c in q.items():
        s = out.get(k, 0) + scale * c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def az_mul(p: AZ, q: AZ) -> AZ:
    out: AZ = {}
    for (a1, z1), c1 in p.items():
        for (a2, z2), c2 in q.items():
            k = (a1 + a2, z1 + z2)
            s = out.get(k, 0) + c1 * c2
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def az_shift(p: AZ, da: int, dz: int, scale: int = 1) -> AZ:
    return {(a + da, z + dz): scale * c for (a, z), c in p.items()}


AZ_ONE: AZ = {(0, 0): 1}
# (a^{-1} - a) / z, the extra factor per unlink component
AZ_UNLINK: AZ = {(-1, -1): 1, (1, -1): -1}


def _unlink_power(k: int) -> AZ:
    out = AZ_ONE
    for _ in range(k):
        out = az_mul(out, AZ_UNLINK)
    return out


def _normalize(word: tuple, strands: int):
    """Closure-preserving cleanup.

    Returns ``(word', strands', circles)`` such that the closure of the input
    equals the closure of the output plus ``circles`` split unknots.  Moves:
    cancel (cyclically) adjacent inverse pairs, split off positions no
    crossing touches, and remove once-occurring generators (the strand pair
    merges; an R1 kink on the closure).
    """
    circles = 0
    word = list(word)
    while True:
        changed = False
        out: list[int] = []
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
        touched = set()
        for g in word:
            touched.add(abs(g))
            touched.add(abs(g) + 1)
        untouched = [p for p in range(1, strands + 1) if p not in touched]
        if untouched:
            circles += len(untouched)
            for p in reversed(untouched):
                word = [
                    (abs(g) - 1 if abs(g) > p else abs(g)) * (1 if g > 0 else -1)
                    for g in word
                ]
                strands -= 1
            changed = True
        counts: dict[int, int] = {}
        for g in word:
            counts[abs(g)] = counts.get(abs(g), 0) + 1
        once = sorted(idx for idx, c in counts.items() if c == 1)
        if once:
            idx = once[0]
            word = [
                (abs(g) - 1 if abs(g) > idx else abs(g)) * (1 if g > 0 else -1)
                for g in word
                if abs(g) != idx
            ]
            strands -= 1
            changed = True
        if not changed:
            return tuple(word), strands, circles


def _component_count(word: tuple, strands: int) -> int:
    cur = list(range(strands))
    for g in word:
        i = abs(g) - 1
        cur[i], cur[i + 1] = cur[i + 1], cur[i]
    seen = [False] * strands
    comps = 0
    for s in range(strands):
        if not seen[s]:
            comps += 1
            t = s
            while not seen[t]:
                seen[t] = True
                t = cur.index(t)
    return comps


def _first_bad_crossing(word: tuple, strands: int):
    """First crossing (in traversal order) whose first visit runs under.

    The closed braid is walked component by component, components ordered by
    smallest bottom position.  Returns None when the diagram is descending,
    hence an unlink.
    """
    m = len(word)
    visits: dict[int, list] = {i: [] for i in range(m)}
    time = 0
    visited_start: set[int] = set()
    for start in range(strands):
        if start in visited_start:
            continue
        pos = start
        while True:
            visited_start.add(pos)
            for i, g in enumerate(word):
                idx = abs(g) - 1
                if pos == idx or pos == idx + 1:
                    over = (g > 0) == (pos == idx)
                    visits[i].append((time, over))
                    time += 1
                    pos = idx + 1 if pos == idx else idx
            if pos == start:
                break
    order = sorted(range(m), key=lambda i: min(t for t, _ in visits[i]))
    for i in order:
        first = min(visits[i])
        if not first[1]:
            return i
    return None


def _canonical(w: tuple) -> tuple:
    best = w
    for r in range(1, len(w)):
        cand = w[r:] + w[:r]
        if cand < best:
            best = cand
    return best


def homfly_az(word, strands: int | None = None, budget: int = 400000) -> AZ:
    """HOMFLY polynomial of the braid closure, in (a, z)."""
    if isinstance(word, BraidWord):
        letters, strands = word.letters, word.strands
    else:
        letters = tuple(word)
        if strands is None:
            strands = max((abs(g) for g in letters), default=0) + 1
    memo: dict = {}
    counter = [0]

    def go(letters: tuple, strands: int) -> AZ:
        w, s, circles = _normalize(letters, strands)
        if not w:
            return _unlink_power(s + circles - 1)
        key = _canonical(w)
        got = memo.get(key)
        if got is None:
            counter[0] += 1
            if counter[0] > budget:
                raise SkeinBudgetExceeded("skein resolution exceeded %d states" % budget)
            got = _resolve(w, s)
            memo[key] = got
        return az_mul(got, _unlink_power(circles)) if circles else got

    def _resolve(w: tuple, s: int) -> AZ:
        bad = _first_bad_crossing(w, s)
        if bad is None:
            return _unlink_power(_component_count(w, s) - 1)
        g = w[bad]
        switched = w[:bad] + (-g,) + w[bad + 1 :]
        smoothed = w[:bad] + w[bad + 1 :]
        if g > 0:
            # P+ = a^2 P- + a z P0
            return az_add(
                az_shift(go(switched, s), 2, 0), az_shift(go(smoothed, s), 1, 1)
            )
        # P- = a^-2 P+ - a^-1 z P0
        return az_add(
            az_shift(go(switched, s), -2, 0), az_shift(go(smoothed, s), -1, 1, -1)
        )

    return go(letters, strands)


def az_to_qa(p: AZ) -> dict:
    """Substitute z = q^{-1} - q; defined when no negative z-powers remain."""
    out: dict = {}
    for (ea, ez), c in p.items():
        if ez < 0:
            raise ParseError("not a knot polynomial: negative z power survives")
        for t in range(ez + 1):
            coeff = c * comb(ez, t) * ((-1) ** t)
            key = (-(ez - t) + t, ea)
            s = out.get(key, 0) + coeff
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def homfly_skein(word: BraidWord, budget: int = 400000) -> dict:
    """HOMFLY polynomial of a braid-closure knot in (q, a): {(eq, ea): coeff}.

    Words that reduce freely to the identity braid follow the same unknot
    convention as the homology pipeline.
    """
    from .knots import free_reduce_cyclic

    if not free_reduce_cyclic(word.letters):
        return {(0, 0): 1}
    return az_to_qa(homfly_az(word, budget=budget))
