"""Bundled knot corpus: braid words, signatures, reference polynomials.

The data file ``data/knots.json`` has the schema

    {"knots": [
        {"name": "3_1",
         "braid": [1, 1, 1],
         "crossing_number": 3,
         "signature": -2,
         "alternating": true,
         "homfly_qa": [[q_exp, a_exp, coeff], ...]},   # skein-oracle value
        ...]}

Braid words are validated presentations of the named knots up to mirror
image (identified by Alexander polynomial and determinant; chirality is
absorbed by every consumer).  Signatures follow the standard tables.  The
``homfly_qa`` entries are frozen values of the independent skein oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .knots import BraidWord


@dataclass(frozen=True)
class CorpusKnot:
    name: str
    braid: tuple
    crossing_number: int
    signature: int
    alternating: bool
    homfly_qa: dict  # {(q_exp, a_exp): coeff}

    @property
    def word(self) -> BraidWord:
        return BraidWord(self.braid, max(abs(g) for g in self.braid) + 1)


def load_corpus() -> dict:
    """Name -> CorpusKnot for the bundled table."""
    with resources.files("homflyh.data").joinpath("knots.json").open() as f:
        raw = json.load(f)
    out = {}
    for item in raw["knots"]:
        out[item["name"]] = CorpusKnot(
            name=item["name"],
            braid=tuple(item["braid"]),
            crossing_number=item["crossing_number"],
            signature=item["signature"],
            alternating=item["alternating"],
            homfly_qa={(q, a): c for (q, a, c) in item.get("homfly_qa", [])},
        )
    return out


def knots_up_to(crossings: int, corpus: dict | None = None) -> list:
    corpus = corpus if corpus is not None else load_corpus()
    return sorted(
        (k for k in corpus.values() if k.crossing_number <= crossings),
        key=lambda k: (k.crossing_number, k.name),
    )
