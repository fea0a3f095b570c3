"""Reduced triply graded HOMFLY homology of knots from braid words.

Main entry points:

* :func:`homflyh.compute_braid_homology` -- the invariant of a braid-closure
  knot (mirrors internally when the writhe is positive);
* :func:`homflyh.compute_diagram_homology` -- one diagram as given, in knot
  or general mode;
* :mod:`homflyh.verify` -- skein-theoretic and structural cross-checks;
* the ``homflyh`` command-line tool (see ``homflyh --help``).
"""

from .engine import (
    EngineOptions,
    TripleGradedDims,
    compute_braid_homology,
    compute_diagram_homology,
    unknot_dims,
)
from .knots import (
    BraidWord,
    Diagram,
    PDCode,
    braid_closure,
    mirror,
    parse_braid,
    parse_pd,
    pd_to_diagram,
    seifert_data,
)
from .skein import homfly_skein

__all__ = [
    "BraidWord",
    "Diagram",
    "EngineOptions",
    "PDCode",
    "TripleGradedDims",
    "braid_closure",
    "compute_braid_homology",
    "compute_diagram_homology",
    "homfly_skein",
    "mirror",
    "parse_braid",
    "parse_pd",
    "pd_to_diagram",
    "seifert_data",
    "unknot_dims",
]

__version__ = "0.1.0"
