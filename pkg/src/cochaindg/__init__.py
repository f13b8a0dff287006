"""Exact homological algebra for simply connected cochain DG algebras.

Fields and sparse linear algebra (:mod:`.exactfield`), windowed cochain
complexes (:mod:`.complex`), algebras and modules (:mod:`.dgcore`), the
cycle-killing tower (:mod:`.tower`), bar constructions (:mod:`.derived`),
series (:mod:`.series`), theorem checks (:mod:`.theorems`), examples
(:mod:`.atlas`), the text format (:mod:`.document`) and the CLI
(:mod:`.cli`).
"""

from .exactfield import GF, QQ, Matrix, parse_field
from .complex import INF, CochainComplex, GradedSpace, Window, cohomology
from .dgcore import (
    DGAlgebra,
    DGModule,
    algebra_as_module,
    cone,
    direct_sum,
    dual,
    free_module,
    shift_module,
    trivial_k_module,
    validate_algebra,
    validate_module,
)
from .tower import betti_numbers, build_tower, is_compact_within, pcd
from .derived import bar_complex, bass_numbers, betti_via_bar, derived_tensor_cohomology

__version__ = "0.1.0"
