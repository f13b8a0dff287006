"""Built-in algebras and modules, plus a seeded random module generator.

Spaces are represented by formal models: their cohomology algebras with
zero differential.  ``sphere_algebra(n)`` models S^n, ``wedge_algebra``
a finite wedge of spheres and ``truncated_polynomial_algebra`` the
algebra k[x]/(x^e).  ``dz_algebra`` is a small algebra with a nonzero
differential, used to exercise the sign conventions.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

from .complex import Window
from .dgcore import (
    DGAlgebra,
    DGModule,
    algebra_as_module,
    change_of_basis,
    combine_morphisms,
    cone,
    direct_sum,
    dual,
    free_module,
    hom_space,
    shift_module,
    trivial_k_module,
    validate_module,
    zero_module,
)
from .exactfield import QQ, Field, Matrix


class AtlasError(ValueError):
    """Parameters outside the supported family."""


def _truncate(A_dims, window):
    return window if window is not None else Window.complete()


def sphere_algebra(n: int, field: Field = QQ, window: Window = None) -> DGAlgebra:
    """H*(S^n): basis 1, x with |x| = n, x^2 = 0, zero differential."""
    if n < 2:
        raise AtlasError(f"sphere degree must be at least 2 (got {n}); A^1 has to vanish")
    w = _truncate(None, window)
    dims = {0: 1}
    if n in w:
        dims[n] = 1
    return DGAlgebra(field, dims, {}, {}, labels={0: ["1"], n: ["x"]} if n in dims else {0: ["1"]},
                     window=w, name=f"S{n}")


def wedge_algebra(degrees, field: Field = QQ, window: Window = None) -> DGAlgebra:
    """Cohomology of a finite wedge of spheres: all positive products vanish."""
    degrees = list(degrees)
    for n in degrees:
        if n < 2:
            raise AtlasError(f"wedge summand of degree {n} is not simply connected")
    w = _truncate(None, window)
    counts = Counter(degrees)
    dims = {0: 1}
    labels = {0: ["1"]}
    for n in sorted(counts):
        if n not in w:
            continue
        dims[n] = counts[n]
        if counts[n] == 1:
            labels[n] = [f"x{n}"]
        else:
            labels[n] = [f"x{n}_{i + 1}" for i in range(counts[n])]
    name = "W" + "_".join(str(n) for n in degrees) if degrees else "k"
    return DGAlgebra(field, dims, {}, {}, labels=labels, window=w, name=name)


def truncated_polynomial_algebra(n: int, e: int, field: Field = QQ, window: Window = None) -> DGAlgebra:
    """k[x]/(x^e) with |x| = n and zero differential."""
    if n < 2:
        raise AtlasError(f"generator degree must be at least 2 (got {n})")
    if e < 2:
        raise AtlasError(f"truncation exponent must be at least 2 (got {e})")
    if n % 2 and field.characteristic != 2 and e > 2:
        raise AtlasError("odd-degree generator squares to zero outside characteristic 2; need e = 2")
    w = _truncate(None, window)
    dims = {}
    labels = {}
    for k in range(e):
        if k * n in w:
            dims[k * n] = 1
            labels[k * n] = ["1" if k == 0 else ("x" if k == 1 else f"x^{k}")]
    products = {}
    for a in range(1, e):
        for b in range(1, e):
            if a + b < e and (a + b) * n in w:
                products[((a * n, 0), (b * n, 0))] = {0: 1}
    return DGAlgebra(field, dims, products, {}, labels=labels, window=w, name=f"T{n}_{e}")


def dz_algebra(field: Field = QQ) -> DGAlgebra:
    """The algebra on x (deg 2), z (deg 3) with dz = x^2, x^3 = 0, z^2 = 0.

    Basis 1, x, z, x^2, xz; graded commutative.  Cohomology is spanned by
    1, x and xz.
    """
    dims = {0: 1, 2: 1, 3: 1, 4: 1, 5: 1}
    labels = {0: ["1"], 2: ["x"], 3: ["z"], 4: ["x2"], 5: ["xz"]}
    x, z, x2, xz = (2, 0), (3, 0), (4, 0), (5, 0)
    products = {
        (x, x): {0: 1},
        (x, z): {0: 1},
        (z, x): {0: 1},
    }
    d = {3: Matrix.from_lists(field, [[1]])}
    return DGAlgebra(field, dims, products, d, labels=labels, name="Dz")


def cone_example(A: DGAlgebra, name: str = "C") -> DGModule:
    """cone(Σ^{-n}R -> R), the map sending the generator to the top class x.

    Over sphere_algebra(n) this is the module of the worked example: the
    cone of multiplication by x.
    """
    from .dgcore import free_morphism

    top = max(A.dims)
    F = free_module(A, [("e", top)], name=f"S^-{top}R")
    R = algebra_as_module(A)
    f = free_morphism(F, R, [{0: A.field.one}])
    return cone(f, name=name)


# ---------------------------------------------------------------------------
# atlas specs


@dataclass(frozen=True)
class AtlasSpec:
    kind: str
    params: tuple
    field: Field = QQ

    def build(self):
        if self.kind == "sphere":
            return sphere_algebra(self.params[0], self.field)
        if self.kind == "wedge":
            return wedge_algebra(self.params, self.field)
        if self.kind == "truncated":
            return truncated_polynomial_algebra(self.params[0], self.params[1], self.field)
        if self.kind == "dz":
            return dz_algebra(self.field)
        raise AtlasError(f"unknown atlas kind {self.kind!r}")

    def __str__(self):
        return f"{self.kind}:{','.join(str(p) for p in self.params)}"


def parse_atlas_spec(text: str, field: Field = QQ) -> AtlasSpec:
    """Parse ``sphere:2``, ``wedge:2,3``, ``truncated:2,3`` or ``dz``."""
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    params = tuple(int(x) for x in rest.replace(" ", "").split(",") if x) if rest else ()
    if kind == "sphere" and len(params) != 1:
        raise AtlasError("sphere takes one degree, e.g. sphere:2")
    if kind == "truncated" and len(params) != 2:
        raise AtlasError("truncated takes n,e, e.g. truncated:2,3")
    if kind not in ("sphere", "wedge", "truncated", "dz"):
        raise AtlasError(f"unknown atlas kind {kind!r}")
    spec = AtlasSpec(kind, params, field)
    spec.build()  # surface parameter errors early
    return spec


def standard_algebras(field: Field = QQ) -> list:
    """The fixed family every axiom check runs over."""
    out = [sphere_algebra(n, field) for n in range(2, 7)]
    out += [wedge_algebra([2, 3], field), wedge_algebra([2, 2, 4], field)]
    out += [truncated_polynomial_algebra(2, e, field) for e in range(2, 5)]
    return out


def standard_modules(A: DGAlgebra) -> list:
    """Named modules over A: R, k, shifts, sums, the cone of the top class,
    and duals."""
    R = algebra_as_module(A, name="R")
    k = trivial_k_module(A)
    mods = [R, k]
    for s in (1, 2, 3):
        mods.append(shift_module(R, -s, name=f"S^-{s}R"))
    mods.append(direct_sum(R, shift_module(R, -1), name="R+S^-1R"))
    if len(A.dims) > 1:
        mods.append(cone_example(A))
    mods.append(direct_sum(k, shift_module(k, -3), name="k+S^-3k"))
    mods.append(dual(dual(R, name="DR"), name="DDR"))
    return mods


# ---------------------------------------------------------------------------
# random modules


@dataclass(frozen=True)
class RandomProfile:
    """Shape of a random module.

    ``blocks`` summands of the form Σ^{-g}R, Σ^{-g}k or (with ``duals``)
    Σ^{-g}D(R) are drawn with g in [gmin, gmax]; cones of up to ``cones``
    random morphisms between such sums are taken.  ``zero_action`` makes a
    random complex of vector spaces with trivial action instead;
    ``zero_dims`` makes the zero module.
    """

    gmin: int = 0
    gmax: int = 4
    blocks: int = 3
    cones: int = 1
    kinds: tuple = ("R", "k")
    duals: bool = False
    basis_change: bool = True
    zero_action: bool = False
    zero_dims: bool = False
    max_dim: int = 3


class RejectionBudgetExceeded(RuntimeError):
    pass


def _random_block(A, rng, kind, g):
    R = algebra_as_module(A)
    if kind == "R":
        return shift_module(R, -g, name=f"S^-{g}R")
    if kind == "k":
        return shift_module(trivial_k_module(A), -g, name=f"S^-{g}k")
    if kind == "DR":
        # left module: D(D(R)) has the shape of R; use D of the right regular module
        Rr = algebra_as_module(A, side="right")
        return shift_module(dual(Rr), -g, name=f"S^-{g}DR")
    raise AtlasError(kind)


def _random_scalar(rng, field):
    if field.characteristic:
        return field(rng.randrange(field.characteristic))
    return field(rng.randint(-3, 3))


def _random_sum(A, rng, profile, n):
    kinds = list(profile.kinds) + (["DR"] if profile.duals else [])
    blocks = [_random_block(A, rng, rng.choice(kinds), rng.randint(profile.gmin, profile.gmax)) for _ in range(n)]
    if len(blocks) == 1:
        return blocks[0]
    return direct_sum(*blocks)


def _random_complex_module(A, rng, profile):
    """Random complex of k-spaces with the augmentation action."""
    f = A.field
    dims = {j: rng.randint(0, profile.max_dim) for j in range(profile.gmin, profile.gmax + 1)}
    dims = {j: n for j, n in dims.items() if n}
    d = {}
    # build d as a random map with image inside a complement of the previous image:
    # choose d^j of rank r_j written as d^j = B_j C_j with C_j killing im d^{j-1}
    from .exactfield import kernel_basis

    for j in sorted(dims):
        if j + 1 not in dims:
            continue
        prev = d.get(j - 1)
        src = dims[j]
        # functionals vanishing on im d^{j-1}
        if prev is not None:
            funcs = kernel_basis(prev.transpose())
        else:
            funcs = [tuple(f.one if i == t else f.zero for i in range(src)) for t in range(src)]
        if not funcs:
            continue
        r = rng.randint(0, min(len(funcs), dims[j + 1]))
        rows = []
        for _ in range(dims[j + 1]):
            coeffs = [_random_scalar(rng, f) for _ in range(r)]
            row = [f.zero] * src
            for c, fn in zip(coeffs, funcs[:r]):
                for i in range(src):
                    row[i] = row[i] + c * fn[i]
            rows.append(row)
        d[j] = Matrix.from_lists(f, rows, src)
    return DGModule(A, "left", dims, d, {}, Window.complete(), name="Vrand", check=True)


def random_module(A: DGAlgebra, seed: int, profile: RandomProfile = RandomProfile(),
                  budget: int = 20) -> DGModule:
    """Deterministic-per-seed random left module with valid axioms.

    Modules are built as cones of random DG morphisms between random sums of
    shifted free, trivial and (optionally) dual blocks, optionally followed
    by a random unitriangular change of basis; this keeps every axiom exact
    by construction.  Each candidate is validated; invalid candidates are
    rejected and the budget bounds the number of attempts.
    """
    if profile.zero_dims:
        return zero_module(A, name=f"rand{seed}")
    rng = random.Random(seed)
    for _ in range(budget):
        if profile.zero_action:
            M = _random_complex_module(A, rng, profile)
        else:
            M = _random_sum(A, rng, profile, rng.randint(1, profile.blocks))
            for _c in range(rng.randint(0, profile.cones)):
                X = _random_sum(A, rng, profile, rng.randint(1, max(1, profile.blocks - 1)))
                basis = hom_space(X, M)
                coeffs = [_random_scalar(rng, A.field) for _ in basis]
                M = cone(combine_morphisms(X, M, basis, coeffs))
            if profile.basis_change:
                M = _random_basis_change(M, rng)
        M.name = f"rand{seed}"
        if validate_module(M).ok:
            return M
    raise RejectionBudgetExceeded(f"no valid module for seed {seed} within {budget} attempts")


def _random_basis_change(M, rng):
    f = M.field
    mats = {}
    for j, n in M.dims.items():
        rows = []
        for r in range(n):
            row = [f.zero] * n
            row[r] = f.one
            for c in range(r + 1, n):
                if rng.random() < 0.5:
                    row[c] = _random_scalar(rng, f)
            rows.append(row)
        mats[j] = Matrix.from_lists(f, rows, n)
    return change_of_basis(M, mats, name=M.name)


# ---------------------------------------------------------------------------
# loop-space Betti series


def loop_betti_series(A: DGAlgebra, top: int, cross_check: bool = True) -> dict:
    """β^j(k) for 0 <= j <= top: the coefficients of the Poincaré series of
    Tor^A(k, k).  Computed by the tower; the bar construction confirms it
    when ``cross_check`` is set."""
    from .derived import betti_via_bar
    from .tower import build_tower

    t = build_tower(trivial_k_module(A), top)
    series = {j: t.betti.get(j, 0) for j in range(0, top + 1)}
    if cross_check:
        bar = betti_via_bar(trivial_k_module(A), top)
        for j in range(0, top + 1):
            if j in bar.window and bar.dim(j) != series[j]:
                raise AssertionError(f"tower and bar disagree on β^{j}(k): {series[j]} vs {bar.dim(j)}")
    return series
