"""DG algebras, DG modules, morphisms and the standard constructions.

Basis elements of an algebra are addressed as ``(degree, index)`` pairs; the
unit is ``(0, 0)``.  A module stores, for each algebra basis element ``a``
of positive degree and each module degree ``j``, the matrix of the action
``M^j -> M^{j+|a|}`` (``m -> a m`` for left modules, ``m -> m a`` for right
modules).  Missing matrices are zero.

Sign conventions (Koszul rule throughout):

* left Leibniz   d(am) = (da)m + (-1)^{|a|} a dm
* right Leibniz  d(ma) = (dm)a + (-1)^{|m|} m da
* suspension     (Σ^s M)^j = M^{j+s}, d -> (-1)^s d; on left modules the
  action picks up (-1)^{s|a|}, on right modules it is unchanged
* cone of f: X -> Y   Cone^j = X^{j+1} ⊕ Y^j, d(x, y) = (-dx, f x + dy);
  left action a(x, y) = ((-1)^{|a|} a x, a y), right action (x a, y a)
* dual           D(M)^j = (M^{-j})^*, (dφ)(m) = -(-1)^{|φ|} φ(dm);
  left -> right (φa)(m) = φ(am); right -> left (aφ)(m) = (-1)^{|a|} φ(ma)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .complex import (
    INF,
    CochainComplex,
    Cohomology,
    OutsideWindowError,
    Window,
)
from .exactfield import (
    Field,
    Matrix,
    block_diagonal,
    kernel_basis_sparse,
)


class AlgebraMismatchError(ValueError):
    """Objects over different algebras were combined."""


# ---------------------------------------------------------------------------
# validation reports


@dataclass(frozen=True)
class Violation:
    kind: str
    degrees: tuple
    labels: tuple
    message: str

    def __str__(self):
        lab = ",".join(self.labels)
        return f"{self.kind} at degrees {self.degrees} [{lab}]: {self.message}"


@dataclass
class ValidationReport:
    subject: str
    violations: list = dc_field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind, degrees, labels, message):
        self.violations.append(Violation(kind, tuple(degrees), tuple(labels), message))

    def __bool__(self):
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return f"{self.subject}: valid ({self.checked} checks)"
        lines = [f"{self.subject}: {len(self.violations)} violation(s)"]
        lines += ["  " + str(v) for v in self.violations]
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# sparse helpers


def _add_into(target: dict, factor, source: dict, p: int):
    for k, v in source.items():
        w = target.get(k, 0) + factor * v
        if p:
            w %= p
        if w:
            target[k] = w
        else:
            target.pop(k, None)


def _lincomb_matrices(field, shape, terms):
    """Σ c_i M_i for (c_i, M_i) pairs, zero matrix of ``shape`` if empty."""
    out = Matrix.zero(field, *shape)
    for c, m in terms:
        if c:
            out = out + m.scale(c)
    return out


# ---------------------------------------------------------------------------
# algebras


class DGAlgebra:
    """A graded-connected cochain DG algebra given by structure constants.

    Parameters
    ----------
    dims: degree -> dimension (degree 0 must have dimension 1, the unit).
    products: ``((p, i), (q, j)) -> {k: c}`` meaning ``b_{p,i} b_{q,j} =
        Σ c b_{p+q,k}``.  Products with the unit are filled in as the
        identity unless given explicitly; unlisted products are zero.
    d: degree -> Matrix of the differential (optional).
    labels: degree -> list of basis labels (optional).
    window: trusted degrees; defaults to the whole line (complete data).
    """

    def __init__(self, field: Field, dims: dict, products: dict = None, d: dict = None,
                 labels: dict = None, window: Window = None, name: str = "A"):
        self.field = field
        self.name = name
        self.window = window if window is not None else Window.complete()
        self.complex = CochainComplex(field, dims, d or {}, self.window, check=False)
        self.dims = self.complex.dims
        self.labels = {}
        for deg, n in self.dims.items():
            given = (labels or {}).get(deg)
            if given is not None:
                if len(given) != n:
                    raise ValueError(f"degree {deg}: {n} basis vectors but {len(given)} labels")
                self.labels[deg] = list(given)
            elif deg == 0 and n == 1:
                self.labels[deg] = ["1"]
            else:
                self.labels[deg] = [f"a{deg}_{i}" for i in range(n)]
        one = field.one
        prods = {}
        for (a, b), vec in (products or {}).items():
            clean = {k: field(v) for k, v in vec.items() if field(v)}
            prods[(tuple(a), tuple(b))] = clean
        self.explicit_unit_products = {
            k: v for k, v in prods.items() if k[0] == (0, 0) or k[1] == (0, 0)
        }
        self._prod = {k: v for k, v in prods.items() if (0, 0) not in k}
        self._unit_ok = self.dims.get(0, 0) == 1
        self._lcache = {}
        self._rcache = {}
        self._dcols = {}
        self._one = one

    # -- basis -----------------------------------------------------------
    @property
    def unit(self):
        return (0, 0)

    def basis(self, deg) -> list:
        return [(deg, i) for i in range(self.dims.get(deg, 0))]

    def all_basis(self) -> list:
        return [(deg, i) for deg in sorted(self.dims) for i in range(self.dims[deg])]

    def positive_basis(self) -> list:
        """Basis of the augmentation ideal (degrees > 0)."""
        return [b for b in self.all_basis() if b[0] > 0]

    def label(self, b) -> str:
        return self.labels[b[0]][b[1]]

    def degree_support(self) -> list:
        return sorted(self.dims)

    @property
    def top_degree(self):
        return max(self.dims) if self.dims else -INF

    # -- structure -------------------------------------------------------
    def mul(self, a, b) -> dict:
        """Product of basis elements as a sparse vector in degree |a|+|b|."""
        deg = a[0] + b[0]
        if deg not in self.window:
            raise OutsideWindowError(f"product {self.label(a)}*{self.label(b)} lands in degree {deg} outside window")
        if (a, b) in self.explicit_unit_products:
            return dict(self.explicit_unit_products[(a, b)])
        if a == (0, 0) and self._unit_ok:
            return {b[1]: self._one}
        if b == (0, 0) and self._unit_ok:
            return {a[1]: self._one}
        return dict(self._prod.get((a, b), {}))

    def mul_vec(self, x: dict, xdeg: int, y: dict, ydeg: int) -> dict:
        p = self.field.characteristic
        out = {}
        for i, c in x.items():
            for j, e in y.items():
                _add_into(out, c * e, self.mul((xdeg, i), (ydeg, j)), p)
        return out

    def d_elem(self, a) -> dict:
        """Differential of a basis element, sparse in degree |a|+1."""
        deg = a[0]
        if self.dims.get(deg + 1, 0) == 0:
            if deg + 1 not in self.window:
                raise OutsideWindowError(f"d of degree-{deg} element is unknown")
            return {}
        cols = self._dcols.get(deg)
        if cols is None:
            cols = self._dcols[deg] = self.complex.differential(deg).sparse_columns()
        return dict(cols[a[1]])

    def left_mult(self, a, q) -> Matrix:
        """Matrix of x -> a x on A^q."""
        key = (a, q)
        m = self._lcache.get(key)
        if m is None:
            n = self.dims.get(q, 0)
            cols = [self.mul(a, (q, j)) for j in range(n)]
            m = Matrix.from_columns(self.field, self.dims.get(a[0] + q, 0), cols)
            m = Matrix(self.field, m.nrows, n, m.sparse_rows())
            self._lcache[key] = m
        return m

    def right_mult(self, a, q) -> Matrix:
        """Matrix of x -> x a on A^q."""
        key = (a, q)
        m = self._rcache.get(key)
        if m is None:
            n = self.dims.get(q, 0)
            cols = [self.mul((q, j), a) for j in range(n)]
            m = Matrix.from_columns(self.field, self.dims.get(a[0] + q, 0), cols)
            m = Matrix(self.field, m.nrows, n, m.sparse_rows())
            self._rcache[key] = m
        return m

    @property
    def is_complete(self) -> bool:
        return self.window.is_complete

    def cohomology(self) -> Cohomology:
        return self.complex.cohomology()

    def __repr__(self):
        return f"DGAlgebra({self.name}, dims={self.dims}, window={self.window})"


def validate_algebra(A: DGAlgebra) -> ValidationReport:
    """Check the shape axioms, d^2 = 0, d(1) = 0, unitality, associativity
    and the Leibniz rule on every basis pair/triple whose output degree is
    in the window."""
    rep = ValidationReport(f"algebra {A.name}")
    f = A.field
    p = f.characteristic
    w = A.window
    rep.checked += 1
    if A.dims.get(0, 0) != 1:
        rep.add("degree-0 component not k", (0,), (), f"dim A^0 = {A.dims.get(0, 0)}")
    rep.checked += 1
    if A.dims.get(1, 0) != 0:
        rep.add("degree-1 component nonzero", (1,), tuple(A.labels[1]), f"dim A^1 = {A.dims[1]}")
    for deg in A.dims:
        if deg < 0:
            rep.add("negative degree component", (deg,), tuple(A.labels[deg]),
                    "cochain algebra must vanish in negative degrees")
    # d^2 = 0
    for deg in sorted(A.dims):
        if deg + 2 in w:
            rep.checked += 1
            dd = A.complex.differential(deg + 1) @ A.complex.differential(deg)
            if not dd.is_zero():
                rep.add("d∘d nonzero", (deg,), (), f"d^{deg+1} d^{deg} ≠ 0")
    if not rep.ok and any(v.kind.startswith("degree-0") for v in rep.violations):
        return rep
    # d(1) = 0
    if 1 in w:
        rep.checked += 1
        if A.d_elem((0, 0)):
            rep.add("d(1) nonzero", (0,), ("1",), "the unit must be a cycle")
    basis = A.all_basis()
    # unitality
    for b in basis:
        rep.checked += 1
        e = {b[1]: f.one}
        if A.mul((0, 0), b) != e:
            rep.add("left unitality", (0, b[0]), ("1", A.label(b)), "1*b ≠ b")
        if A.mul(b, (0, 0)) != e:
            rep.add("right unitality", (b[0], 0), (A.label(b), "1"), "b*1 ≠ b")
    pos = [b for b in basis if b[0] > 0]
    # products landing out of declared support
    for (a, b), v in A._prod.items():
        deg = a[0] + b[0]
        if v and deg not in w:
            rep.add("product outside window", (a[0], b[0]), (A.label(a), A.label(b)),
                    f"lands in degree {deg}")
        for k in v:
            if k >= A.dims.get(deg, 0):
                rep.add("product index out of range", (a[0], b[0]), (A.label(a), A.label(b)),
                        f"no basis vector {k} in degree {deg}")
    # associativity
    for a in pos:
        for b in pos:
            if a[0] + b[0] not in w:
                continue
            ab = A.mul(a, b)
            for c in pos:
                deg = a[0] + b[0] + c[0]
                if deg not in w:
                    continue
                rep.checked += 1
                lhs = A.mul_vec(ab, a[0] + b[0], {c[1]: f.one}, c[0])
                bc = A.mul(b, c)
                rhs = A.mul_vec({a[1]: f.one}, a[0], bc, b[0] + c[0])
                if lhs != rhs:
                    rep.add("associativity", (a[0], b[0], c[0]),
                            (A.label(a), A.label(b), A.label(c)), "(ab)c ≠ a(bc)")
    # Leibniz
    for a in pos:
        for b in pos:
            deg = a[0] + b[0]
            if deg + 1 not in w:
                continue
            rep.checked += 1
            ab = A.mul(a, b)
            lhs = {}
            for k, c in ab.items():
                _add_into(lhs, c, A.d_elem((deg, k)), p)
            da = A.d_elem(a)
            db = A.d_elem(b)
            rhs = A.mul_vec(da, a[0] + 1, {b[1]: f.one}, b[0])
            sign = -1 if a[0] % 2 else 1
            _add_into(rhs, sign, A.mul_vec({a[1]: f.one}, a[0], db, b[0] + 1), p)
            if lhs != rhs:
                rep.add("Leibniz", (a[0], b[0]), (A.label(a), A.label(b)),
                        "d(ab) ≠ d(a)b + (-1)^|a| a d(b)")
    return rep


# ---------------------------------------------------------------------------
# modules


class DGModule:
    """A DG module (left or right) over a DG algebra.

    ``act`` maps ``(a, j)`` to the matrix of the action of basis element
    ``a`` (positive degree) on ``M^j``.  The unit always acts as identity
    unless an explicit entry for it is given (then it is validated).
    """

    def __init__(self, algebra: DGAlgebra, side: str, dims: dict, d: dict = None,
                 act: dict = None, window: Window = None, labels: dict = None,
                 name: str = "M", check: bool = False):
        if side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', not {side!r}")
        self.algebra = algebra
        self.side = side
        self.field = algebra.field
        self.name = name
        self.window = window if window is not None else Window.complete()
        self.complex = CochainComplex(self.field, dims, d or {}, self.window, check=check)
        self.dims = self.complex.dims
        self.labels = labels
        self._act = {}
        for (a, j), m in (act or {}).items():
            a = tuple(a)
            self.field.check(m.field)
            exp = (self.dims.get(j + a[0], 0), self.dims.get(j, 0))
            if m.shape != exp:
                raise ValueError(f"action of {a} on degree {j} has shape {m.shape}, expected {exp}")
            if a == (0, 0) or not m.is_zero():
                self._act[(a, j)] = m
        self._colcache = {}

    def dim(self, j):
        return self.complex.dim(j)

    def label(self, j, i) -> str:
        if self.labels and j in self.labels:
            return self.labels[j][i]
        return f"m{j}_{i}"

    def action(self, a, j) -> Matrix:
        """Matrix of the action of basis element ``a`` on degree ``j``."""
        a = tuple(a)
        m = self._act.get((a, j))
        if m is not None:
            return m
        if j not in self.window or j + a[0] not in self.window:
            raise OutsideWindowError(f"action of {a} on degree {j} is unknown")
        if a == (0, 0):
            return Matrix.identity(self.field, self.dims.get(j, 0))
        return Matrix.zero(self.field, self.dims.get(j + a[0], 0), self.dims.get(j, 0))

    def action_columns(self, a, j) -> list:
        """Sparse images of the basis vectors of M^j under ``a``."""
        key = (a, j)
        cols = self._colcache.get(key)
        if cols is None:
            m = self._act.get(key)
            cols = m.sparse_columns() if m is not None else [dict() for _ in range(self.dims.get(j, 0))]
            self._colcache[key] = cols
        return cols

    def act_items(self):
        return self._act.items()

    def differential(self, j) -> Matrix:
        return self.complex.differential(j)

    def d_columns(self, j) -> list:
        key = ("d", j)
        cols = self._colcache.get(key)
        if cols is None:
            cols = self.complex.differential(j).sparse_columns()
            self._colcache[key] = cols
        return cols

    def cohomology(self, degrees=None) -> Cohomology:
        return self.complex.cohomology(degrees)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    @property
    def is_complete(self) -> bool:
        return self.window.is_complete

    def is_zero(self) -> bool:
        return not self.dims and self.window.is_complete

    def __repr__(self):
        return f"DGModule({self.name}, {self.side}, dims={self.dims}, window={self.window})"


def _leibniz_terms(M: DGModule, a, j):
    """Return (lhs, rhs) matrices for the Leibniz identity of ``a`` on M^j."""
    A = M.algebra
    f = M.field
    p_ = a[0]
    da = A.d_elem(a)
    shape_da = (M.dims.get(j + p_ + 1, 0), M.dims.get(j, 0))
    Lda = _lincomb_matrices(f, shape_da, [(c, M.action((p_ + 1, k), j)) for k, c in da.items()])
    if M.side == "left":
        lhs = M.differential(j + p_) @ M.action(a, j)
        rhs = Lda + (M.action(a, j + 1) @ M.differential(j)).scale(-1 if p_ % 2 else 1)
    else:
        lhs = M.differential(j + p_) @ M.action(a, j)
        rhs = M.action(a, j + 1) @ M.differential(j) + Lda.scale(-1 if j % 2 else 1)
    return lhs, rhs


def validate_module(M: DGModule) -> ValidationReport:
    """Check d^2 = 0, unit action, associativity and the action Leibniz rule
    on every degree where all the maps involved are known."""
    rep = ValidationReport(f"{M.side} module {M.name}")
    A = M.algebra
    f = M.field
    w = M.window
    degs = sorted(M.dims)
    # d^2
    for j in degs:
        if j + 2 in w and j in w:
            rep.checked += 1
            if not (M.differential(j + 1) @ M.differential(j)).is_zero():
                rep.add("d∘d nonzero", (j,), (), f"d^{j+1} d^{j} ≠ 0")
    # unit
    for (a, j), m in M.act_items():
        if a == (0, 0):
            rep.checked += 1
            if m != Matrix.identity(f, M.dims.get(j, 0)):
                rep.add("unit action", (j,), ("1",), "1 does not act as the identity")
    for (a, j) in list(k for k, _ in M.act_items()):
        if a[1] >= A.dims.get(a[0], 0):
            rep.add("unknown algebra element", (a[0], j), (), f"no basis element {a}")
    if not rep.ok:
        return rep
    pos = A.positive_basis()
    # associativity
    for a in pos:
        for b in pos:
            if a[0] + b[0] not in A.window:
                continue
            ab = A.mul(a, b)
            for j in degs:
                top = j + a[0] + b[0]
                if top not in w or j not in w or j + a[0] not in w or j + b[0] not in w:
                    continue
                rep.checked += 1
                shape = (M.dims.get(top, 0), M.dims.get(j, 0))
                if shape[0] == 0 or shape[1] == 0:
                    continue
                rhs = _lincomb_matrices(f, shape, [(c, M.action((a[0] + b[0], k), j)) for k, c in ab.items()])
                if M.side == "left":
                    lhs = M.action(a, j + b[0]) @ M.action(b, j)
                    msg = "a(bm) ≠ (ab)m"
                else:
                    lhs = M.action(b, j + a[0]) @ M.action(a, j)
                    msg = "(ma)b ≠ m(ab)"
                if lhs != rhs:
                    rep.add("associativity", (a[0], b[0], j), (A.label(a), A.label(b), M.label(j, 0) if M.dims.get(j) else ""), msg)
    # Leibniz
    for a in pos:
        for j in sorted(set(degs) | {jj - 1 for jj in degs} | {jj - a[0] for jj in degs}):
            need = (j, j + 1, j + a[0], j + a[0] + 1)
            if any(x not in w for x in need):
                continue
            if a[0] + 1 not in A.window:
                continue
            if M.dims.get(j, 0) == 0 and M.dims.get(j + 1, 0) == 0:
                continue
            rep.checked += 1
            lhs, rhs = _leibniz_terms(M, a, j)
            if lhs != rhs:
                rep.add("Leibniz", (a[0], j), (A.label(a),),
                        "d(am) ≠ (da)m ± a dm" if M.side == "left" else "d(ma) ≠ (dm)a ± m da")
    return rep


# ---------------------------------------------------------------------------
# morphisms


class DGMorphism:
    """Degree-0 map between modules over the same algebra and side."""

    def __init__(self, source: DGModule, target: DGModule, blocks: dict):
        if source.algebra is not target.algebra:
            raise AlgebraMismatchError("morphism between modules over different algebras")
        if source.side != target.side:
            raise AlgebraMismatchError("morphism between modules of different sides")
        self.source = source
        self.target = target
        self.blocks = {}
        for j, m in blocks.items():
            exp = (target.dims.get(j, 0), source.dims.get(j, 0))
            if m.shape != exp:
                raise ValueError(f"block {j} has shape {m.shape}, expected {exp}")
            if not m.is_zero():
                self.blocks[j] = m

    def block(self, j) -> Matrix:
        m = self.blocks.get(j)
        if m is None:
            return Matrix.zero(self.source.field, self.target.dims.get(j, 0), self.source.dims.get(j, 0))
        return m

    def validate(self) -> ValidationReport:
        rep = ValidationReport(f"morphism {self.source.name} -> {self.target.name}")
        X, Y = self.source, self.target
        w = X.window.intersect(Y.window)
        degs = sorted(set(X.dims) | set(Y.dims))
        for j in degs:
            if j in w and j + 1 in w:
                rep.checked += 1
                if self.block(j + 1) @ X.differential(j) != Y.differential(j) @ self.block(j):
                    rep.add("commutes with d", (j,), (), "f d ≠ d f")
        for a in X.algebra.positive_basis():
            for j in degs:
                if j in w and j + a[0] in w:
                    rep.checked += 1
                    if self.block(j + a[0]) @ X.action(a, j) != Y.action(a, j) @ self.block(j):
                        rep.add("commutes with action", (a[0], j), (X.algebra.label(a),), "f(a·m) ≠ a·f(m)")
        return rep


def _same_algebra(*mods):
    A = mods[0].algebra
    for M in mods[1:]:
        if M.algebra is not A:
            raise AlgebraMismatchError("modules are over different algebras")
    return A


# ---------------------------------------------------------------------------
# constructions


def free_module(A: DGAlgebra, gens, side: str = "left", name: str = "F") -> DGModule:
    """Free module on generators ``[(label, degree), ...]``.

    Left: basis a·e (a over the basis of A), d(a e) = (da) e, b(a e) = (ba) e;
    this is ⊕ Σ^{-g} A.  Right: basis e·a, d(e a) = (-1)^{|e|} e da,
    (e a) b = e (ab).  Within a degree generators vary slowest.
    """
    f = A.field
    p = f.characteristic
    gens = [(str(lab), int(g)) for lab, g in gens]
    # basis index per (gen, algebra element)
    index = {}
    dims = {}
    labels = {}
    for gi, (lab, g) in enumerate(gens):
        for adeg in A.degree_support():
            j = g + adeg
            for ai in range(A.dims[adeg]):
                k = dims.get(j, 0)
                index[(gi, (adeg, ai))] = (j, k)
                dims[j] = k + 1
                alab = A.label((adeg, ai))
                if side == "left":
                    labels.setdefault(j, []).append(lab if alab == "1" else f"{alab}.{lab}")
                else:
                    labels.setdefault(j, []).append(lab if alab == "1" else f"{lab}.{alab}")
    if A.window.hi == INF:
        window = Window(-INF, INF)
    else:
        window = Window(-INF, (min(g for _, g in gens) if gens else 0) + A.window.hi)
    if A.window.lo != -INF:
        raise ValueError("free modules need an algebra with complete data below")
    dcols = {}
    actcols = {}
    for (gi, a), (j, k) in index.items():
        g = gens[gi][1]
        # differential
        if j + 1 in window:
            da = A.d_elem(a) if (a[0] + 1) in A.window else {}
            sign = -1 if (side == "right" and g % 2) else 1
            col = {}
            for t, c in da.items():
                jj, kk = index[(gi, (a[0] + 1, t))]
                col[kk] = (sign * c) % p if p else sign * c
            dcols.setdefault(j, {})[k] = col
        for b in A.positive_basis():
            if j + b[0] not in window:
                continue
            prod = A.mul(b, a) if side == "left" else A.mul(a, b)
            col = {}
            for t, c in prod.items():
                jj, kk = index[(gi, (a[0] + b[0], t))]
                col[kk] = c
            if col:
                actcols.setdefault((b, j), {})[k] = col
    d = {}
    for j, cols in dcols.items():
        n = dims.get(j, 0)
        m = Matrix.from_columns(f, dims.get(j + 1, 0), [cols.get(k, {}) for k in range(n)])
        d[j] = Matrix(f, m.nrows, n, m.sparse_rows())
    act = {}
    for (b, j), cols in actcols.items():
        n = dims.get(j, 0)
        m = Matrix.from_columns(f, dims.get(j + b[0], 0), [cols.get(k, {}) for k in range(n)])
        act[(b, j)] = Matrix(f, m.nrows, n, m.sparse_rows())
    M = DGModule(A, side, dims, d, act, window, labels=labels, name=name)
    M.generators = gens
    M.free_index = index
    return M


def trivial_k_module(A: DGAlgebra, side: str = "left", name: str = "k") -> DGModule:
    """k in degree 0 with the augmentation action (A^{>0} acts by zero)."""
    return DGModule(A, side, {0: 1}, {}, {}, Window.complete(), labels={0: ["k0"]}, name=name)


def zero_module(A: DGAlgebra, side: str = "left", name: str = "0") -> DGModule:
    return DGModule(A, side, {}, {}, {}, Window.complete(), name=name)


def shift_module(M: DGModule, s: int, name: str = None) -> DGModule:
    """Σ^s M: (Σ^s M)^j = M^{j+s}, differential (-1)^s d; left actions pick
    up the sign (-1)^{s|a|}."""
    sgn_d = -1 if s % 2 else 1
    dims = {j - s: n for j, n in M.dims.items()}
    d = {j - s: (M.complex._d[j] if sgn_d == 1 else -M.complex._d[j]) for j in M.complex._d}
    act = {}
    for (a, j), m in M.act_items():
        sg = -1 if (M.side == "left" and (s * a[0]) % 2) else 1
        act[(a, j - s)] = m if sg == 1 else -m
    labels = {j - s: v for j, v in M.labels.items()} if M.labels else None
    return DGModule(M.algebra, M.side, dims, d, act, M.window.shift(s), labels=labels,
                    name=name or f"S^{s}({M.name})")


def direct_sum(*mods, name: str = None) -> DGModule:
    """Degreewise block sum; the window is the intersection."""
    if not mods:
        raise ValueError("direct_sum needs at least one module")
    A = _same_algebra(*mods)
    side = mods[0].side
    if any(M.side != side for M in mods):
        raise AlgebraMismatchError("cannot sum left and right modules")
    f = A.field
    w = mods[0].window
    for M in mods[1:]:
        w = w.intersect(M.window)
    degs = sorted(set().union(*[set(M.dims) for M in mods]))
    dims = {j: sum(M.dims.get(j, 0) for M in mods) for j in degs}
    d = {}
    for j in degs:
        if j in w and j + 1 in w:
            d[j] = block_diagonal(f, [M.differential(j) for M in mods])
    act = {}
    keys = set()
    for M in mods:
        keys |= {k for k, _ in M.act_items()}
    for (a, j) in keys:
        if j in w and j + a[0] in w:
            act[(a, j)] = block_diagonal(f, [M.action(a, j) for M in mods])
    return DGModule(A, side, {j: n for j, n in dims.items() if j in w}, d, act, w,
                    name=name or "+".join(M.name for M in mods))


def cone(fm: DGMorphism, name: str = None) -> DGModule:
    """Mapping cone of f: X -> Y; Cone^j = X^{j+1} ⊕ Y^j (X part first)."""
    X, Y = fm.source, fm.target
    A = _same_algebra(X, Y)
    fld = A.field
    side = X.side
    w = X.window.shift(1).intersect(Y.window)
    degs = sorted({j - 1 for j in X.dims} | set(Y.dims))
    degs = [j for j in degs if j in w]
    dims = {j: X.dims.get(j + 1, 0) + Y.dims.get(j, 0) for j in degs}
    d = {}
    for j in degs:
        if j + 1 not in w:
            continue
        xs, ys = X.dims.get(j + 1, 0), Y.dims.get(j, 0)
        xt, yt = X.dims.get(j + 2, 0), Y.dims.get(j + 1, 0)
        blocks = {}
        if xs and xt:
            blocks[(0, 0)] = -X.differential(j + 1)
        if xs and yt:
            blocks[(1, 0)] = fm.block(j + 1)
        if ys and yt:
            blocks[(1, 1)] = Y.differential(j)
        d[j] = Matrix.block(fld, [xt, yt], [xs, ys], blocks)
    act = {}
    keys = {(a, j - 1) for (a, j), _ in X.act_items()} | {k for k, _ in Y.act_items()}
    for (a, j) in keys:
        if j not in w or j + a[0] not in w or a == (0, 0):
            continue
        xs, ys = X.dims.get(j + 1, 0), Y.dims.get(j, 0)
        xt, yt = X.dims.get(j + 1 + a[0], 0), Y.dims.get(j + a[0], 0)
        blocks = {}
        if xs and xt:
            mx = X.action(a, j + 1)
            if side == "left" and a[0] % 2:
                mx = -mx
            blocks[(0, 0)] = mx
        if ys and yt:
            blocks[(1, 1)] = Y.action(a, j)
        act[(a, j)] = Matrix.block(fld, [xt, yt], [xs, ys], blocks)
    return DGModule(A, side, {j: n for j, n in dims.items() if n}, d, act, w,
                    name=name or f"cone({X.name}->{Y.name})")


def dual(M: DGModule, name: str = None) -> DGModule:
    """k-linear dual D(M) = Hom_k(M, k), a module on the opposite side."""
    w = M.window.negate()
    dims = {-j: n for j, n in M.dims.items()}
    d = {}
    for j, m in M.complex._d.items():
        # d_M^j : M^j -> M^{j+1} gives d_D^{-j-1} : D^{-j-1} -> D^{-j}
        jj = -j - 1
        sign = 1 if jj % 2 else -1  # -(-1)^{jj}
        d[jj] = m.transpose() if sign == 1 else -m.transpose()
    act = {}
    for (a, j), m in M.act_items():
        if a == (0, 0):
            continue
        # a : M^j -> M^{j+p} gives the action of a on D^{-j-p} -> D^{-j}
        jj = -j - a[0]
        t = m.transpose()
        if M.side == "right" and a[0] % 2:
            t = -t
        act[(a, jj)] = t
    other = "right" if M.side == "left" else "left"
    return DGModule(M.algebra, other, dims, d, act, w, name=name or f"D({M.name})")


def algebra_as_module(A: DGAlgebra, side: str = "left", name: str = "R") -> DGModule:
    """A as a module over itself (identical to the free module on one
    generator of degree 0, with the algebra's own labels)."""
    M = free_module(A, [("1", 0)], side=side, name=name)
    M.labels = {deg: list(A.labels[deg]) for deg in A.dims}
    return M


def free_morphism(F: DGModule, target: DGModule, images: list) -> DGMorphism:
    """Morphism out of a left free module sending generator α to the cycle
    ``images[α]`` (sparse vector in degree of the generator)."""
    if F.side != "left" or target.side != "left":
        raise ValueError("free_morphism is implemented for left modules")
    f = F.field
    p = f.characteristic
    A = F.algebra
    cols = {}
    for (gi, a), (j, k) in F.free_index.items():
        g = F.generators[gi][1]
        z = images[gi]
        if a == (0, 0):
            col = dict(z)
        else:
            acols = target.action_columns(a, g)
            col = {}
            for t, c in z.items():
                _add_into(col, c, acols[t], p)
        cols.setdefault(j, {})[k] = col
    blocks = {}
    for j, cs in cols.items():
        n = F.dims[j]
        m = Matrix.from_columns(f, target.dims.get(j, 0), [cs.get(k, {}) for k in range(n)])
        blocks[j] = Matrix(f, m.nrows, n, m.sparse_rows())
    return DGMorphism(F, target, blocks)


def hom_space(X: DGModule, Y: DGModule) -> list:
    """Basis of the space of DG morphisms X -> Y (complete modules only).

    Solves the linear system f d = d f and f(a·) = a·f(·) over all degrees
    and all positive-degree basis elements a.
    """
    A = _same_algebra(X, Y)
    if X.side != Y.side:
        raise AlgebraMismatchError("Hom between modules of different sides")
    if not (X.is_complete and Y.is_complete):
        raise ValueError("hom_space needs modules with complete data")
    f = A.field
    degs = sorted(set(X.dims) & set(Y.dims))
    offset = {}
    n = 0
    for j in degs:
        offset[j] = n
        n += X.dims[j] * Y.dims[j]

    def var(j, r, c):  # entry (r, c) of f^j
        return offset[j] + r * X.dims[j] + c

    rows = []

    def add_identity(jt, js, left_map, right_map):
        # equations  f^{jt} @ left_map - right_map @ f^{js} = 0,
        # left_map: X^{js} -> X^{jt}, right_map: Y^{js} -> Y^{jt}
        xs, xt = X.dims.get(js, 0), X.dims.get(jt, 0)
        ys, yt = Y.dims.get(js, 0), Y.dims.get(jt, 0)
        if xs == 0 or yt == 0:
            return
        lrows = left_map.sparse_rows() if left_map is not None else None
        lcols = left_map.sparse_columns() if left_map is not None else None
        rrows = right_map.sparse_rows() if right_map is not None else None
        for r in range(yt):
            for c in range(xs):
                eq = {}
                # (f^{jt} L)[r, c] = Σ_k f^{jt}[r, k] L[k, c]
                if lcols is not None and jt in offset:
                    for k, v in lcols[c].items():
                        _add_into(eq, v, {var(jt, r, k): 1}, f.characteristic)
                # (R f^{js})[r, c] = Σ_k R[r, k] f^{js}[k, c]
                if rrows is not None and js in offset:
                    for k, v in rrows[r].items():
                        _add_into(eq, -v, {var(js, k, c): 1}, f.characteristic)
                if eq:
                    rows.append(eq)

    for j in sorted(set(X.dims) | set(Y.dims)):
        if X.dims.get(j, 0) and Y.dims.get(j + 1, 0):
            add_identity(j + 1, j, X.differential(j), Y.differential(j))
        for a in A.positive_basis():
            if X.dims.get(j, 0) and Y.dims.get(j + a[0], 0):
                add_identity(j + a[0], j, X.action(a, j), Y.action(a, j))
    if n == 0:
        return []
    eqm = Matrix(f, len(rows), n, [{k: f(v) for k, v in r.items()} for r in rows])
    basis = []
    for vec in kernel_basis_sparse(eqm):
        blocks = {}
        for j in degs:
            xs, ys = X.dims[j], Y.dims[j]
            rws = [dict() for _ in range(ys)]
            for r in range(ys):
                for c in range(xs):
                    v = vec.get(var(j, r, c))
                    if v:
                        rws[r][c] = v
            blocks[j] = Matrix(f, ys, xs, rws)
        basis.append(DGMorphism(X, Y, blocks))
    return basis


def combine_morphisms(X, Y, morphs, coeffs) -> DGMorphism:
    f = X.field
    blocks = {}
    for c, m in zip(coeffs, morphs):
        c = f(c)
        if not c:
            continue
        for j, b in m.blocks.items():
            blocks[j] = blocks[j] + b.scale(c) if j in blocks else b.scale(c)
    return DGMorphism(X, Y, blocks)


def compose(g: DGMorphism, h: DGMorphism) -> DGMorphism:
    """g ∘ h."""
    if h.target is not g.source:
        raise ValueError("morphisms are not composable")
    blocks = {}
    for j in set(g.blocks) & set(h.blocks):
        blocks[j] = g.blocks[j] @ h.blocks[j]
    return DGMorphism(h.source, g.target, blocks)


def change_of_basis(M: DGModule, mats: dict, name: str = None) -> DGModule:
    """Transport M along invertible degreewise matrices T^j (new = T old)."""
    from .exactfield import solve  # local import keeps the namespace small

    f = M.field
    inv = {}
    for j, T in mats.items():
        n = T.nrows
        cols = []
        for i in range(n):
            e = [f.zero] * n
            e[i] = f.one
            x = solve(T, e)
            if x is None:
                raise ValueError(f"change of basis in degree {j} is not invertible")
            cols.append(x)
        inv[j] = Matrix.from_column_vectors(f, n, cols)

    def tr(j):
        return mats.get(j, Matrix.identity(f, M.dims.get(j, 0)))

    def ti(j):
        return inv.get(j, Matrix.identity(f, M.dims.get(j, 0)))

    d = {j: tr(j + 1) @ m @ ti(j) for j, m in M.complex._d.items()}
    act = {(a, j): tr(j + a[0]) @ m @ ti(j) for (a, j), m in M.act_items()}
    return DGModule(M.algebra, M.side, M.dims, d, act, M.window, name=name or M.name)
