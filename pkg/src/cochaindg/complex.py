"""Graded vector spaces, cochain complexes and their cohomology.

Every graded object carries a :class:`Window`: the range of degrees on which
its data is complete and trusted.  Queries outside the window raise
:class:`OutsideWindowError` -- "unknown" is never silently reported as zero.
A window bound may be ``-inf``/``+inf``; a complex whose window is the whole
line and whose support is finite is called *complete*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exactfield import EchelonBasis, Field, Matrix, kernel_basis_sparse, product_is_zero

INF = math.inf


class OutsideWindowError(LookupError):
    """A degree outside the trusted window was queried."""


class InvalidComplexError(ValueError):
    """d o d is nonzero somewhere."""

    def __init__(self, degree, message=None):
        self.degree = degree
        super().__init__(message or f"d∘d ≠ 0 starting in degree {degree}")


def fmt_bound(x) -> str:
    if x == INF:
        return "+inf"
    if x == -INF:
        return "-inf"
    return str(int(x))


@dataclass(frozen=True)
class Window:
    """Closed degree interval [lo, hi]; either end may be infinite."""

    lo: float = -INF
    hi: float = INF

    def __post_init__(self):
        if self.lo > self.hi and not self.is_empty_marker():
            raise ValueError(f"empty window [{self.lo}, {self.hi}]")

    def is_empty_marker(self):
        # windows produced by shrinking can become empty; allow lo = hi + 1
        return self.lo == self.hi + 1

    @classmethod
    def complete(cls) -> "Window":
        return cls(-INF, INF)

    @classmethod
    def make(cls, lo, hi) -> "Window":
        """Like the constructor but collapses inverted bounds to an empty window."""
        if lo > hi:
            if math.isinf(lo) or math.isinf(hi):
                raise ValueError(f"cannot form window [{lo}, {hi}]")
            return cls(hi + 1, hi)
        return cls(lo, hi)

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    @property
    def is_complete(self) -> bool:
        return self.lo == -INF and self.hi == INF

    def __contains__(self, j) -> bool:
        return self.lo <= j <= self.hi

    def intersect(self, other: "Window") -> "Window":
        return Window.make(max(self.lo, other.lo), min(self.hi, other.hi))

    def shift(self, s: int) -> "Window":
        """Window of degrees j with j + s inside self (the window of a Σ^s-shift)."""
        return Window.make(self.lo - s, self.hi - s)

    def negate(self) -> "Window":
        return Window.make(-self.hi, -self.lo)

    def interior(self) -> "Window":
        """Degrees whose two neighbours are also inside: [lo+1, hi-1]."""
        return Window.make(self.lo + 1, self.hi - 1)

    def degrees(self, lo=None, hi=None):
        """Iterate over the integer degrees of the window, clipped to [lo, hi]."""
        a = self.lo if lo is None else max(self.lo, lo)
        b = self.hi if hi is None else min(self.hi, hi)
        if math.isinf(a) or math.isinf(b):
            raise ValueError("cannot iterate an unbounded range; pass finite clip bounds")
        return range(int(a), int(b) + 1)

    def __str__(self):
        return f"[{fmt_bound(self.lo)}, {fmt_bound(self.hi)}]"


class GradedSpace:
    """Degreewise finite-dimensional graded vector space on a window."""

    def __init__(self, dims: dict, window: Window):
        self.window = window
        clean = {}
        for j, n in dims.items():
            if n < 0:
                raise ValueError(f"negative dimension in degree {j}")
            if n and j not in window:
                raise OutsideWindowError(f"degree {j} lies outside window {window}")
            if n:
                clean[int(j)] = int(n)
        self._dims = clean

    def dim(self, j: int) -> int:
        if j not in self.window:
            raise OutsideWindowError(f"degree {j} outside window {self.window}")
        return self._dims.get(j, 0)

    __getitem__ = dim

    def known(self, j) -> bool:
        return j in self.window

    @property
    def support(self) -> list:
        return sorted(self._dims)

    @property
    def dims(self) -> dict:
        return dict(self._dims)

    def total_dim(self) -> int:
        return sum(self._dims.values())

    def is_zero(self) -> bool:
        return not self._dims

    def __eq__(self, other):
        return (
            isinstance(other, GradedSpace)
            and self.window == other.window
            and self._dims == other._dims
        )

    def __repr__(self):
        return f"GradedSpace({self._dims}, window={self.window})"


@dataclass(frozen=True)
class Extent:
    """inf / sup / amp of a support, with a per-end exactness flag.

    ``inf_exact`` is False when the bottom of the support might lie below
    the trusted window; ``sup_exact`` likewise at the top.  When an end is
    not exact, the reported value is the value seen inside the window
    (a bound, not the truth).
    """

    inf: float
    sup: float
    inf_exact: bool = True
    sup_exact: bool = True

    @property
    def amp(self) -> float:
        if self.sup == -INF:
            return -INF
        return self.sup - self.inf

    @property
    def certainty(self) -> str:
        return "exact" if (self.inf_exact and self.sup_exact) else "lower-bound-only"

    @property
    def is_zero(self) -> bool:
        return self.sup == -INF and self.inf == INF

    def as_tuple(self):
        return (self.inf, self.sup, self.amp, self.certainty)


def inf_sup_amp(H: GradedSpace, assume_zero_outside: bool = False) -> Extent:
    """inf, sup and amp of the support of H, with the conventions
    inf(0) = +inf, sup(0) = amp(0) = -inf.

    The ends are exact when the window is unbounded on that side (complete
    data) or when the caller asserts, e.g. from a compactness certificate,
    that nothing lives outside the window.
    """
    sup_ = H.support
    w = H.window
    lo_ok = assume_zero_outside or w.lo == -INF
    hi_ok = assume_zero_outside or w.hi == INF
    if not sup_:
        return Extent(INF, -INF, lo_ok and hi_ok, lo_ok and hi_ok)
    return Extent(sup_[0], sup_[-1], lo_ok, hi_ok)


class CochainComplex:
    """A complex of finite-dimensional spaces with degree +1 differential.

    ``dims`` maps degree to dimension, ``d`` maps degree j to the matrix of
    d^j : C^j -> C^{j+1} (shape dims[j+1] x dims[j]); missing entries are
    zero.  Only degrees inside ``window`` carry data; d^j is known when both
    j and j+1 are inside.
    """

    def __init__(self, field: Field, dims: dict, d: dict, window: Window = None, check=True):
        self.field = field
        self.window = window if window is not None else Window.complete()
        self.space = GradedSpace(dims, self.window)
        self._d = {}
        for j, m in d.items():
            field.check(m.field)
            if m.shape != (self.space._dims.get(j + 1, 0), self.space._dims.get(j, 0)):
                raise ValueError(
                    f"d^{j} has shape {m.shape}, expected "
                    f"{(self.space._dims.get(j + 1, 0), self.space._dims.get(j, 0))}"
                )
            if not m.is_zero():
                self._d[j] = m
        if check:
            self.check_d_squared()

    def dim(self, j) -> int:
        return self.space.dim(j)

    @property
    def dims(self):
        return self.space.dims

    def differential(self, j) -> Matrix:
        if j not in self.window or (j + 1) not in self.window:
            raise OutsideWindowError(f"d^{j} is not known on window {self.window}")
        m = self._d.get(j)
        if m is None:
            return Matrix.zero(self.field, self.space._dims.get(j + 1, 0), self.space._dims.get(j, 0))
        return m

    def support(self):
        return self.space.support

    def check_d_squared(self):
        for j in sorted(self._d):
            a = self._d[j]
            b = self._d.get(j + 1)
            if b is not None and not product_is_zero(b, a):
                raise InvalidComplexError(j)

    def cohomology_window(self) -> Window:
        return self.window.interior()

    def cohomology(self, degrees=None) -> "Cohomology":
        return Cohomology(self, degrees)

    def shift(self, s: int) -> "CochainComplex":
        return shift_complex(self, s)


def _span_echelon(field, dim, vectors, track=False):
    eb = EchelonBasis(field, dim, track=track)
    for v in vectors:
        eb.add(v)
    return eb


class Cohomology:
    """Cohomology of a complex with chosen representatives.

    ``H`` is the graded space of dimensions on the trusted window
    ``[lo+1, hi-1]`` (clipped to ``degrees`` when given).  ``reps(j)`` lists
    cycles whose classes form a basis of H^j and ``classify(j, z)`` returns
    the coordinates of the class of a cycle z in that basis.

    Representatives are chosen deterministically: the kernel basis of d^j
    (from rref pivots) is scanned in order and a vector is kept when it is
    independent of the image of d^{j-1} and of the vectors already kept.
    """

    def __init__(self, c: CochainComplex, degrees=None):
        self.complex = c
        w = c.cohomology_window()
        if degrees is not None:
            lo, hi = degrees
            w = w.intersect(Window.make(lo, hi))
        self.window = w
        self._cache = {}
        if w.empty:
            self.H = GradedSpace({}, w)
            return
        degs = [j for j in c.support() if j in w]
        dims = {}
        for j in degs:
            n = len(self._data(j)[0])
            if n:
                dims[j] = n
        self.H = GradedSpace(dims, w)

    def _data(self, j):
        if j in self._cache:
            return self._cache[j]
        c = self.complex
        if j not in self.window:
            raise OutsideWindowError(f"H^{j} is unknown on window {self.window}")
        n = c.space._dims.get(j, 0)
        if n == 0:
            self._cache[j] = ([], None, 0)
            return self._cache[j]
        f = c.field
        cycles = kernel_basis_sparse(c.differential(j))
        prev = c.differential(j - 1)
        boundaries = [col for col in prev.sparse_columns() if col]
        eb = _span_echelon(f, n, boundaries, track=True)
        nb = len(boundaries)
        reps = []
        for z in cycles:
            if eb.add(z, record_dependent=False):
                reps.append(z)
        # the tracking basis has generators: boundaries, then reps
        self._cache[j] = (reps, eb, nb)
        return self._cache[j]

    def dim(self, j) -> int:
        return self.H.dim(j)

    def reps(self, j) -> list:
        """Representative cycles (dense tuples) of a basis of H^j."""
        reps = self._data(j)[0]
        n = self.complex.space._dims.get(j, 0)
        z = self.complex.field.zero
        return [tuple(r.get(i, z) for i in range(n)) for r in reps]

    def reps_sparse(self, j) -> list:
        return list(self._data(j)[0])

    def classify(self, j, cycle) -> tuple:
        """Coordinates of the class of ``cycle`` in the basis given by reps(j)."""
        reps, eb, nb = self._data(j)
        c = self.complex
        if not isinstance(cycle, dict):
            if len(cycle) != c.space._dims.get(j, 0):
                raise ValueError("cycle has the wrong length")
            cycle = {i: x for i, x in enumerate(cycle) if x}
        if cycle and not c.differential(j).apply_sparse(cycle) == {}:
            raise ValueError(f"vector is not a cycle in degree {j}")
        if not reps:
            return ()
        combo = eb.coordinates(cycle)
        if combo is None:  # pragma: no cover - kernel ⊂ span(boundaries, reps)
            raise ArithmeticError("cycle not in span of boundaries and representatives")
        zero = c.field.zero
        return tuple(combo.get(nb + t, zero) for t in range(len(reps)))


def cohomology(c: CochainComplex, degrees=None) -> Cohomology:
    return Cohomology(c, degrees)


def shift_complex(c: CochainComplex, s: int) -> CochainComplex:
    """Σ^s c with (Σ^s c)^j = c^{j+s} and differential (-1)^s d."""
    dims = {j - s: n for j, n in c.space._dims.items()}
    sign = -1 if s % 2 else 1
    d = {j - s: (m if sign == 1 else -m) for j, m in c._d.items()}
    return CochainComplex(c.field, dims, d, c.window.shift(s), check=False)


def zero_complex(field: Field, window: Window = None) -> CochainComplex:
    return CochainComplex(field, {}, {}, window)


def cohomology_dims(c: CochainComplex, degrees=None) -> GradedSpace:
    """Dimensions of H^j(c) on the trusted window, from ranks only.

    Cheaper than :class:`Cohomology` when no representatives are needed.
    """
    w = c.cohomology_window()
    if degrees is not None:
        w = w.intersect(Window.make(*degrees))
    if w.empty:
        return GradedSpace({}, w)
    ranks = {}

    def rank(j):
        if j not in ranks:
            m = c._d.get(j)
            ranks[j] = m.rank() if m is not None else 0
        return ranks[j]

    dims = {}
    for j in c.support():
        if j in w:
            n = c.space._dims[j] - rank(j) - rank(j - 1)
            if n:
                dims[j] = n
    return GradedSpace(dims, w)
