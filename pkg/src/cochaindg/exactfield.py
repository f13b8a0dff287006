"""Exact field arithmetic and the sparse linear-algebra kernel.

Two fields are supported: the rationals (elements are ``fractions.Fraction``)
and prime fields GF(p) for p < 2**31 (elements are ints in ``[0, p)``).
Matrices keep sparse rows internally; every public result is deterministic.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm


class FieldMismatchError(ValueError):
    """Raised when objects over different fields are combined."""


class Field:
    """Common interface of QQ and GF(p)."""

    characteristic = 0

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, x):
        raise NotImplementedError

    def check(self, other: "Field"):
        if other != self:
            raise FieldMismatchError(f"cannot combine {self} with {other}")


class RationalField(Field):
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, bool) or isinstance(x, float):
            raise TypeError(f"refusing inexact or boolean value {x!r}")
        if isinstance(x, (int, str)):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def format(self, x) -> str:
        return str(x)


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or p >= 2**31 or not _is_prime(p):
            raise ValueError(f"GF(p) needs a prime p < 2**31, got {p}")
        self.characteristic = p

    def __call__(self, x):
        p = self.characteristic
        if isinstance(x, bool) or isinstance(x, float):
            raise TypeError(f"refusing inexact or boolean value {x!r}")
        if isinstance(x, int):
            return x % p
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            den = x.denominator % p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {p}")
            return x.numerator * pow(den, p - 2, p) % p
        raise TypeError(f"cannot coerce {x!r} into GF({p})")

    def inv(self, x):
        p = self.characteristic
        if x % p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, p - 2, p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("GF", self.characteristic))

    def __repr__(self):
        return f"GF({self.characteristic})"

    def format(self, x) -> str:
        return str(x)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str) -> Field:
    """Parse ``QQ`` or ``GF(p)`` / ``GF p``."""
    t = text.strip().replace(" ", "")
    if t.upper() in ("QQ", "Q"):
        return QQ
    if t.upper().startswith("GF"):
        rest = t[2:].strip("()")
        return GF(int(rest))
    raise ValueError(f"unknown field {text!r}")


# ---------------------------------------------------------------------------
# sparse vector helpers; a sparse vector is a dict index -> nonzero value


def _axpy(target: dict, factor, source: dict, p: int):
    """target += factor * source, in place, dropping zeros."""
    if p:
        for k, v in source.items():
            w = (target.get(k, 0) + factor * v) % p
            if w:
                target[k] = w
            else:
                target.pop(k, None)
    else:
        for k, v in source.items():
            w = target.get(k, 0) + factor * v
            if w:
                target[k] = w
            else:
                target.pop(k, None)


def _scale(vec: dict, factor, p: int) -> dict:
    if p:
        return {k: v * factor % p for k, v in vec.items()}
    return {k: v * factor for k, v in vec.items()}


class Matrix:
    """An immutable matrix over a field.

    Entries are stored as one sparse dict per row; ``entries`` gives the
    dense list-of-lists view.
    """

    __slots__ = ("field", "nrows", "ncols", "_rows")

    def __init__(self, field: Field, nrows: int, ncols: int, rows=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = tuple({} for _ in range(nrows))
        self._rows = tuple(rows)
        if len(self._rows) != nrows:
            raise ValueError("row storage does not match nrows")

    # -- constructors --------------------------------------------------
    @classmethod
    def from_lists(cls, field: Field, data, ncols: int | None = None) -> "Matrix":
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
            row = {}
            for j, x in enumerate(r):
                v = field(x)
                if v:
                    row[j] = v
            rows.append(row)
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def zero(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        one = field.one
        return cls(field, n, n, [{i: one} for i in range(n)])

    @classmethod
    def from_columns(cls, field: Field, nrows: int, columns) -> "Matrix":
        """Build from sparse column dicts (row index -> value)."""
        rows = [dict() for _ in range(nrows)]
        ncols = 0
        for j, col in enumerate(columns):
            ncols = j + 1
            for i, v in col.items():
                if v:
                    rows[i][j] = v
        return cls(field, nrows, ncols, rows)

    @classmethod
    def from_column_vectors(cls, field: Field, nrows: int, vectors) -> "Matrix":
        cols = [{i: field(x) for i, x in enumerate(v) if x} for v in vectors]
        m = cls.from_columns(field, nrows, cols)
        if m.ncols != len(cols):
            m = cls(field, nrows, len(cols), m._rows)
        return m

    @classmethod
    def block(cls, field: Field, row_sizes, col_sizes, blocks: dict) -> "Matrix":
        """Assemble from a dict (block_row, block_col) -> Matrix."""
        roff = [0]
        for s in row_sizes:
            roff.append(roff[-1] + s)
        coff = [0]
        for s in col_sizes:
            coff.append(coff[-1] + s)
        rows = [dict() for _ in range(roff[-1])]
        for (bi, bj), m in blocks.items():
            if m is None:
                continue
            field.check(m.field)
            if m.nrows != row_sizes[bi] or m.ncols != col_sizes[bj]:
                raise ValueError(
                    f"block ({bi},{bj}) has shape {m.shape}, expected "
                    f"{(row_sizes[bi], col_sizes[bj])}"
                )
            r0, c0 = roff[bi], coff[bj]
            for i, row in enumerate(m._rows):
                if row:
                    target = rows[r0 + i]
                    for j, v in row.items():
                        target[c0 + j] = v
        return cls(field, roff[-1], coff[-1], rows)

    # -- views ---------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def entries(self):
        z = self.field.zero
        return [[row.get(j, z) for j in range(self.ncols)] for row in self._rows]

    def row(self, i: int) -> dict:
        return self._rows[i]

    def sparse_rows(self):
        return self._rows

    def sparse_columns(self):
        cols = [dict() for _ in range(self.ncols)]
        for i, row in enumerate(self._rows):
            for j, v in row.items():
                cols[j][i] = v
        return cols

    def column(self, j: int) -> tuple:
        z = self.field.zero
        return tuple(row.get(j, z) for row in self._rows)

    def __getitem__(self, ij):
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(ij)
        return self._rows[i].get(j, self.field.zero)

    def is_zero(self) -> bool:
        return not any(self._rows)

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and all(a == b for a, b in zip(self._rows, other._rows))
        )

    def __hash__(self):
        return hash((self.shape, tuple(tuple(sorted(r.items())) for r in self._rows)))

    def __repr__(self):
        return f"Matrix({self.field}, {self.entries})"

    # -- arithmetic ----------------------------------------------------
    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.ncols, self.nrows, self.sparse_columns())

    T = property(transpose)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f(c)
        if not c:
            return Matrix.zero(f, self.nrows, self.ncols)
        p = f.characteristic
        return Matrix(f, self.nrows, self.ncols, [_scale(r, c, p) for r in self._rows])

    def __add__(self, other: "Matrix") -> "Matrix":
        self.field.check(other.field)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        p = self.field.characteristic
        rows = []
        for a, b in zip(self._rows, other._rows):
            r = dict(a)
            _axpy(r, 1, b, p)
            rows.append(r)
        return Matrix(self.field, self.nrows, self.ncols, rows)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self.field.check(other.field)
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        p = self.field.characteristic
        orows = other._rows
        rows = []
        for a in self._rows:
            r = {}
            for k, v in a.items():
                b = orows[k]
                if b:
                    _axpy(r, v, b, p)
            rows.append(r)
        return Matrix(self.field, self.nrows, other.ncols, rows)

    def apply(self, vec) -> tuple:
        """Matrix times a dense column vector."""
        if len(vec) != self.ncols:
            raise ValueError(f"vector of length {len(vec)} for {self.shape} matrix")
        f = self.field
        p = f.characteristic
        out = []
        for row in self._rows:
            s = 0
            for j, v in row.items():
                x = vec[j]
                if x:
                    s += v * x
            out.append(f(s % p) if p else f(s))
        return tuple(out)

    def apply_sparse(self, vec: dict) -> dict:
        p = self.field.characteristic
        out = {}
        for i, row in enumerate(self._rows):
            s = 0
            for j, v in row.items():
                x = vec.get(j)
                if x:
                    s += v * x
            if p:
                s %= p
            if s:
                out[i] = s
        return out

    def rank(self) -> int:
        return sparse_rank(self)


def hstack(field: Field, mats, nrows: int | None = None) -> Matrix:
    mats = list(mats)
    if nrows is None:
        nrows = mats[0].nrows if mats else 0
    return Matrix.block(field, [nrows], [m.ncols for m in mats], {(0, k): m for k, m in enumerate(mats)})


def vstack(field: Field, mats, ncols: int | None = None) -> Matrix:
    mats = list(mats)
    if ncols is None:
        ncols = mats[0].ncols if mats else 0
    return Matrix.block(field, [m.nrows for m in mats], [ncols], {(k, 0): m for k, m in enumerate(mats)})


def block_diagonal(field: Field, mats) -> Matrix:
    mats = list(mats)
    return Matrix.block(
        field,
        [m.nrows for m in mats],
        [m.ncols for m in mats],
        {(k, k): m for k, m in enumerate(mats)},
    )


# ---------------------------------------------------------------------------
# elimination


class EchelonBasis:
    """Incrementally maintained echelon basis of a subspace of F^n.

    Each stored row is normalised so its leading (smallest) index carries
    coefficient 1.  With ``track=True`` every stored row also remembers its
    expression in terms of the vectors passed to :meth:`add`, which lets
    :meth:`coordinates` express a vector in terms of the generators.
    """

    def __init__(self, field: Field, dim: int, track: bool = False):
        self.field = field
        self.dim = dim
        self.track = track
        self._pivots: dict[int, dict] = {}
        self._combo: dict[int, dict] = {}
        self.generators: list[dict] = []

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def _reduce(self, vec: dict, combo: dict | None):
        p = self.field.characteristic
        pivots = self._pivots
        v = dict(vec)
        while v:
            c = min(v)
            row = pivots.get(c)
            if row is None:
                return v, combo, c
            factor = -v[c]
            _axpy(v, factor, row, p)
            if combo is not None:
                _axpy(combo, factor, self._combo[c], p)
        return v, combo, None

    def add(self, vec, record_dependent: bool = True) -> bool:
        """Add a vector (dense sequence or sparse dict); True if independent.

        With ``record_dependent=False`` a dependent vector is dropped instead
        of being kept as a (coefficient-zero) generator.
        """
        if not isinstance(vec, dict):
            vec = {i: x for i, x in enumerate(vec) if x}
        idx = len(self.generators)
        combo = {idx: self.field.one} if self.track else None
        v, combo, lead = self._reduce(vec, combo)
        if lead is None:
            if record_dependent:
                self.generators.append(vec)
            return False
        self.generators.append(vec)
        p = self.field.characteristic
        inv = self.field.inv(v[lead])
        self._pivots[lead] = _scale(v, inv, p)
        if self.track:
            self._combo[lead] = _scale(combo, inv, p)
        return True

    def contains(self, vec) -> bool:
        if not isinstance(vec, dict):
            vec = {i: x for i, x in enumerate(vec) if x}
        v, _, _ = self._reduce(vec, None)
        return not v

    def coordinates(self, vec):
        """Coefficients c with vec = sum c_i generators[i], or None.

        Requires ``track=True``.  Dependent generators get coefficient 0.
        """
        if not self.track:
            raise RuntimeError("coordinates() needs a tracking echelon basis")
        if not isinstance(vec, dict):
            vec = {i: x for i, x in enumerate(vec) if x}
        p = self.field.characteristic
        pivots = self._pivots
        v = dict(vec)
        combo: dict = {}
        while v:
            c = min(v)
            row = pivots.get(c)
            if row is None:
                return None
            factor = v[c]
            _axpy(v, -factor, row, p)
            _axpy(combo, factor, self._combo[c], p)
        return combo


def _rank(m: Matrix) -> int:
    # eliminate along the shorter side
    vectors = m.sparse_rows() if m.nrows <= m.ncols else m.sparse_columns()
    dim = m.ncols if m.nrows <= m.ncols else m.nrows
    eb = EchelonBasis(m.field, dim)
    for v in vectors:
        if v:
            eb.add(v)
    return eb.rank


def rref(m: Matrix):
    """Reduced row echelon form and pivot columns.

    Pivoting is deterministic: rows are processed top to bottom and each
    row's leading column is the first nonzero entry from the left.
    """
    f = m.field
    for row in m.sparse_rows():
        for v in row.values():
            # entries are produced by Field.__call__, so this only trips on
            # hand-built storage that bypassed coercion
            if f.characteristic and not (isinstance(v, int) and 0 <= v < f.characteristic):
                raise FieldMismatchError(f"entry {v!r} does not belong to {f}")
            if not f.characteristic and not isinstance(v, (int, Fraction)):
                raise FieldMismatchError(f"entry {v!r} does not belong to {f}")
    p = f.characteristic
    eb = EchelonBasis(f, m.ncols)
    for row in m.sparse_rows():
        if row:
            eb.add(row)
    pivots = sorted(eb._pivots)
    # back substitution, last pivot first
    reduced: dict[int, dict] = {}
    for c in reversed(pivots):
        r = dict(eb._pivots[c])
        for c2 in [k for k in r if k != c and k in reduced]:
            _axpy(r, -r[c2], reduced[c2], p)
        reduced[c] = r
    rows = [reduced[c] for c in pivots]
    rows += [dict() for _ in range(m.nrows - len(rows))]
    return Matrix(f, m.nrows, m.ncols, rows), pivots


def kernel_basis(m: Matrix) -> list[tuple]:
    """Basis of the null space, one vector per non-pivot column of rref(m)."""
    f = m.field
    p = f.characteristic
    r, pivots = rref(m)
    pivset = set(pivots)
    out = []
    for free in range(m.ncols):
        if free in pivset:
            continue
        vec = [f.zero] * m.ncols
        vec[free] = f.one
        for k, c in enumerate(pivots):
            x = r.row(k).get(free)
            if x:
                vec[c] = (-x) % p if p else -x
        out.append(tuple(vec))
    return out


def kernel_basis_sparse(m: Matrix) -> list[dict]:
    """Like :func:`kernel_basis` but returns sparse dicts (same vectors)."""
    p = m.field.characteristic
    r, pivots = rref(m)
    pivset = set(pivots)
    # column view of the reduced rows restricted to free columns
    free_entries: dict[int, dict] = {}
    for k, c in enumerate(pivots):
        for j, x in r.row(k).items():
            if j not in pivset:
                free_entries.setdefault(j, {})[c] = (-x) % p if p else -x
    out = []
    one = m.field.one
    for free in range(m.ncols):
        if free in pivset:
            continue
        v = dict(free_entries.get(free, {}))
        v[free] = one
        out.append(v)
    return out


def image_basis(m: Matrix) -> list[tuple]:
    """Basis of the column space: the columns of m at the pivot columns."""
    _, pivots = rref(m)
    return [m.column(c) for c in pivots]


def solve(m: Matrix, b):
    """Some x with m x = b, or None when the system is inconsistent."""
    b = tuple(m.field(x) for x in b)
    if len(b) != m.nrows:
        raise ValueError(f"right-hand side of length {len(b)} for {m.shape} matrix")
    f = m.field
    eb = EchelonBasis(f, m.nrows, track=True)
    for col in m.sparse_columns():
        eb.add(col)
    combo = eb.coordinates({i: x for i, x in enumerate(b) if x})
    if combo is None:
        return None
    x = [f.zero] * m.ncols
    for k, v in combo.items():
        x[k] = v
    x = tuple(x)
    if m.apply(x) != b:  # pragma: no cover - guards the kernel itself
        raise ArithmeticError("solve produced a non-solution")
    return x


def complement_basis(field: Field, sub, dim: int) -> list[int]:
    """Indices of the lexicographically earliest standard basis vectors that
    complete the independent family ``sub`` to a basis of F^dim."""
    eb = EchelonBasis(field, dim)
    for v in sub:
        if not eb.add(v):
            raise ValueError("vectors in sub are linearly dependent")
    chosen = []
    one = field.one
    for i in range(dim):
        if eb.add({i: one}):
            chosen.append(i)
    return chosen


def coordinates_in_quotient(field: Field, sub, full_dim: int, v) -> tuple:
    """Coordinates of the class of v in F^full_dim / span(sub).

    The quotient is identified with the span of the complement returned by
    :func:`complement_basis`; the result lists coefficients on those vectors.
    """
    if len(v) != full_dim:
        raise ValueError(f"vector of length {len(v)} outside ambient dimension {full_dim}")
    sub = [tuple(field(x) for x in s) for s in sub]
    comp = complement_basis(field, sub, full_dim)
    eb = EchelonBasis(field, full_dim, track=True)
    for s in sub:
        eb.add(s)
    one = field.one
    for i in comp:
        eb.add({i: one})
    combo = eb.coordinates({i: field(x) for i, x in enumerate(v) if x})
    k = len(sub)
    return tuple(combo.get(k + t, field.zero) for t in range(len(comp)))


def _integer_rows(m: Matrix):
    """Rows of a rational matrix scaled to primitive integer vectors."""
    out = []
    for row in m.sparse_rows():
        if not row:
            continue
        den = 1
        for v in row.values():
            den = lcm(den, v.denominator)
        r = {k: int(v * den) for k, v in row.items()}
        g = 0
        for v in r.values():
            g = gcd(g, v)
        out.append({k: v // g for k, v in r.items()})
    return out


def product_is_zero(b: Matrix, a: Matrix) -> bool:
    """Whether b @ a = 0, without forming the product over QQ: b is scaled
    row by row and a by one common denominator, both to integers, which
    does not change whether the product vanishes."""
    if b.ncols != a.nrows:
        raise ValueError(f"cannot multiply {b.shape} by {a.shape}")
    f = a.field
    f.check(b.field)
    if f.characteristic:
        return (b @ a).is_zero()
    den = 1
    for row in a.sparse_rows():
        for v in row.values():
            den = lcm(den, v.denominator)
    arows = [{k: int(v * den) for k, v in row.items()} for row in a.sparse_rows()]
    for row in b.sparse_rows():
        if not row:
            continue
        rden = 1
        for v in row.values():
            rden = lcm(rden, v.denominator)
        acc = {}
        for k, v in row.items():
            src = arows[k]
            if not src:
                continue
            c = int(v * rden)
            for t, w in src.items():
                acc[t] = acc.get(t, 0) + c * w
        if any(acc.values()):
            return False
    return True


def sparse_rank(m: Matrix) -> int:
    """Rank by right-looking sparse elimination with Markowitz-style pivots.

    Only the rank is produced, so pivot order is free to minimise fill-in:
    the shortest remaining row is chosen and, inside it, the column with the
    fewest entries.  Over QQ the elimination is fraction-free on integer
    rows (content removed after each update) which keeps entries small.
    """
    f = m.field
    p = f.characteristic
    if m.nrows > m.ncols:
        m = m.transpose()
    if p:
        rows = [dict(r) for r in m.sparse_rows() if r]
    else:
        rows = _integer_rows(m)
    alive = dict(enumerate(rows))
    colrows: dict[int, set] = {}
    for i, r in alive.items():
        for c in r:
            colrows.setdefault(c, set()).add(i)
    rank = 0
    singles = [c for c, rs in colrows.items() if len(rs) == 1]

    def drain():
        # a column met by a single live row gives a pivot without fill-in
        nonlocal rank
        while singles:
            c = singles.pop()
            rs = colrows[c]
            if len(rs) != 1:
                continue
            (i,) = rs
            prow = alive.pop(i)
            rank += 1
            for k in prow:
                colrows[k].discard(i)
                if len(colrows[k]) == 1:
                    singles.append(k)

    drain()
    heap = [(len(r), i) for i, r in alive.items()]
    heapq.heapify(heap)
    while heap:
        if singles:
            drain()
        n, i = heapq.heappop(heap)
        r0 = alive.get(i)
        if r0 is None or len(r0) != n:
            continue  # stale heap entry
        prow = alive.pop(i)
        for c in prow:
            colrows[c].discard(i)
            if len(colrows[c]) == 1:
                singles.append(c)
        if not prow:
            continue
        c = min(prow, key=lambda t: (len(colrows[t]), t))
        rank += 1
        pv = prow[c]
        targets = sorted(colrows[c])
        for t in targets:
            r = alive[t]
            rv = r[c]
            if p:
                factor = rv * pow(pv, p - 2, p) % p
                for k, v in prow.items():
                    w = (r.get(k, 0) - factor * v) % p
                    if w:
                        if k not in r:
                            colrows[k].add(t)
                        r[k] = w
                    elif k in r:
                        del r[k]
                        colrows[k].discard(t)
                        if len(colrows[k]) == 1:
                            singles.append(k)
            else:
                g = gcd(pv, rv)
                a, b = pv // g, rv // g
                newr = {}
                for k, v in r.items():
                    newr[k] = v * a
                for k, v in prow.items():
                    w = newr.get(k, 0) - b * v
                    newr[k] = w
                cont = 0
                for k in list(newr):
                    if newr[k] == 0:
                        del newr[k]
                    else:
                        cont = gcd(cont, newr[k])
                if cont > 1:
                    for k in newr:
                        newr[k] //= cont
                for k in r:
                    if k not in newr:
                        colrows[k].discard(t)
                        if len(colrows[k]) == 1:
                            singles.append(k)
                for k in newr:
                    if k not in r:
                        colrows[k].add(t)
                alive[t] = newr
            heapq.heappush(heap, (len(alive[t]), t))
        # the pivot column is now empty among live rows
    return rank
