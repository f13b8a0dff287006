"""A small text format for algebras, modules and task lists.

Example::

    # the 2-sphere
    [field]
    QQ

    [window]
    lo = 0
    hi = 8

    [algebra]
    basis 0: 1
    basis 2: x

    [module k]
    side left
    basis 0: k0

    [module R]
    construct = regular

    [tasks]
    betti k
    pcd R

Sections: ``[field]`` (one line: ``QQ`` or ``GF(p)``), ``[window]``
(``lo``, ``hi``, ``truncated``), ``[algebra]`` (``name``, ``atlas``,
``basis``, ``d x = ...``, ``x * y = ...``), any number of
``[module NAME]`` (``side``, ``basis``, ``d m = ...``, ``act a m = ...``
or a single ``construct = ...``) and ``[tasks]`` (one command per line).

Expressions are sums of terms ``[coefficient] label`` joined by ``+`` and
``-``; coefficients are integers or fractions, optionally followed by
``*``.  ``0`` is the empty sum.  Products with the unit are implicit.

Without ``truncated``, the window only bounds where data may live and how far
computations reach; the objects themselves are finite (complete data).  With
``truncated = yes`` the algebra and explicit modules are only known through
``hi``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .atlas import cone_example, parse_atlas_spec, random_module
from .complex import INF, Window
from .dgcore import (
    DGAlgebra,
    DGModule,
    algebra_as_module,
    direct_sum,
    dual,
    free_module,
    shift_module,
    trivial_k_module,
)
from .exactfield import Matrix, parse_field

LABEL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.^']*")
_NUM_RE = re.compile(r"\d+(?:/\d+)?")

DEFAULT_HI = 10


class DocumentError(ValueError):
    """A parse or consistency error, positioned at a line and column."""

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass
class Document:
    field: object
    window: Window
    truncated: bool
    algebra: DGAlgebra
    modules: dict = dc_field(default_factory=dict)
    tasks: list = dc_field(default_factory=list)

    def module(self, name: str) -> DGModule:
        if name not in self.modules:
            known = ", ".join(self.modules) or "none"
            raise KeyError(f"no module named {name!r} (known: {known})")
        return self.modules[name]

    def structure_key(self):
        """Hashable summary of all data (used for equality)."""
        return (
            repr(self.field),
            (self.window.lo, self.window.hi),
            self.truncated,
            _algebra_key(self.algebra),
            tuple((n, _module_key(m)) for n, m in self.modules.items()),
            tuple(self.tasks),
        )

    def __eq__(self, other):
        return isinstance(other, Document) and self.structure_key() == other.structure_key()


def _matrix_key(m: Matrix):
    return (m.nrows, m.ncols, tuple(tuple(sorted(r.items())) for r in m.sparse_rows()))


def _algebra_key(A: DGAlgebra):
    prods = []
    pos = A.positive_basis()
    for a in pos:
        for b in pos:
            if a[0] + b[0] in A.window:
                v = A.mul(a, b)
                if v:
                    prods.append((a, b, tuple(sorted(v.items()))))
    d = tuple((j, _matrix_key(m)) for j, m in sorted(A.complex._d.items()) if not m.is_zero())
    labels = tuple((j, tuple(A.labels[j])) for j in sorted(A.labels))
    return (tuple(sorted(A.dims.items())), labels, tuple(prods), d, (A.window.lo, A.window.hi))


def _module_key(M: DGModule):
    d = tuple((j, _matrix_key(m)) for j, m in sorted(M.complex._d.items()) if not m.is_zero())
    act = tuple(sorted((a, j, _matrix_key(m)) for (a, j), m in M.act_items() if not m.is_zero()))
    return (M.side, tuple(sorted(M.dims.items())), d, act, (M.window.lo, M.window.hi))


# ---------------------------------------------------------------------------
# parsing


@dataclass
class _Line:
    no: int
    text: str        # comment-stripped, right-stripped
    indent: int      # column offset of text[0] in the raw line (0-based)


def _strip(raw: str):
    t = raw.split("#", 1)[0].rstrip()
    stripped = t.lstrip()
    return stripped, len(t) - len(stripped)


class _Parser:
    def __init__(self, text: str):
        self.sections = []       # (header, line, [lines])
        cur = None
        for no, raw in enumerate(text.splitlines(), start=1):
            t, ind = _strip(raw)
            if not t:
                continue
            if t.startswith("["):
                if not t.endswith("]"):
                    raise DocumentError(no, ind + 1, "unterminated section header")
                cur = (t[1:-1].strip(), _Line(no, t, ind), [])
                self.sections.append(cur)
                continue
            if cur is None:
                raise DocumentError(no, ind + 1, "data before the first section header")
            cur[2].append(_Line(no, t, ind))

    # -- helpers -----------------------------------------------------------
    @staticmethod
    def err(line: _Line, offset: int, message: str):
        raise DocumentError(line.no, line.indent + offset + 1, message)

    def keyval(self, line: _Line, keys):
        """``key = value`` or ``key value``; returns (key, value, value offset)."""
        m = re.match(r"([A-Za-z_]+)\s*(=\s*|\s+|$)", line.text)
        if not m:
            self.err(line, 0, "expected 'key = value'")
        key = m.group(1)
        if key not in keys:
            self.err(line, 0, f"unknown key {key!r} (expected one of: {', '.join(keys)})")
        return key, line.text[m.end():].strip(), m.end()

    def expression(self, line: _Line, start: int, text: str, resolve, degree, field):
        """Parse a linear combination; ``resolve(label) -> (deg, idx)``."""
        out = {}
        pos = 0
        n = len(text)
        s = text
        if s.strip() == "0":
            return out
        first = True
        while True:
            while pos < n and s[pos] == " ":
                pos += 1
            if pos >= n:
                if first:
                    self.err(line, start + pos, "empty expression")
                break
            sign = 1
            if s[pos] in "+-":
                sign = -1 if s[pos] == "-" else 1
                pos += 1
                while pos < n and s[pos] == " ":
                    pos += 1
            elif not first:
                self.err(line, start + pos, "expected '+' or '-' between terms")
            coef = Fraction(1)
            m = _NUM_RE.match(s, pos)
            if m:
                coef = Fraction(m.group(0))
                pos = m.end()
                while pos < n and s[pos] == " ":
                    pos += 1
                if pos < n and s[pos] == "*":
                    pos += 1
                    while pos < n and s[pos] == " ":
                        pos += 1
            m = LABEL_RE.match(s, pos)
            if not m:
                self.err(line, start + pos, "expected a basis label")
            lab = m.group(0)
            ref = resolve(lab)
            if ref is None:
                self.err(line, start + pos, f"undefined basis label {lab!r}")
            if ref[0] != degree:
                self.err(line, start + pos, f"term {lab!r} has degree {ref[0]}, expected {degree}")
            try:
                c = field(sign * coef)
            except ZeroDivisionError as e:
                self.err(line, start + pos, str(e))
            v = field(out.get(ref[1], 0) + c)
            if v:
                out[ref[1]] = v
            else:
                out.pop(ref[1], None)
            pos = m.end()
            first = False
        return out

    def basis_line(self, line: _Line, labels_out: dict, used: set, window: Window, allow_unit=False):
        m = re.match(r"basis\s+(-?\d+)\s*:\s*(.*)$", line.text)
        if not m:
            self.err(line, 0, "expected 'basis <degree>: label label ...'")
        deg = int(m.group(1))
        if deg not in window:
            self.err(line, m.start(1), f"degree {deg} lies outside the declared window {window}")
        if deg in labels_out:
            self.err(line, m.start(1), f"degree {deg} declared twice")
        body = m.group(2)
        labs = []
        for tm in re.finditer(r"[^\s,]+", body):
            lab = tm.group(0)
            col = m.start(2) + tm.start()
            if not (LABEL_RE.fullmatch(lab) or (allow_unit and deg == 0 and lab == "1")):
                self.err(line, col, f"invalid label {lab!r}")
            if lab in used:
                self.err(line, col, f"label {lab!r} defined twice")
            used.add(lab)
            labs.append(lab)
        if not labs:
            self.err(line, m.start(2), "no labels given")
        labels_out[deg] = labs
        return deg


def parse_document(text: str) -> Document:
    """Parse a document; raises :class:`DocumentError` on any problem."""
    ps = _Parser(text)
    by_name = {}
    for header, hline, lines in ps.sections:
        kind = header.split()[0] if header else ""
        if kind not in ("field", "window", "algebra", "module", "tasks"):
            ps.err(hline, 1, f"unknown section [{header}]")
        if kind == "module":
            parts = header.split()
            if len(parts) != 2 or not LABEL_RE.fullmatch(parts[1]):
                ps.err(hline, 1, "module sections are written [module NAME]")
        elif kind in by_name:
            ps.err(hline, 1, f"section [{kind}] appears twice")
        by_name.setdefault(kind, (hline, lines))

    # field
    if "field" not in by_name:
        raise DocumentError(1, 1, "missing field spec: add a [field] section")
    fl, flines = by_name["field"]
    if len(flines) != 1:
        raise DocumentError(fl.no, 1, "the [field] section holds exactly one line (QQ or GF(p))")
    try:
        F = parse_field(flines[0].text)
    except ValueError as e:
        ps.err(flines[0], 0, str(e))

    # window
    lo = hi = None
    truncated = False
    if "window" in by_name:
        for line in by_name["window"][1]:
            key, val, off = ps.keyval(line, ("lo", "hi", "truncated"))
            if key == "truncated":
                if val.lower() not in ("yes", "no", "true", "false"):
                    ps.err(line, off, "truncated must be yes or no")
                truncated = val.lower() in ("yes", "true")
            else:
                if not re.fullmatch(r"-?\d+", val):
                    ps.err(line, off, f"{key} must be an integer")
                if key == "lo":
                    lo = int(val)
                else:
                    hi = int(val)
    if lo is not None and hi is not None and lo > hi:
        raise DocumentError(by_name["window"][0].no, 1, f"empty window [{lo}, {hi}]")
    declared = Window(lo if lo is not None else -INF, hi if hi is not None else INF)

    # algebra
    if "algebra" not in by_name:
        raise DocumentError(fl.no, 1, "missing [algebra] section")
    A = _parse_algebra(ps, by_name["algebra"], F, declared, truncated)

    hi_eff = hi if hi is not None else max(DEFAULT_HI, A.top_degree if A.top_degree != -INF else 0)
    modules = {}
    for header, hline, lines in ps.sections:
        if header.split()[0] != "module":
            continue
        name = header.split()[1]
        if name in modules:
            ps.err(hline, 1, f"module {name!r} defined twice")
        modules[name] = _parse_module(ps, name, hline, lines, A, declared, truncated, modules)
    lo_eff = lo
    if lo_eff is None:
        degs = [0] + [j for M in modules.values() for j in M.dims]
        lo_eff = min(degs)
    tasks = [line.text for line in by_name.get("tasks", (None, []))[1]]
    return Document(F, Window(lo_eff, hi_eff), truncated, A, modules, tasks)


def _parse_algebra(ps, section, F, declared, truncated):
    hline, lines = section
    labels = {}
    used = set()
    atlas = None
    name = "A"
    rest = []
    for line in lines:
        if line.text.startswith("basis"):
            ps.basis_line(line, labels, used, declared, allow_unit=True)
        elif re.match(r"(name|atlas)\b", line.text):
            key, val, off = ps.keyval(line, ("name", "atlas"))
            if key == "name":
                name = val
            else:
                try:
                    atlas = parse_atlas_spec(val, F)
                except ValueError as e:
                    ps.err(line, off, str(e))
        else:
            rest.append(line)
    awin = Window(-INF, declared.hi) if truncated else Window.complete()
    if atlas is not None:
        if labels or rest:
            ps.err(hline, 1, "an atlas algebra takes no further data")
        try:
            A = atlas.build()
        except ValueError as e:
            ps.err(hline, 1, str(e))
        if truncated or any(j not in declared for j in A.dims):
            if not truncated:
                ps.err(hline, 1, f"atlas algebra {atlas} has data outside the window {declared}")
            A = _restrict_algebra(A, awin)
        if name != "A":
            A.name = name
        return A
    if 0 not in labels:
        if 0 not in declared:
            ps.err(hline, 1, "the window must contain degree 0")
        labels[0] = ["1"]
        used.add("1")
    if len(labels[0]) != 1:
        ps.err(hline, 1, "an algebra has a one-dimensional degree 0 (the unit)")
    if any(j < 0 or j == 1 for j in labels):
        bad = min(j for j in labels if j < 0 or j == 1)
        ps.err(hline, 1, f"degree {bad} must be zero in a simply connected algebra")
    index = {lab: (j, i) for j, labs in labels.items() for i, lab in enumerate(labs)}
    dims = {j: len(v) for j, v in labels.items()}
    prods = {}
    dcols = {}
    for line in rest:
        m = re.match(r"d\s+(\S+)\s*=\s*", line.text)
        if m:
            lab = m.group(1)
            if lab not in index:
                ps.err(line, m.start(1), f"undefined basis label {lab!r}")
            a = index[lab]
            if a[0] + 1 not in awin:
                ps.err(line, 0, f"d {lab} lands in degree {a[0] + 1} outside the window")
            if (a[0], a[1]) in dcols:
                ps.err(line, 0, f"d {lab} given twice")
            dcols[a] = ps.expression(line, m.end(), line.text[m.end():], index.get, a[0] + 1, F)
            continue
        m = re.match(r"(\S+)\s*\*\s*(\S+)\s*=\s*", line.text)
        if m:
            la, lb = m.group(1), m.group(2)
            for lab, st in ((la, m.start(1)), (lb, m.start(2))):
                if lab not in index:
                    ps.err(line, st, f"undefined basis label {lab!r}")
                if index[lab] == (0, 0):
                    ps.err(line, st, "products with the unit are implicit")
            a, b = index[la], index[lb]
            deg = a[0] + b[0]
            if deg not in declared or deg not in awin:
                ps.err(line, 0, f"product {la} * {lb} lands in degree {deg} outside the window {declared}")
            if (a, b) in prods:
                ps.err(line, 0, f"product {la} * {lb} given twice")
            prods[(a, b)] = ps.expression(line, m.end(), line.text[m.end():], index.get, deg, F)
            continue
        ps.err(line, 0, "expected 'basis', 'd x = ...' or 'x * y = ...'")
    d = _assemble_d(F, dims, dcols, awin)
    return DGAlgebra(F, dims, prods, d, labels=labels, window=awin, name=name)


def _restrict_algebra(A, window):
    dims = {j: n for j, n in A.dims.items() if j in window}
    prods = {}
    for a in A.positive_basis():
        for b in A.positive_basis():
            if a[0] in window and b[0] in window and a[0] + b[0] in window:
                prods[(a, b)] = A.mul(a, b)
    d = {j: m for j, m in A.complex._d.items() if j in window and j + 1 in window}
    labels = {j: A.labels[j] for j in dims}
    return DGAlgebra(A.field, dims, prods, d, labels=labels, window=window, name=A.name)


def _assemble_d(F, dims, dcols, window):
    d = {}
    for j in sorted(dims):
        if j + 1 not in window:
            continue
        cols = [dcols.get((j, i), {}) for i in range(dims[j])]
        if any(cols):
            m = Matrix.from_columns(F, dims.get(j + 1, 0), cols)
            d[j] = Matrix(F, m.nrows, dims[j], m.sparse_rows())
    return d


def _parse_module(ps, name, hline, lines, A, declared, truncated, modules):
    F = A.field
    side = "left"
    construct = None
    labels = {}
    used = set()
    rest = []
    for line in lines:
        if line.text.startswith("basis"):
            ps.basis_line(line, labels, used, declared)
        elif re.match(r"(side|construct)\b", line.text):
            key, val, off = ps.keyval(line, ("side", "construct"))
            if key == "side":
                if val not in ("left", "right"):
                    ps.err(line, off, "side must be left or right")
                side = val
            else:
                construct = (line, val, off)
        else:
            rest.append(line)
    if construct is not None:
        if labels or rest:
            ps.err(hline, 1, "a constructed module takes no basis/d/act lines")
        M = _construct(ps, construct, side, A, modules)
        M.name = name
        for j in M.dims:
            if j not in declared:
                ps.err(construct[0], 0, f"module {name} has data in degree {j} outside the window {declared}")
        return M
    mwin = Window(-INF, declared.hi) if truncated else Window.complete()
    index = {lab: (j, i) for j, labs in labels.items() for i, lab in enumerate(labs)}
    aindex = {A.label(b): b for b in A.all_basis()}
    dims = {j: len(v) for j, v in labels.items()}
    dcols = {}
    acts = {}
    for line in rest:
        m = re.match(r"d\s+(\S+)\s*=\s*", line.text)
        if m:
            lab = m.group(1)
            if lab not in index:
                ps.err(line, m.start(1), f"undefined basis label {lab!r}")
            x = index[lab]
            if x[0] + 1 not in mwin:
                ps.err(line, 0, f"d {lab} lands outside the window")
            if x in dcols:
                ps.err(line, 0, f"d {lab} given twice")
            dcols[x] = ps.expression(line, m.end(), line.text[m.end():], index.get, x[0] + 1, F)
            continue
        m = re.match(r"act\s+(\S+)\s+(\S+)\s*=\s*", line.text)
        if m:
            la, lm = m.group(1), m.group(2)
            if la not in aindex:
                ps.err(line, m.start(1), f"undefined algebra label {la!r}")
            if lm not in index:
                ps.err(line, m.start(2), f"undefined basis label {lm!r}")
            a, x = aindex[la], index[lm]
            if a == (0, 0):
                ps.err(line, m.start(1), "the unit acts as the identity implicitly")
            deg = a[0] + x[0]
            if deg not in declared or deg not in mwin:
                ps.err(line, 0, f"act {la} {lm} lands in degree {deg} outside the window {declared}")
            if (a, x) in acts:
                ps.err(line, 0, f"act {la} {lm} given twice")
            acts[(a, x)] = ps.expression(line, m.end(), line.text[m.end():], index.get, deg, F)
            continue
        ps.err(line, 0, "expected 'side', 'basis', 'd m = ...', 'act a m = ...' or 'construct = ...'")
    d = _assemble_d(F, dims, dcols, mwin)
    act = {}
    for a in A.positive_basis():
        for j in sorted(dims):
            cols = [acts.get((a, (j, i)), {}) for i in range(dims[j])]
            if any(cols):
                mm = Matrix.from_columns(F, dims.get(j + a[0], 0), cols)
                act[(a, j)] = Matrix(F, mm.nrows, dims[j], mm.sparse_rows())
    return DGModule(A, side, dims, d, act, mwin, labels=labels, name=name)


def _construct(ps, construct, side, A, modules):
    line, val, off = construct
    parts = val.split()
    if not parts:
        ps.err(line, off, "empty construction")
    kind, args = parts[0], parts[1:]

    def ref(name, k):
        if name not in modules:
            ps.err(line, off + val.find(name, len(kind)), f"unknown module {name!r} (define it earlier)")
        return modules[name]

    try:
        if kind == "regular" and not args:
            return algebra_as_module(A, side=side)
        if kind == "trivial" and not args:
            return trivial_k_module(A, side=side)
        if kind == "free" and args:
            gens = []
            for g in " ".join(args).replace(",", " ").split():
                m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*):(-?\d+)", g)
                if not m:
                    ps.err(line, off + val.find(g), f"generator {g!r} should look like e:3")
                gens.append((m.group(1), int(m.group(2))))
            return free_module(A, gens, side=side)
        if kind == "shift" and len(args) == 2 and re.fullmatch(r"-?\d+", args[1]):
            return shift_module(ref(args[0], 1), int(args[1]))
        if kind == "sum" and args:
            return direct_sum(*[ref(a, i) for i, a in enumerate(args)])
        if kind == "dual" and len(args) == 1:
            return dual(ref(args[0], 1))
        if kind == "cone-top" and not args:
            return cone_example(A)
        if kind == "random" and len(args) == 1 and args[0].isdigit():
            return random_module(A, int(args[0]))
    except DocumentError:
        raise
    except ValueError as e:
        ps.err(line, off, str(e))
    ps.err(line, off, f"cannot read construction {val!r} (regular, trivial, free e:g ..., shift NAME s, "
                      "sum NAME ..., dual NAME, cone-top, random SEED)")


# ---------------------------------------------------------------------------
# serialization


def _fmt_coef(F, c):
    if F.characteristic:
        return str(int(c))
    return str(c)


def format_expression(F, vec: dict, labels: list) -> str:
    if not vec:
        return "0"
    out = []
    for i in sorted(vec):
        c = vec[i]
        neg = False
        if not F.characteristic and c < 0:
            neg, c = True, -c
        cs = _fmt_coef(F, c)
        term = labels[i] if cs == "1" else f"{cs} {labels[i]}"
        if not out:
            out.append(("-" if neg else "") + term)
        else:
            out.append(("- " if neg else "+ ") + term)
    return " ".join(out)


def _module_labels(M: DGModule, avoid=()):
    """Serializable, unique labels for the basis of M."""
    used = set()
    out = {}
    ok = True
    for j in sorted(M.dims):
        for i in range(M.dims[j]):
            lab = M.label(j, i)
            if not LABEL_RE.fullmatch(lab) or lab in used:
                ok = False
            used.add(lab)
    for j in sorted(M.dims):
        if ok:
            out[j] = [M.label(j, i) for i in range(M.dims[j])]
        else:
            tag = f"n{-j}" if j < 0 else str(j)
            out[j] = [f"v{tag}_{i}" for i in range(M.dims[j])]
    return out


def _window_lines(doc: Document):
    lines = ["[window]"]
    if doc.window.lo != -INF:
        lines.append(f"lo = {int(doc.window.lo)}")
    if doc.window.hi != INF:
        lines.append(f"hi = {int(doc.window.hi)}")
    if doc.truncated:
        lines.append("truncated = yes")
    return lines


def serialize_algebra(A: DGAlgebra) -> list:
    F = A.field
    lines = ["[algebra]"]
    if A.name != "A":
        lines.append(f"name = {A.name}")
    for j in sorted(A.dims):
        lines.append(f"basis {j}: {' '.join(A.labels[j])}")
    for j in sorted(A.complex._d):
        m = A.complex._d[j]
        if m.is_zero():
            continue
        for i, col in enumerate(m.sparse_columns()):
            if col:
                lines.append(f"d {A.labels[j][i]} = {format_expression(F, col, A.labels[j + 1])}")
    pos = A.positive_basis()
    for a in pos:
        for b in pos:
            if a[0] + b[0] in A.window:
                v = A.mul(a, b)
                if v:
                    lines.append(f"{A.label(a)} * {A.label(b)} = {format_expression(F, v, A.labels[a[0] + b[0]])}")
    return lines


def serialize_module(M: DGModule, name: str = None) -> list:
    F = M.field
    A = M.algebra
    name = name or M.name
    labels = _module_labels(M)
    lines = [f"[module {name}]", f"side {M.side}"]
    for j in sorted(M.dims):
        lines.append(f"basis {j}: {' '.join(labels[j])}")
    for j in sorted(M.complex._d):
        m = M.complex._d[j]
        if m.is_zero():
            continue
        for i, col in enumerate(m.sparse_columns()):
            if col:
                lines.append(f"d {labels[j][i]} = {format_expression(F, col, labels[j + 1])}")
    for (a, j), m in sorted(M.act_items()):
        if a == (0, 0) or m.is_zero():
            continue
        for i, col in enumerate(m.sparse_columns()):
            if col:
                lines.append(f"act {A.label(a)} {labels[j][i]} = {format_expression(F, col, labels[j + a[0]])}")
    return lines


def serialize_document(doc: Document) -> str:
    """Explicit text form; ``parse_document(serialize_document(d)) == d``."""
    lines = ["[field]", repr(doc.field), ""]
    lines += _window_lines(doc) + [""]
    lines += serialize_algebra(doc.algebra) + [""]
    for name, M in doc.modules.items():
        lines += serialize_module(M, name) + [""]
    if doc.tasks:
        lines += ["[tasks]"] + list(doc.tasks) + [""]
    return "\n".join(lines)


def replay_document(A: DGAlgebra, modules: dict, tasks=(), window: Window = None) -> str:
    """A self-contained document reproducing a computation."""
    degs = [j for M in modules.values() for j in M.dims] + list(A.dims)
    if window is None:
        window = Window(min(degs + [0]), max(degs + [DEFAULT_HI]))
    truncated = not A.window.is_complete
    doc = Document(A.field, window, truncated, A, dict(modules), list(tasks))
    return serialize_document(doc)
