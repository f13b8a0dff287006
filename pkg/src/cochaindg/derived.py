"""Derived tensor products through the normalized two-sided bar construction.

B(P, A, M) has basis words ``p[a_1|...|a_m]m`` with p a basis vector of the
right module P, a_i basis vectors of Ā = A^{>=2} and m a basis vector of
the left module M; the word sits in degree ``|p| + Σ(|a_i| - 1) + |m|``.
Writing ε_i = |p| + Σ_{k<=i}(|a_k| - 1), the differential is

    d = dp[..]m - Σ_i (-1)^{ε_{i-1}} p[..|da_i|..]m + (-1)^{ε_m} p[..]dm
        + (-1)^{|p|} pa_1[a_2|..]m + Σ_i (-1)^{ε_i} p[..|a_i a_{i+1}|..]m
        - (-1)^{ε_{m-1}} p[a_1|..|a_{m-1}]a_m m

and d∘d = 0 is checked on every complex that is built.

Sound window: with P, M complete below and lowest nonzero degrees
minP, minM, every word of degree j only involves data of degree at most
``hi(P) + minM``, ``hi(M) + minP`` and ``hi(A) + minP + minM - 1``; the
complex is therefore trusted up to J = min of those three, and its
cohomology through J - 1.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .complex import INF, CochainComplex, Extent, GradedSpace, Window, cohomology_dims, inf_sup_amp
from .dgcore import AlgebraMismatchError, DGModule, dual, trivial_k_module
from .exactfield import Matrix


class UnboundedInputError(ValueError):
    """The inputs are not known to be bounded below (resp. above)."""


def sound_top(P: DGModule, M: DGModule):
    """The degree J through which B(P, A, M) is trusted (may be +inf)."""
    A = P.algebra
    minP = min(P.dims)
    minM = min(M.dims)
    return min(P.window.hi + minM, M.window.hi + minP, A.window.hi + minP + minM - 1)


@lru_cache(maxsize=None)
def _compositions(total: int, letter_degs: tuple) -> tuple:
    """Tuples (e_1..e_m) of letter degrees with Σ(e_i - 1) = total."""
    if total == 0:
        return ((),)
    out = []
    for e in letter_degs:
        if e - 1 <= total:
            for rest in _compositions(total - (e - 1), letter_degs):
                out.append((e,) + rest)
    return tuple(out)


def _words_in_degree(P, A, M, t, letter_degs):
    """All bar words of total degree t, in a deterministic order."""
    out = []
    for pd in sorted(P.dims):
        for md in sorted(M.dims):
            L = t - pd - md
            if L < 0:
                continue
            for comp in _compositions(L, letter_degs):
                # expand basis choices
                choices = [()]
                for e in comp:
                    choices = [c + ((e, i),) for c in choices for i in range(A.dims[e])]
                for pi in range(P.dims[pd]):
                    for letters in choices:
                        for mi in range(M.dims[md]):
                            out.append(((pd, pi), letters, (md, mi)))
    return out


class BarComplex:
    """The normalized bar complex B(P, A, M) on degrees up to ``hi``.

    ``complex`` is the underlying cochain complex (window (-inf, hi]);
    ``words[t]`` lists the basis words of degree t.
    """

    def __init__(self, P: DGModule, M: DGModule, top: int, check: bool = True):
        if P.algebra is not M.algebra:
            raise AlgebraMismatchError("bar complex of modules over different algebras")
        if P.side != "right" or M.side != "left":
            raise ValueError("bar complex needs a right module P and a left module M")
        if P.window.lo != -INF or M.window.lo != -INF:
            raise UnboundedInputError("bar construction needs modules whose data is complete below")
        A = P.algebra
        self.P, self.A, self.M = P, A, M
        f = A.field
        self.field = f
        if not P.dims or not M.dims:
            self.J = INF
            self.hi = top + 1
            self.words = {}
            self.complex = CochainComplex(f, {}, {}, Window(-INF, self.hi))
            self.filtration_ok = True
            return
        self.J = sound_top(P, M)
        self.hi = int(min(self.J, top + 1))
        lo = min(P.dims) + min(M.dims)
        self.lo = lo
        letter_degs = tuple(e for e in sorted(A.dims) if e >= 2)
        self.words = {}
        index = {}
        for t in range(lo, self.hi + 1):
            ws = _words_in_degree(P, A, M, t, letter_degs)
            if ws:
                self.words[t] = ws
                index[t] = {w: i for i, w in enumerate(ws)}
        dims = {t: len(ws) for t, ws in self.words.items()}
        d = {}
        p = f.characteristic
        for t in range(lo, self.hi):
            ws = self.words.get(t)
            if not ws or t + 1 not in index:
                continue
            idx = index[t + 1]
            cols = []
            for w in ws:
                img = self._d_word(w)
                col = {}
                for key, c in img.items():
                    if c:
                        col[idx[key]] = c
                cols.append(col)
            m = Matrix.from_columns(f, dims[t + 1], cols)
            d[t] = Matrix(f, m.nrows, len(ws), m.sparse_rows())
        self.complex = CochainComplex(f, dims, d, Window(-INF, self.hi), check=check)

    def _d_word(self, w) -> dict:
        P, A, M = self.P, self.A, self.M
        p_ = self.field.characteristic
        (pd, pi), letters, (md, mi) = w
        out = {}

        def add(key, c):
            v = out.get(key, 0) + c
            if p_:
                v %= p_
            if v:
                out[key] = v
            else:
                out.pop(key, None)

        m = len(letters)
        eps = [pd]
        for (e, _) in letters:
            eps.append(eps[-1] + e - 1)
        # dp
        if P.dims.get(pd + 1):
            for k, c in P.d_columns(pd)[pi].items():
                add(((pd + 1, k), letters, (md, mi)), c)
        # d of letters
        for i, a in enumerate(letters):
            sign = 1 if eps[i] % 2 else -1  # -(-1)^{ε_{i-1}}
            if A.dims.get(a[0] + 1):
                for k, c in A.d_elem(a).items():
                    nl = letters[:i] + ((a[0] + 1, k),) + letters[i + 1:]
                    add(((pd, pi), nl, (md, mi)), sign * c)
        # dm
        if M.dims.get(md + 1):
            sign = -1 if eps[m] % 2 else 1
            for k, c in M.d_columns(md)[mi].items():
                add(((pd, pi), letters, (md + 1, k)), sign * c)
        if m == 0:
            return out
        # p a_1
        a = letters[0]
        sign = -1 if pd % 2 else 1
        if P.dims.get(pd + a[0]):
            for k, c in P.action_columns(a, pd)[pi].items():
                add(((pd + a[0], k), letters[1:], (md, mi)), sign * c)
        # adjacent products
        for i in range(m - 1):
            a, b = letters[i], letters[i + 1]
            sign = -1 if eps[i + 1] % 2 else 1
            for k, c in A.mul(a, b).items():
                nl = letters[:i] + ((a[0] + b[0], k),) + letters[i + 2:]
                add(((pd, pi), nl, (md, mi)), sign * c)
        # a_m m
        a = letters[-1]
        sign = 1 if eps[m - 1] % 2 else -1
        if M.dims.get(md + a[0]):
            for k, c in M.action_columns(a, md)[mi].items():
                add(((pd, pi), letters[:-1], (md + a[0], k)), sign * c)
        return out

    @property
    def trusted_top(self):
        """Highest degree of trusted cohomology."""
        return self.hi - 1

    def cohomology(self):
        """Full cohomology with representatives."""
        return self.complex.cohomology()

    def cohomology_dims(self) -> GradedSpace:
        return cohomology_dims(self.complex)

    def word_length_bound_ok(self) -> bool:
        """Every word with m letters has degree >= minP + minM + m."""
        if not self.words:
            return True
        base = min(self.P.dims) + min(self.M.dims)
        return all(t >= base + len(w[1]) for t, ws in self.words.items() for w in ws)


def bar_complex(P: DGModule, A, M: DGModule, top: int, check: bool = True) -> BarComplex:
    if P.algebra is not A or M.algebra is not A:
        raise AlgebraMismatchError("modules are not over the given algebra")
    return BarComplex(P, M, top, check=check)


def derived_tensor_cohomology(P: DGModule, M: DGModule, top: int) -> GradedSpace:
    """H^j(P ⊗^L M) for all j up to min(top, J - 1)."""
    B = BarComplex(P, M, top)
    return B.cohomology_dims()


def betti_via_bar(M: DGModule, top: int) -> GradedSpace:
    """β^j(M) = dim H^j(k ⊗^L M), trusted through min(top, J - 1)."""
    k = trivial_k_module(M.algebra, side="right")
    return derived_tensor_cohomology(k, M, top)


def bass_numbers(M: DGModule, bottom: int) -> GradedSpace:
    """μ^j(M) = dim H^{-j}(B(D(M), A, k)) for j >= bottom (within the sound
    window); M must be a left module whose data is complete above."""
    if M.side != "left":
        raise ValueError("Bass numbers are implemented for left modules")
    if M.window.hi != INF:
        raise UnboundedInputError("Bass numbers need a module whose data is complete above")
    D = dual(M)
    k = trivial_k_module(M.algebra, side="left")
    H = derived_tensor_cohomology(D, k, -bottom)
    lo = -H.window.hi
    return GradedSpace({-j: n for j, n in H.dims.items()}, Window.make(lo, INF))


def derived_inf_sup_amp(P: DGModule, M: DGModule, top: int, pcd_M=None) -> Extent:
    """inf / sup / amp of H(P ⊗^L M).

    inf is exact whenever it is found inside the trusted window: nothing
    lives below minP + minM.  sup is exact when ``pcd_M`` (an exact pcd of a
    compact-certified M) is given and P has finite, complete data: then M is
    finitely built from Σ^{-l}R with l <= pcd M, so H^j(P ⊗^L M) = 0 for
    j > sup H(P) + pcd M, and the bar complex is computed past that bound.
    """
    bound = None
    if pcd_M == -INF:
        # a tower terminating with no generators: M ≅ 0
        return Extent(INF, -INF, True, True)
    if pcd_M is not None and not math.isinf(pcd_M) and P.is_complete:
        sP = inf_sup_amp(P.cohomology().H).sup
        if sP == -INF:
            return Extent(INF, -INF, True, True)
        bound = int(sP + pcd_M)
        top = max(top, bound)
    H = derived_tensor_cohomology(P, M, top)
    ext = inf_sup_amp(H)
    sup_exact = bound is not None and H.window.hi >= bound
    inf_exact = bool(H.support) or sup_exact
    if sup_exact and not H.support:
        return Extent(INF, -INF, True, True)
    return Extent(ext.inf, ext.sup, inf_exact, sup_exact)
