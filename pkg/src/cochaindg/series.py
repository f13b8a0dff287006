"""Windowed formal series f(t) = Σ f_l t^l with non-negative integer
coefficients, and the termwise inequality calculus built on them.

A :class:`WindowSeries` knows its coefficients exactly on its window and
nothing outside.  With F = H^0(P ⊗^L -), the series of a module M is
f_M(t) = Σ dim H^l(P ⊗^L M) t^l and f_R(t) = Σ dim H^l(P) t^l.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .complex import INF, GradedSpace, Window, fmt_bound, inf_sup_amp
from .derived import derived_tensor_cohomology
from .reports import COUNTEREXAMPLE, INCONCLUSIVE, VERIFIED, TheoremReport
from .tower import build_tower


class WindowSeries:
    def __init__(self, coeffs: dict, window: Window = None):
        self.window = window if window is not None else Window.complete()
        clean = {}
        for l, c in coeffs.items():
            if c < 0:
                raise ValueError(f"negative coefficient at t^{l}")
            if c and l in self.window:
                clean[int(l)] = int(c)
            elif c:
                raise ValueError(f"coefficient at t^{l} lies outside window {self.window}")
        self.coeffs = clean

    @classmethod
    def from_space(cls, H: GradedSpace) -> "WindowSeries":
        return cls(H.dims, H.window)

    @classmethod
    def zero(cls) -> "WindowSeries":
        return cls({}, Window.complete())

    @classmethod
    def polynomial(cls, coeffs: dict) -> "WindowSeries":
        return cls(coeffs, Window.complete())

    def __getitem__(self, l):
        if l not in self.window:
            raise KeyError(f"coefficient of t^{l} is unknown (window {self.window})")
        return self.coeffs.get(l, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "WindowSeries") -> "WindowSeries":
        w = self.window.intersect(other.window)
        keys = set(self.coeffs) | set(other.coeffs)
        return WindowSeries({l: self.coeffs.get(l, 0) + other.coeffs.get(l, 0) for l in keys if l in w}, w)

    def scale(self, c: int) -> "WindowSeries":
        if c < 0:
            raise ValueError("series only carry non-negative coefficients")
        if c == 0:
            return WindowSeries({}, self.window)
        return WindowSeries({l: c * v for l, v in self.coeffs.items()}, self.window)

    def __rmul__(self, c):
        return self.scale(c)

    def shift(self, s: int) -> "WindowSeries":
        """Multiply by t^s."""
        return WindowSeries({l + s: v for l, v in self.coeffs.items()}, self.window.shift(-s))

    def times_polynomial(self, poly: dict) -> "WindowSeries":
        """(Σ b_i t^i) · self, trusted exactly where every contributing
        coefficient of self is trusted."""
        poly = {i: b for i, b in poly.items() if b}
        if not poly:
            return WindowSeries({}, Window.complete())
        lo_i, hi_i = min(poly), max(poly)
        w = Window.make(self.window.lo + hi_i, self.window.hi + lo_i)
        out = {}
        for i, b in poly.items():
            for l, v in self.coeffs.items():
                if l + i in w:
                    out[l + i] = out.get(l + i, 0) + b * v
        return WindowSeries(out, w)

    def restrict(self, window: Window) -> "WindowSeries":
        w = self.window.intersect(window)
        return WindowSeries({l: v for l, v in self.coeffs.items() if l in w}, w)

    def __eq__(self, other):
        return isinstance(other, WindowSeries) and self.window == other.window and self.coeffs == other.coeffs

    def render(self) -> str:
        """Canonical text ``c·t^d + ...`` in ascending degree (``0`` if empty)."""
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}·t^{d}" for d, c in sorted(self.coeffs.items()))

    def __str__(self):
        return f"{self.render()} on {self.window}"

    __repr__ = __str__


@dataclass(frozen=True)
class LeqVerdict:
    holds: bool | None          # None: no common window
    first_violation: int | None
    window: Window

    def __bool__(self):
        return bool(self.holds)


def termwise_leq(a: WindowSeries, b: WindowSeries) -> LeqVerdict:
    """a ≼ b on the common window."""
    w = a.window.intersect(b.window)
    if w.empty:
        return LeqVerdict(None, None, w)
    for l in sorted(set(a.coeffs) | set(b.coeffs)):
        if l in w and a.coeffs.get(l, 0) > b.coeffs.get(l, 0):
            return LeqVerdict(False, l, w)
    return LeqVerdict(True, None, w)


@dataclass(frozen=True)
class SeriesDegree:
    value: float
    certainty: str   # "exact" or "at-least"

    def __str__(self):
        s = fmt_bound(self.value)
        return s if self.certainty == "exact" else f"at-least {s}"


def series_degree(a: WindowSeries, certified: bool = False) -> SeriesDegree:
    """sup{l : a_l != 0}; exact when nothing above the window can be
    nonzero (window open above, or a certificate says so)."""
    deg = max(a.coeffs, default=-INF)
    if certified or a.window.hi == INF:
        return SeriesDegree(deg, "exact")
    return SeriesDegree(max(deg, a.window.hi) if deg == -INF else deg, "at-least")


# ---------------------------------------------------------------------------
# series of modules


def f_R_series(P) -> WindowSeries:
    """Σ dim H^l(P) t^l."""
    return WindowSeries.from_space(P.cohomology().H)


def f_series(P, M, top: int, pcd_M=None) -> WindowSeries:
    """Σ_l dim H^l(P ⊗^L M) t^l on the sound window.

    With an exact ``pcd_M`` (compactness certificate) and P of finite
    complete data, every coefficient above sup H(P) + pcd M vanishes, so
    the series becomes complete.
    """
    bound = None
    if pcd_M is not None and P.is_complete:
        if pcd_M == -INF:
            return WindowSeries.zero()
        sP = inf_sup_amp(P.cohomology().H).sup
        if sP == -INF:
            return WindowSeries.zero()
        bound = int(sP + pcd_M)
        top = max(top, bound)
    H = derived_tensor_cohomology(P, M, top)
    s = WindowSeries.from_space(H)
    if bound is not None and H.window.hi >= bound:
        s = WindowSeries(s.coeffs, Window(-INF, INF))
    return s


def betti_polynomial(tower, lo=None, hi=None) -> dict:
    return {l: b for l, b in tower.betti.items() if (lo is None or l >= lo) and (hi is None or l <= hi)}


def _leq_trace(name, v: LeqVerdict, trace):
    trace[f"{name}.holds"] = "n/a" if v.holds is None else v.holds
    trace[f"{name}.window"] = str(v.window)
    if v.first_violation is not None:
        trace[f"{name}.first_violation"] = v.first_violation


def _status_from(verdicts):
    if any(v.holds is False for v in verdicts):
        return COUNTEREXAMPLE
    if any(v.holds is None for v in verdicts):
        return INCONCLUSIVE
    return VERIFIED


def check_tower_inequalities(M, P, u: int, top: int = None) -> TheoremReport:
    """Both tower inequalities

        f_M ≼ (β^i t^i + ... + β^u t^u) f_R + f_{M<u+1>}
        f_{M<u+1>} ≼ f_M + t^{-1}(β^i t^i + ... + β^u t^u) f_R

    on the common sound window."""
    tower = build_tower(M, u)
    trace = {}
    if tower.start is None and not tower.terminated:
        return TheoremReport("tower-inequalities", f"M={M.name}, P={P.name}, u={u}", INCONCLUSIVE,
                             trace, note=tower.limitation)
    if tower.start is None:
        return TheoremReport("tower-inequalities", f"M={M.name}, P={P.name}, u={u}", VERIFIED,
                             {"M.zero": True}, note="M has zero cohomology")
    if top is None:
        top = u + 2
    fR = f_R_series(P)
    fM = f_series(P, M, top)
    last = tower.last_module()
    fMu = f_series(P, last, top)
    poly = betti_polynomial(tower, hi=u)
    rhs1 = fR.times_polynomial(poly) + fMu
    v1 = termwise_leq(fM, rhs1)
    rhs2 = fM + fR.times_polynomial(poly).shift(-1)
    v2 = termwise_leq(fMu, rhs2)
    trace["betti"] = poly
    trace["f_R"] = fR.render()
    trace["f_M"] = fM.render()
    trace["f_M<u+1>"] = fMu.render()
    _leq_trace("i", v1, trace)
    _leq_trace("ii", v2, trace)
    return TheoremReport("tower-inequalities", f"M={M.name}, P={P.name}, u={u}", _status_from([v1, v2]), trace)


def _certified(M, u):
    tower = build_tower(M, u)
    if not tower.terminated:
        return None, tower
    return tower, tower


def check_compact_inequalities(M, P, u: int = 12) -> TheoremReport:
    """For compact-certified M (inf i, pcd p):

        f_M ≼ (β^i t^i + ... + β^p t^p) f_R
        β^p t^p f_R ≼ f_M + t^{-1}(β^i t^i + ... + β^{p-1} t^{p-1}) f_R
    """
    tower, t = _certified(M, u)
    inputs = f"M={M.name}, P={P.name}"
    if tower is None:
        return TheoremReport("compact-inequalities", inputs, INCONCLUSIVE, {}, note="no compactness certificate")
    p = tower.termination_level
    trace = {"pcd": p}
    if p == -INF:
        return TheoremReport("compact-inequalities", inputs, VERIFIED, trace, note="M ≅ 0")
    betti = tower.betti
    trace["betti"] = betti
    trace["beta_p_nonzero"] = betti.get(p, 0) != 0
    fR = f_R_series(P)
    fM = f_series(P, M, p + 2, pcd_M=p)
    rhs1 = fR.times_polynomial(betti)
    v1 = termwise_leq(fM, rhs1)
    lhs2 = fR.times_polynomial({p: betti[p]})
    rhs2 = fM + fR.times_polynomial({l: b for l, b in betti.items() if l < p}).shift(-1)
    v2 = termwise_leq(lhs2, rhs2)
    trace["f_R"] = fR.render()
    trace["f_M"] = fM.render()
    _leq_trace("i", v1, trace)
    _leq_trace("ii", v2, trace)
    status = _status_from([v1, v2])
    if not trace["beta_p_nonzero"]:
        status = COUNTEREXAMPLE
    return TheoremReport("compact-inequalities", inputs, status, trace)


def check_degree_identity(M, P, u: int = 12) -> TheoremReport:
    """deg f_M = deg f_R + pcd M for compact-certified M and P with finite
    complete data (f_R a Laurent series in t^{-1})."""
    inputs = f"M={M.name}, P={P.name}"
    if not P.is_complete:
        return TheoremReport("degree-identity", inputs, INCONCLUSIVE, {}, note="P has no exact sup")
    tower, _ = _certified(M, u)
    if tower is None:
        return TheoremReport("degree-identity", inputs, INCONCLUSIVE, {}, note="no compactness certificate")
    p = tower.termination_level
    fR = f_R_series(P)
    degR = series_degree(fR)
    fM = f_series(P, M, (p if p != -INF else 0) + 2, pcd_M=p)
    degM = series_degree(fM)
    expected = degR.value + p if degR.value != -INF and p != -INF else -INF
    trace = {"deg_f_M": degM.value, "deg_f_R": degR.value, "pcd": p, "deg_f_R+pcd": expected}
    if degM.certainty != "exact":
        return TheoremReport("degree-identity", inputs, INCONCLUSIVE, trace, note="deg f_M not certified")
    status = VERIFIED if degM.value == expected else COUNTEREXAMPLE
    return TheoremReport("degree-identity", inputs, status, trace)
