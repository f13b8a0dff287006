"""The cycle-killing tower and what it yields: Betti numbers, pcd and
compactness certificates.

Starting from M<i> = M (i = inf M), each step picks cycles z_α in degree l
whose classes form a basis of H^l(M<l>), maps the free module F on
generators e_α of degree l onto them (a e_α -> a z_α) and passes to the
cone M<l+1> = cone(F -> M<l>).  Then β^l(M) = dim H^l(M<l>) and
H^j(M<l+1>) = 0 for j <= l.

Termination: when H(M<p+1>) vanishes on its whole trusted window and that
window extends at least one degree above the requested level, the tower is
marked terminated at p.  For modules with complete data (all modules over
the finite-dimensional atlas algebras) the window is the whole line, so
termination is the exact statement M<p+1> ≅ 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .complex import INF, GradedSpace, OutsideWindowError, Window, cohomology_dims
from .dgcore import DGModule, DGMorphism, cone, free_module, free_morphism


class NothingToKillError(ValueError):
    """The module has no cohomology inside its window."""


class InconclusiveWindowError(ValueError):
    """The computation needs degrees outside the trusted window."""


@dataclass
class TowerStep:
    level: int
    beta: int
    cycles: list          # sparse representatives in M<l>^l
    map: DGMorphism | None
    next: DGModule


@dataclass
class Tower:
    base: DGModule
    start: int | None
    steps: list = dc_field(default_factory=list)
    terminated: bool = False
    termination_level: int | None = None
    top: int | None = None          # highest level actually built
    limitation: str = ""

    @property
    def betti(self) -> dict:
        return {s.level: s.beta for s in self.steps if s.beta}

    def betti_space(self) -> GradedSpace:
        """β as a graded space.  Known on (-inf, top] -- and everywhere when
        the tower terminated."""
        if self.terminated:
            w = Window.complete()
        elif self.top is None:
            w = Window(-INF, INF) if self.start is None else Window(-INF, self.start - 1)
        else:
            w = Window(-INF, self.top)
        return GradedSpace(self.betti, w)

    def last_module(self) -> DGModule:
        return self.steps[-1].next if self.steps else self.base

    def certificate(self):
        """Free pieces Σ^{-l}R^{(β_l)} building the base, when terminated."""
        if not self.terminated:
            return None
        return [(s.level, s.beta) for s in self.steps if s.beta]


def _first_nonzero_degree(M: DGModule, start=None):
    """Lowest j (>= start) with H^j(M) != 0, scanning upward, or None.

    Returns ("unknown", j) if the scan reaches the edge of the trusted
    window without finding anything.
    """
    c = M.complex
    w = c.cohomology_window()
    if w.empty:
        return ("unknown", None)
    sup = M.dims
    if not sup:
        return None if w.is_complete else ("unknown", None)
    lo = min(sup) if start is None else max(min(sup), start)
    hi = max(sup)
    if lo not in w and w.lo > lo:
        return ("unknown", lo)
    for j in range(lo, hi + 1):
        if j not in w:
            return ("unknown", j)
        if M.dims.get(j, 0) == 0:
            continue
        if cohomology_dims(c, (j, j)).dim(j):
            return j
    if w.hi <= hi:
        return ("unknown", hi + 1)
    return None


def module_inf(M: DGModule):
    """(inf M, exact?) of the cohomology of M."""
    r = _first_nonzero_degree(M)
    if r is None:
        return INF, True
    if isinstance(r, tuple):
        return (r[1] if r[1] is not None else INF), False
    return r, True


def kill_at(M: DGModule, level: int) -> TowerStep:
    """One cycle-killing step in degree ``level`` (a left module whose
    cohomology vanishes below ``level``)."""
    if M.side != "left":
        raise ValueError("the tower is built for left modules")
    if level not in M.complex.cohomology_window():
        raise InconclusiveWindowError(f"H^{level} is outside the trusted window {M.complex.cohomology_window()}")
    H = M.cohomology((level, level))
    reps = H.reps_sparse(level)
    beta = len(reps)
    if beta == 0:
        return TowerStep(level, 0, [], None, M)
    A = M.algebra
    F = free_module(A, [(f"e{level}_{a}", level) for a in range(beta)], name=f"F{level}")
    f = free_morphism(F, M, reps)
    nxt = cone(f, name=f"{M.name}<{level + 1}>")
    return TowerStep(level, beta, reps, f, nxt)


def kill_bottom(M: DGModule) -> TowerStep:
    """Kill the lowest cohomology of M."""
    r = _first_nonzero_degree(M)
    if r is None:
        raise NothingToKillError("module has zero cohomology")
    if isinstance(r, tuple):
        raise InconclusiveWindowError("inf M is not visible inside the trusted window")
    return kill_at(M, r)


def build_tower(M: DGModule, u: int, start: int = None) -> Tower:
    """Steps for levels inf M ... u (or until termination).

    ``start`` overrides the first level (useful for restarting a tower at
    M<l>, which has no cohomology below l).
    """
    if M.side != "left":
        raise ValueError("the tower is built for left modules")
    if M.window.lo != -INF:
        raise InconclusiveWindowError("the tower needs a module whose data is complete below")
    i = start
    if i is None:
        r = _first_nonzero_degree(M)
        if r is None:
            return Tower(M, None, [], terminated=True, termination_level=-INF, top=u)
        if isinstance(r, tuple):
            return Tower(M, None, [], limitation="inf M lies outside the trusted window")
        i = r
    tower = Tower(M, i)
    cur = M
    level = i
    while level <= u:
        if level not in cur.complex.cohomology_window():
            tower.limitation = f"window exhausted at level {level}"
            return tower
        step = kill_at(cur, level)
        tower.steps.append(step)
        tower.top = level
        cur = step.next
        nxt = _first_nonzero_degree(cur, level + 1)
        if nxt is None:
            # H(M<level+1>) = 0 on its trusted window; require room above u
            w = cur.complex.cohomology_window()
            if w.hi >= u + 1:
                tower.terminated = True
                tower.termination_level = max((s.level for s in tower.steps if s.beta), default=-INF)
                return tower
        elif isinstance(nxt, tuple):
            pass
        else:
            # levels strictly between have β = 0: record them explicitly
            for skip in range(level + 1, min(nxt, u + 1)):
                tower.steps.append(TowerStep(skip, 0, [], None, cur))
                tower.top = skip
            level = nxt
            continue
        level += 1
    return tower


def betti_numbers(M: DGModule, u: int) -> GradedSpace:
    """β^j(M) for j <= u via the tower; known everywhere once terminated."""
    return build_tower(M, u).betti_space()


@dataclass(frozen=True)
class Pcd:
    value: float
    certainty: str   # "exact" or "at-least"
    note: str = ""

    def __str__(self):
        v = "-inf" if self.value == -INF else str(int(self.value))
        if self.certainty == "exact":
            return v
        return f"at-least {v} (window-limited)"


def pcd(M: DGModule, u: int) -> Pcd:
    """Projective codimension sup{j : β^j(M) != 0}."""
    t = build_tower(M, u)
    if t.terminated:
        return Pcd(t.termination_level, "exact")
    found = max(t.betti, default=-INF)
    lower = max(found, t.top if t.top is not None else -INF)
    return Pcd(lower, "at-least", t.limitation or f"tower not terminated through level {u}")


@dataclass(frozen=True)
class CompactCertificate:
    pieces: tuple     # ((level, beta), ...)
    pcd: int
    inf: int

    def __str__(self):
        return " + ".join(f"S^{-l}R^{b}" for l, b in self.pieces) or "0"


@dataclass(frozen=True)
class NotTerminated:
    u: int
    reason: str

    def __bool__(self):
        return False


def is_compact_within(M: DGModule, u: int):
    """A certificate when the tower terminates by level u, otherwise an
    honest :class:`NotTerminated` (never a proof of non-compactness)."""
    t = build_tower(M, u)
    if t.terminated:
        pieces = tuple(t.certificate())
        if not pieces:
            return CompactCertificate((), -INF, INF)
        return CompactCertificate(pieces, t.termination_level, pieces[0][0])
    return NotTerminated(u, t.limitation or f"no termination through level {u}")
