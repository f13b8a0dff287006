"""Checkable forms of the inf/sup/amplitude identities, the
Auslander–Buchsbaum equalities and the gap theorems.

Each check returns a :class:`~cochaindg.reports.TheoremReport` whose status
is ``verified``, ``counterexample`` or ``inconclusive-window``; identities
about unbounded objects are only asserted on certified data, and window
exhaustion is reported as inconclusive, never as a refutation.
"""

from __future__ import annotations

import math

from .complex import INF, inf_sup_amp
from .derived import bass_numbers, derived_tensor_cohomology, derived_inf_sup_amp
from .dgcore import DGAlgebra, DGModule, algebra_as_module, dual, validate_module
from .exactfield import Matrix
from .reports import COUNTEREXAMPLE, INCONCLUSIVE, VERIFIED, TheoremReport, combine_status
from .tower import build_tower, module_inf


def _ext(M: DGModule):
    return inf_sup_amp(M.cohomology().H)


def _certify(M: DGModule, u: int):
    """Tower of M to level u; returns (pcd or None, tower)."""
    t = build_tower(M, u)
    return (t.termination_level if t.terminated else None), t


def sup_R(A: DGAlgebra):
    """(sup H(A), exact?)."""
    e = inf_sup_amp(A.cohomology().H)
    return e.sup, e.sup_exact


def _report(stmt, inputs, status, trace, note=""):
    return TheoremReport(stmt, inputs, status, trace, note)


# ---------------------------------------------------------------------------
# opposite-side modules


def is_graded_commutative(A: DGAlgebra) -> bool:
    """ab = (-1)^{|a||b|} ba for all basis pairs with product in the window."""
    f = A.field
    pos = A.positive_basis()
    for a in pos:
        for b in pos:
            if a[0] + b[0] not in A.window:
                continue
            ab = A.mul(a, b)
            ba = A.mul(b, a)
            sign = -1 if (a[0] * b[0]) % 2 else 1
            if ab != {k: f(sign * v) for k, v in ba.items() if f(sign * v)}:
                return False
    return True


def opposite_side(M: DGModule) -> DGModule:
    """For graded-commutative A, view a right module as a left module via
    a*m = (-1)^{|a||m|} m a (and conversely)."""
    if not is_graded_commutative(M.algebra):
        raise ValueError("switching sides needs a graded-commutative algebra")
    act = {}
    for (a, j), m in M.act_items():
        act[(a, j)] = -m if (a[0] * j) % 2 else m
    side = "left" if M.side == "right" else "right"
    return DGModule(M.algebra, side, M.dims, dict(M.complex._d), act, M.window,
                    labels=M.labels, name=M.name)


# ---------------------------------------------------------------------------
# identities


def check_inf_additivity(P: DGModule, M: DGModule, slack: int = 2) -> TheoremReport:
    """inf(P ⊗^L M) = inf P + inf M."""
    inputs = f"P={P.name}, M={M.name}"
    iP, eP = module_inf(P)
    iM, eM = module_inf(M)
    trace = {"inf_P": iP, "inf_M": iM}
    if not (eP and eM):
        return _report("inf-additivity", inputs, INCONCLUSIVE, trace, "inf P or inf M not exact")
    if iP == INF or iM == INF:
        # one side is zero: the tensor product is zero too
        H = derived_tensor_cohomology(P, M, 0) if P.dims and M.dims else None
        trace["inf_PM"] = INF
        return _report("inf-additivity", inputs, VERIFIED, trace, "zero factor")
    target = int(iP + iM)
    H = derived_tensor_cohomology(P, M, target + slack)
    trace["expected"] = target
    if target not in H.window:
        return _report("inf-additivity", inputs, INCONCLUSIVE, trace, f"H^{target} outside {H.window}")
    lower = [j for j in H.support if j < target]
    found = H.support[0] if H.support else INF
    trace["inf_PM"] = found
    ok = not lower and H.dim(target) != 0
    return _report("inf-additivity", inputs, VERIFIED if ok else COUNTEREXAMPLE, trace)


def check_sup_formula(P: DGModule, M: DGModule, u: int = 12) -> TheoremReport:
    """sup(P ⊗^L M) = sup P + pcd M for compact-certified M and P with
    finite complete data."""
    inputs = f"P={P.name}, M={M.name}"
    p, _ = _certify(M, u)
    if p is None:
        return _report("sup-formula", inputs, INCONCLUSIVE, {}, "no compactness certificate for M")
    if not P.is_complete:
        return _report("sup-formula", inputs, INCONCLUSIVE, {"pcd_M": p}, "sup P not exact")
    sP = _ext(P).sup
    e = derived_inf_sup_amp(P, M, 0, pcd_M=p)
    trace = {"sup_PM": e.sup, "sup_P": sP, "pcd_M": p, "sup_P+pcd_M": sP + p if sP != -INF and p != -INF else -INF}
    if not e.sup_exact:
        return _report("sup-formula", inputs, INCONCLUSIVE, trace, "sup(P⊗M) not certified")
    ok = e.sup == trace["sup_P+pcd_M"]
    return _report("sup-formula", inputs, VERIFIED if ok else COUNTEREXAMPLE, trace)


def check_amplitude(P: DGModule, M: DGModule, u: int = 12) -> TheoremReport:
    """amp(P ⊗^L M) = amp P + pcd M - inf M and amp(P ⊗^L M) >= amp P."""
    inputs = f"P={P.name}, M={M.name}"
    p, _ = _certify(M, u)
    if p is None:
        return _report("amplitude", inputs, INCONCLUSIVE, {}, "no compactness certificate for M")
    if p == -INF:
        return _report("amplitude", inputs, VERIFIED, {"pcd_M": p}, "M ≅ 0 (statement needs M nonzero)")
    if not P.is_complete or not P.dims:
        return _report("amplitude", inputs, INCONCLUSIVE, {"pcd_M": p}, "amp P not exact or P zero")
    eP = _ext(P)
    iM, _ = module_inf(M)
    e = derived_inf_sup_amp(P, M, 0, pcd_M=p)
    rhs = eP.amp + p - iM
    trace = {"amp_PM": e.amp, "amp_P": eP.amp, "pcd_M": p, "inf_M": iM, "amp_P+pcd_M-inf_M": rhs}
    if e.certainty != "exact":
        return _report("amplitude", inputs, INCONCLUSIVE, trace, "amp(P⊗M) not certified")
    trace["equality"] = e.amp == rhs
    trace["inequality"] = e.amp >= eP.amp
    ok = trace["equality"] and trace["inequality"]
    return _report("amplitude", inputs, VERIFIED if ok else COUNTEREXAMPLE, trace)


def check_ab(M: DGModule, P: DGModule = None, u: int = 12) -> TheoremReport:
    """pcd M = sup M + d with d = pcd P - sup P.

    P defaults to R itself (so d = -sup R).  A right-module P over a
    graded-commutative algebra is certified through its left twin.
    """
    A = M.algebra
    if P is None:
        P = algebra_as_module(A, side="right", name="R")
    inputs = f"M={M.name}, P={P.name}"
    Pl = P if P.side == "left" else opposite_side(P)
    pP, _ = _certify(Pl, u)
    pM, _ = _certify(M, u)
    trace = {}
    if pP is None or pM is None:
        return _report("ab", inputs, INCONCLUSIVE, {"pcd_P": pP if pP is not None else "uncertified",
                                                    "pcd_M": pM if pM is not None else "uncertified"},
                       "missing compactness certificate")
    if not (P.is_complete and M.is_complete):
        return _report("ab", inputs, INCONCLUSIVE, {}, "sup not exact")
    sP = _ext(P).sup
    sM = _ext(M).sup
    if pP == -INF or sP == -INF:
        return _report("ab", inputs, INCONCLUSIVE, {}, "P must be nonzero")
    d = pP - sP
    trace = {"pcd_M": pM, "sup_M": sM, "pcd_P": pP, "sup_P": sP, "d": d,
             "sup_M+d": sM + d if sM != -INF else -INF}
    ok = pM == trace["sup_M+d"]
    return _report("ab", inputs, VERIFIED if ok else COUNTEREXAMPLE, trace)


# ---------------------------------------------------------------------------
# gaps


def find_gaps(seq: dict, g: int, window=None) -> list:
    """Every j with seq(j) != 0, seq(j+1..j+g) = 0 and seq(j+g+1) != 0.

    ``window`` is an optional (lo, hi) range of trusted indices; positions
    needing indices outside it are not reported.
    """
    nz = sorted(j for j, v in seq.items() if v)
    out = []
    for a, b in zip(nz, nz[1:]):
        if b - a - 1 == g:
            if window is None or (window[0] <= a and b <= window[1]):
                out.append(a)
    return out


def all_gaps(seq: dict) -> list:
    """(j, length) for every maximal run of zeros between nonzero entries."""
    nz = sorted(j for j, v in seq.items() if v)
    return [(a, b - a - 1) for a, b in zip(nz, nz[1:]) if b - a > 1]


def _betti(M: DGModule, top: int):
    t = build_tower(M, top)
    return t.betti, t


def check_gap_theorem(M: DGModule, P: DGModule, top: int = 10) -> TheoremReport:
    """Each Betti gap of length g >= amp P forces amp(P ⊗^L M) >= g+1."""
    inputs = f"M={M.name}, P={P.name}, top={top}"
    if not P.is_complete or not P.dims:
        return _report("gap", inputs, INCONCLUSIVE, {}, "P needs finite exact amplitude")
    eP = _ext(P)
    if eP.is_zero:
        return _report("gap", inputs, INCONCLUSIVE, {}, "P has zero cohomology")
    betti, t = _betti(M, top)
    gaps = [(j, g) for j, g in all_gaps(betti) if g >= eP.amp]
    trace = {"betti": betti, "amp_P": eP.amp, "gaps": [f"{j}+{g}" for j, g in gaps]}
    if not gaps:
        return _report("gap", inputs, VERIFIED, trace, "no qualifying gap")
    need = max(g for _, g in gaps) + 1
    p = t.termination_level if t.terminated else None
    e = derived_inf_sup_amp(P, M, top + int(eP.sup) + 1, pcd_M=p)
    trace["amp_PM"] = e.amp
    trace["amp_PM_certainty"] = "exact" if e.sup_exact else "at-least"
    trace["required"] = need
    if e.amp >= need:
        return _report("gap", inputs, VERIFIED, trace)
    if e.sup_exact and e.inf_exact:
        return _report("gap", inputs, COUNTEREXAMPLE, trace)
    return _report("gap", inputs, INCONCLUSIVE, trace, "amp(P⊗M) not certified large enough")


def check_betti_gap(M: DGModule, top: int = 10) -> TheoremReport:
    """With P = R: each Betti gap of length g >= sup R forces amp M >= g+1."""
    sR, _ = sup_R(M.algebra)
    inputs = f"M={M.name}, top={top}"
    betti, _ = _betti(M, top)
    eM = _ext(M)
    gaps = [(j, g) for j, g in all_gaps(betti) if g >= sR]
    trace = {"betti": betti, "sup_R": sR, "amp_M": eM.amp, "gaps": [f"{j}+{g}" for j, g in gaps]}
    if not gaps:
        return _report("betti-gap", inputs, VERIFIED, trace, "no qualifying gap")
    need = max(g for _, g in gaps) + 1
    trace["required"] = need
    if eM.certainty != "exact":
        return _report("betti-gap", inputs, INCONCLUSIVE, trace, "amp M not exact")
    return _report("betti-gap", inputs, VERIFIED if eM.amp >= need else COUNTEREXAMPLE, trace)


def check_bass_gap(M: DGModule, bottom: int = -10) -> TheoremReport:
    """Each Bass gap of length g >= sup R forces amp M >= g+1."""
    sR, _ = sup_R(M.algebra)
    inputs = f"M={M.name}, bottom={bottom}"
    mu = bass_numbers(M, bottom)
    eM = _ext(M)
    gaps = [(j, g) for j, g in all_gaps(mu.dims) if g >= sR]
    trace = {"bass": mu.dims, "bass_window": str(mu.window), "sup_R": sR, "amp_M": eM.amp,
             "gaps": [f"{j}+{g}" for j, g in gaps]}
    if not gaps:
        return _report("bass-gap", inputs, VERIFIED, trace, "no qualifying gap")
    need = max(g for _, g in gaps) + 1
    trace["required"] = need
    return _report("bass-gap", inputs, VERIFIED if eM.amp >= need else COUNTEREXAMPLE, trace)


def check_remark_converse(M: DGModule, top: int = 10) -> TheoremReport:
    """If amp M <= sup R then the Betti numbers have no gap of length
    >= sup R (inside the trusted window)."""
    sR, _ = sup_R(M.algebra)
    eM = _ext(M)
    inputs = f"M={M.name}, top={top}"
    trace = {"sup_R": sR, "amp_M": eM.amp}
    if eM.certainty != "exact":
        return _report("converse", inputs, INCONCLUSIVE, trace, "amp M not exact")
    if eM.amp > sR:
        return _report("converse", inputs, VERIFIED, trace, "hypothesis amp M <= sup R not met")
    betti, _ = _betti(M, top)
    bad = [(j, g) for j, g in all_gaps(betti) if g >= sR]
    trace["betti"] = betti
    trace["forbidden_gaps"] = [f"{j}+{g}" for j, g in bad]
    return _report("converse", inputs, COUNTEREXAMPLE if bad else VERIFIED, trace)


def check_bass_converse(M: DGModule, bottom: int = -10) -> TheoremReport:
    """If amp M <= sup R then the Bass numbers have no gap of length
    >= sup R (inside the trusted window)."""
    sR, _ = sup_R(M.algebra)
    eM = _ext(M)
    inputs = f"M={M.name}, bottom={bottom}"
    trace = {"sup_R": sR, "amp_M": eM.amp}
    if eM.amp > sR:
        return _report("bass-converse", inputs, VERIFIED, trace, "hypothesis amp M <= sup R not met")
    mu = bass_numbers(M, bottom)
    bad = [(j, g) for j, g in all_gaps(mu.dims) if g >= sR]
    trace["bass"] = mu.dims
    trace["forbidden_gaps"] = [f"{j}+{g}" for j, g in bad]
    return _report("bass-converse", inputs, COUNTEREXAMPLE if bad else VERIFIED, trace)


def suspension_coherence(M: DGModule, s: int, u: int = 12) -> TheoremReport:
    """pcd, inf and sup of Σ^s M are those of M shifted by -s."""
    from .dgcore import shift_module

    N = shift_module(M, s)
    pM, _ = _certify(M, u)
    pN, _ = _certify(N, u + abs(s))
    iM, _ = module_inf(M)
    iN, _ = module_inf(N)
    eM, eN = _ext(M), _ext(N)

    def sh(x):
        return x - s if not (isinstance(x, float) and math.isinf(x)) else x

    trace = {"pcd_M": pM if pM is not None else "uncertified", "pcd_SM": pN if pN is not None else "uncertified",
             "inf_M": iM, "inf_SM": iN, "sup_M": eM.sup, "sup_SM": eN.sup}
    ok = iN == sh(iM) and eN.sup == sh(eM.sup)
    if pM is not None and pN is not None:
        ok = ok and pN == sh(pM)
    elif (pM is None) != (pN is None):
        return _report("suspension", f"M={M.name}, s={s}", INCONCLUSIVE, trace, "certificate on one side only")
    return _report("suspension", f"M={M.name}, s={s}", VERIFIED if ok else COUNTEREXAMPLE, trace)


THEOREM_IDS = (
    "inf-additivity",
    "sup-formula",
    "amplitude",
    "ab",
    "gap",
    "betti-gap",
    "bass-gap",
    "converse",
    "bass-converse",
    "tower-inequalities",
    "compact-inequalities",
    "degree-identity",
)
