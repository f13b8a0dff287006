"""Command-line interface: ``cochain-dga [--doc PATH] COMMAND ...``.

Every command prints a human-readable part followed by a machine-readable
block::

    [report]
    command = betti k
    ...
    status = computed
    exit = 0
    [/report]

Exit codes: 0 success / verified, 1 counterexample or validation failure,
2 inconclusive (window-limited), 3 input error.
"""

from __future__ import annotations

import argparse
import sys

from . import atlas as atlas_mod
from .atlas import RandomProfile, cone_example, loop_betti_series, parse_atlas_spec, random_module
from .complex import INF, Window, fmt_bound, inf_sup_amp
from .derived import bass_numbers, derived_tensor_cohomology, derived_inf_sup_amp, betti_via_bar
from .dgcore import algebra_as_module, dual, trivial_k_module, validate_algebra, validate_module
from .document import DocumentError, parse_document, replay_document, serialize_algebra, serialize_module
from .reports import COUNTEREXAMPLE, EXIT_CODES, INCONCLUSIVE, VERIFIED, combine_status, fmt_value
from .series import (
    check_compact_inequalities,
    check_degree_identity,
    check_tower_inequalities,
    f_R_series,
    f_series,
)
from .theorems import (
    THEOREM_IDS,
    check_ab,
    check_amplitude,
    check_bass_converse,
    check_bass_gap,
    check_betti_gap,
    check_gap_theorem,
    check_inf_additivity,
    check_remark_converse,
    check_sup_formula,
)
from .tower import build_tower, pcd as tower_pcd

EXIT_INPUT = 3


class InputError(Exception):
    pass


class Output:
    """Collects the human part and the machine block of one command."""

    def __init__(self, command: str):
        self.command = command
        self.human = []
        self.machine = [("command", command)]
        self.status = "computed"
        self.exit = 0

    def say(self, text=""):
        self.human.append(text)

    def put(self, key, value):
        self.machine.append((key, fmt_value(value)))

    def render(self) -> str:
        lines = list(self.human)
        lines.append("[report]")
        lines += [f"{k} = {v}" for k, v in self.machine]
        lines.append(f"status = {self.status}")
        lines.append(f"exit = {self.exit}")
        lines.append("[/report]")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# document handling


def load_document(path):
    if path is None:
        raise InputError("this command needs a document (--doc PATH, or - for stdin)")
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise InputError(f"cannot read {path}: {e.strerror}")
    return parse_document(text)


def _module(doc, name):
    try:
        return doc.module(name)
    except KeyError as e:
        raise InputError(e.args[0])


def _left(doc, name):
    M = _module(doc, name)
    if M.side != "left":
        raise InputError(f"module {name} must be a left module for this command")
    return M


def _right(doc, name):
    P = _module(doc, name)
    if P.side != "right":
        raise InputError(f"module {name} must be a right module for this command")
    return P


def _emit_space(out, key, space, lo, hi):
    for j in range(lo, hi + 1):
        if j in space.window:
            n = space.dim(j)
            out.put(f"{key}.{j}", n)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(doc, args, out):
    reports = [("algebra", validate_algebra(doc.algebra))]
    reports += [(f"module {n}", validate_module(M)) for n, M in doc.modules.items()]
    bad = 0
    for what, rep in reports:
        if rep.ok:
            out.say(f"{what}: ok")
        else:
            bad += 1
            out.say(f"{what}: {len(rep.violations)} violation(s)")
            for v in rep.violations:
                out.say(f"  {v}")
        out.put(f"{what.replace(' ', '.')}.violations", len(rep.violations))
    out.status = "valid" if not bad else "invalid"
    out.exit = 0 if not bad else 1


def cmd_cohomology(doc, args, out):
    M = _module(doc, args.module)
    H = M.cohomology().H
    lo, hi = int(doc.window.lo), int(doc.window.hi)
    out.say(f"cohomology of {args.module} on {H.window.intersect(doc.window)}")
    for j in range(lo, hi + 1):
        if j in H.window and H.dim(j):
            out.say(f"  H^{j} = {H.dim(j)}")
    _emit_space(out, "H", H, lo, hi)
    e = inf_sup_amp(H)
    out.put("inf", e.inf)
    out.put("sup", e.sup)
    out.put("certainty", e.certainty)


def cmd_amp(doc, args, out):
    M = _module(doc, args.module)
    e = inf_sup_amp(M.cohomology().H)
    out.say(f"{args.module}: inf {fmt_bound(e.inf)}, sup {fmt_bound(e.sup)}, amp {fmt_bound(e.amp)} ({e.certainty})")
    out.put("inf", e.inf)
    out.put("sup", e.sup)
    out.put("amp", e.amp)
    out.put("certainty", e.certainty)
    if e.certainty != "exact":
        out.status, out.exit = INCONCLUSIVE, 2


def cmd_betti(doc, args, out):
    M = _left(doc, args.module)
    hi = int(doc.window.hi)
    if args.method == "bar":
        B = betti_via_bar(M, hi)
    else:
        B = build_tower(M, hi).betti_space()
    lo = int(doc.window.lo)
    out.say(f"Betti numbers of {args.module} ({args.method}), degrees {lo}..{hi}")
    out.say("  " + " ".join(f"{j}:{B.dim(j)}" for j in range(lo, hi + 1) if j in B.window))
    _emit_space(out, "betti", B, lo, hi)


def cmd_bass(doc, args, out):
    M = _left(doc, args.module)
    bottom = args.bottom if args.bottom is not None else -int(doc.window.hi)
    mu = bass_numbers(M, bottom)
    hi = max([j for j in mu.dims] + [bottom])
    out.say(f"Bass numbers of {args.module}, degrees {bottom}..{hi} (zero above {hi})")
    out.say("  " + " ".join(f"{j}:{mu.dim(j)}" for j in range(bottom, hi + 1) if j in mu.window))
    out.put("window", str(mu.window))
    _emit_space(out, "bass", mu, bottom, hi)


def cmd_pcd(doc, args, out):
    M = _left(doc, args.module)
    u = args.up_to if args.up_to is not None else int(doc.window.hi)
    p = tower_pcd(M, u)
    out.say(f"pcd {args.module} = {p}")
    out.put("pcd", str(p))
    if p.certainty != "exact":
        out.status, out.exit = INCONCLUSIVE, 2
        out.put("note", p.note)


def cmd_tower(doc, args, out):
    M = _left(doc, args.module)
    u = args.up_to if args.up_to is not None else int(doc.window.hi)
    t = build_tower(M, u)
    out.say(f"tower of {args.module} through level {u}")
    for s in t.steps:
        out.say(f"  level {s.level}: beta = {s.beta}, next dims {dict(sorted(s.next.dims.items()))}")
        out.put(f"beta.{s.level}", s.beta)
    out.put("terminated", t.terminated)
    if t.terminated:
        out.put("termination_level", t.termination_level)
        cert = t.certificate()
        out.say("  terminated: " + (" + ".join(f"S^{-l}R^{b}" for l, b in cert) or "0"))
    else:
        out.say(f"  not terminated ({t.limitation or 'level bound reached'})")


def cmd_tensor(doc, args, out):
    P = _right(doc, args.right)
    M = _left(doc, args.left)
    hi = int(doc.window.hi)
    t = build_tower(M, hi)
    p = t.termination_level if t.terminated else None
    H = derived_tensor_cohomology(P, M, hi)
    e = derived_inf_sup_amp(P, M, hi, pcd_M=p)
    out.say(f"H({args.right} ⊗^L {args.left}) through degree {fmt_bound(H.window.hi)}")
    lo = int(min(P.dims, default=0) + min(M.dims, default=0))
    for j in range(lo, int(min(H.window.hi, hi)) + 1):
        if H.dim(j):
            out.say(f"  H^{j} = {H.dim(j)}")
    _emit_space(out, "H", H, lo, int(min(H.window.hi, hi)))
    out.put("inf", e.inf)
    out.put("sup", e.sup)
    out.put("sup_certainty", "exact" if e.sup_exact else "at-least")


def cmd_series(doc, args, out):
    P = _right(doc, args.right)
    M = _left(doc, args.left)
    hi = int(doc.window.hi)
    t = build_tower(M, hi)
    p = t.termination_level if t.terminated else None
    fR = f_R_series(P)
    fM = f_series(P, M, hi, pcd_M=p)
    out.say(f"f_R(t) = {fR}")
    out.say(f"f_M(t) = {fM}")
    out.put("f_R", fR.render())
    out.put("f_R.window", str(fR.window))
    out.put("f_M", fM.render())
    out.put("f_M.window", str(fM.window))


def cmd_atlas(doc, args, out):
    from .exactfield import parse_field

    try:
        F = parse_field(args.field)
        spec = parse_atlas_spec(args.spec, F)
    except ValueError as e:
        raise InputError(str(e))
    A = spec.build()
    out.say("\n".join(serialize_algebra(A)))
    betti = loop_betti_series(A, args.top)
    out.say(f"loop-space Betti numbers through {args.top}: " + " ".join(str(betti[j]) for j in sorted(betti)))
    out.put("spec", str(spec))
    out.put("dims", dict(sorted(A.dims.items())))
    e = inf_sup_amp(A.cohomology().H)
    out.put("sup_R", e.sup)
    for j in sorted(betti):
        out.put(f"loop_betti.{j}", betti[j])


# -- verification -------------------------------------------------------------


def _run_theorem(tid, A, M, P, top):
    """One check; P (right) may be None where a default is meaningful."""
    DR = dual(algebra_as_module(A), name="DR")
    Pr = P if P is not None else DR
    if tid == "inf-additivity":
        return check_inf_additivity(Pr, M)
    if tid == "sup-formula":
        return check_sup_formula(Pr, M, u=top)
    if tid == "amplitude":
        return check_amplitude(Pr, M, u=top)
    if tid == "ab":
        return check_ab(M, P, u=top)
    if tid == "gap":
        return check_gap_theorem(M, Pr, top=top)
    if tid == "betti-gap":
        return check_betti_gap(M, top=top)
    if tid == "bass-gap":
        return check_bass_gap(M, bottom=-top)
    if tid == "converse":
        return check_remark_converse(M, top=top)
    if tid == "bass-converse":
        return check_bass_converse(M, bottom=-top)
    if tid == "tower-inequalities":
        return check_tower_inequalities(M, Pr, min(top, 6))
    if tid == "compact-inequalities":
        return check_compact_inequalities(M, Pr, u=top)
    if tid == "degree-identity":
        return check_degree_identity(M, Pr, u=top)
    raise InputError(f"unknown theorem id {tid!r} (known: {', '.join(THEOREM_IDS)})")


_COMPACT_ONLY = {"sup-formula", "amplitude", "ab", "compact-inequalities", "degree-identity"}


def cmd_verify(doc, args, out):
    if args.id not in THEOREM_IDS:
        raise InputError(f"unknown theorem id {args.id!r} (known: {', '.join(THEOREM_IDS)})")
    if doc is not None:
        A = doc.algebra
    else:
        A = atlas_mod.sphere_algebra(2)
    top = args.top if args.top is not None else (int(doc.window.hi) if doc is not None else 10)
    P = _right(doc, args.with_module) if (args.with_module and doc is not None) else None
    instances = []
    if args.module:
        if doc is None:
            raise InputError("--module needs a document")
        instances.append((args.module, _left(doc, args.module)))
    else:
        kinds = ("R",) if args.id in _COMPACT_ONLY else ("R", "k")
        prof = RandomProfile(gmin=0, gmax=3, blocks=2, cones=1, kinds=kinds)
        for i in range(args.count):
            seed = args.seed * 1000 + i
            M = random_module(A, seed, prof)
            M.name = f"random{seed}"
            instances.append((M.name, M))
    statuses = []
    for name, M in instances:
        rep = _run_theorem(args.id, A, M, P, top)
        statuses.append(rep.status)
        out.say(f"{name}: {rep.status}" + (f" ({rep.note})" if rep.note else ""))
        for k, v in rep.trace.items():
            out.put(f"{name}.{k}", v)
        out.put(f"{name}.status", rep.status)
        if rep.status == COUNTEREXAMPLE:
            mods = {"M": M}
            if P is not None:
                mods["P"] = P
            task = f"verify {args.id} --module M" + (" --with P" if P is not None else "")
            out.say("replay document:")
            out.say(replay_document(A, mods, tasks=[task]))
    out.put("instances", len(instances))
    out.status = combine_status(statuses)
    out.exit = EXIT_CODES[out.status]


def cmd_tasks(doc, args, out):
    if not doc.tasks:
        out.say("no tasks")
        return
    codes = []
    for task in doc.tasks:
        sub = Output(task)
        try:
            ns = build_parser().parse_args(task.split())
        except SystemExit:
            raise InputError(f"cannot parse task {task!r}")
        if ns.cmd == "tasks":
            raise InputError("tasks cannot be nested")
        _dispatch(ns, doc, sub)
        out.say(sub.render())
        codes.append(sub.exit)
        out.put(f"task.{len(codes)}", f"{task} -> {sub.status}")
    out.exit = 1 if 1 in codes else max(codes)
    out.status = {0: "computed", 1: COUNTEREXAMPLE, 2: INCONCLUSIVE}.get(out.exit, "error")


COMMANDS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "amp": cmd_amp,
    "betti": cmd_betti,
    "bass": cmd_bass,
    "pcd": cmd_pcd,
    "tower": cmd_tower,
    "tensor": cmd_tensor,
    "series": cmd_series,
    "atlas": cmd_atlas,
    "verify": cmd_verify,
    "tasks": cmd_tasks,
}

NEEDS_DOC = {"validate", "cohomology", "amp", "betti", "bass", "pcd", "tower", "tensor", "series", "tasks"}


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--doc", default=argparse.SUPPRESS, help="document path, or - for stdin")
    p = _ArgParser(prog="cochain-dga", description="Homological invariants of cochain DG modules.")
    p.add_argument("--doc", default=None, help="document path, or - for stdin")
    sub = p.add_subparsers(dest="cmd", parser_class=_ArgParser)
    sub.required = True
    sub.add_parser("validate", parents=[common], help="check the axioms of every object")
    for name in ("cohomology", "amp"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("module")
    s = sub.add_parser("betti", parents=[common], help="Betti numbers through the window top")
    s.add_argument("module")
    s.add_argument("--method", choices=("tower", "bar"), default="tower")
    s = sub.add_parser("bass", parents=[common], help="Bass numbers")
    s.add_argument("module")
    s.add_argument("--bottom", type=int, default=None)
    for name in ("pcd", "tower"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("module")
        s.add_argument("--up-to", type=int, default=None, dest="up_to")
    for name in ("tensor", "series"):
        s = sub.add_parser(name, parents=[common], help="P (right) and M (left)")
        s.add_argument("right")
        s.add_argument("left")
    s = sub.add_parser("atlas", parents=[common], help="print an atlas algebra")
    s.add_argument("spec")
    s.add_argument("--field", default="QQ")
    s.add_argument("--top", type=int, default=10)
    s = sub.add_parser("verify", parents=[common], help="check a theorem")
    s.add_argument("id")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=5)
    s.add_argument("--module", default=None, help="use a document module instead of random ones")
    s.add_argument("--with", dest="with_module", default=None, help="right module P from the document")
    s.add_argument("--top", type=int, default=None)
    sub.add_parser("tasks", parents=[common], help="run the [tasks] section")
    return p


def _dispatch(ns, doc, out):
    COMMANDS[ns.cmd](doc, ns, out)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = Output(" ".join(argv))
    try:
        ns = build_parser().parse_args(argv)
        out = Output(" ".join(a for a in argv if a != "--doc" and a != getattr(ns, "doc", None)) or ns.cmd)
        doc = None
        if ns.doc is not None or ns.cmd in NEEDS_DOC:
            doc = load_document(ns.doc)
        _dispatch(ns, doc, out)
    except (InputError, DocumentError) as e:
        print(f"error: {e}", file=sys.stderr)
        out.human = []
        out.put("error", str(e))
        out.status, out.exit = "input-error", EXIT_INPUT
    print(out.render())
    return out.exit


if __name__ == "__main__":
    sys.exit(main())
