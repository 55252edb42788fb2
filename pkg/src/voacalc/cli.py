"""Command-line driver: build algebras, run verification suites, load
fixtures, and emit deterministic reports.

Structured output is one whitespace-free record per check,

    suite identity params status diff-count

sorted by (suite, identity, params) so that runs with different
parallelism are byte-identical. Exit codes: 0 all pass, 1 at least one
failure, 2 configuration or fixture error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from . import axioms, contragredient as contra, fusion, moduli
from .exact import QQi
from .fock import GradedVector, build_heisenberg, partitions
from .reports import (ConfigError, FixtureError, RunReport, Status,
                      VerificationReport)
from .series import Window, check_delta_identity, random_laurent_polynomial


@dataclass
class SuiteConfig:
    level: int = 6
    window: int = 3
    s3_window: int = 2
    order: int = 3
    cutoffs: tuple[int, ...] = (4, 8, 12)
    moduli_order: int = 8
    seed: int = 94201
    count: int = 50
    jobs: int = 1
    fmt: str = "text"
    fixtures: tuple[str, ...] = ()

    def validate(self) -> None:
        if self.level < 0:
            raise ConfigError("level must be nonnegative")
        if self.window < 0 or self.s3_window < 0:
            raise ConfigError("window bounds must be nonnegative")
        if list(self.cutoffs) != sorted(set(self.cutoffs)):
            raise ConfigError("cutoff schedule must be strictly increasing")
        if self.jobs < 1:
            raise ConfigError("jobs must be positive")


def _tag(reports, suite):
    for r in reports:
        r.suite = suite
    return reports


# -- suites -------------------------------------------------------------------


def delta_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    rng = random.Random(cfg.seed)
    win1 = Window.of(x=(-cfg.window - 1, cfg.window + 1))
    out = []
    for i in range(25):
        f = random_laurent_polynomial(rng)
        rep = check_delta_identity("fundamental", f, win1)
        rep.identity = f"delta-fundamental#{i:02d}"
        out.append(rep)
    win3 = Window.symmetric(("x0", "x1", "x2"), cfg.window + 1)
    out.append(check_delta_identity("two-term", None, win3))
    out.append(check_delta_identity("three-term", None, win3))
    return _tag(out, "delta")


def _partition_count_oracle(n: int) -> int:
    """Partition counts by the pentagonal-number recurrence."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > m and g2 > m:
                break
            sign = -1 if k % 2 == 0 else 1
            if g1 <= m:
                total += sign * p[m - g1]
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[n]


def voa_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    V = build_heisenberg(cfg.level)
    out = []
    dims = [V.dim(n) for n in range(cfg.level + 1)]
    want = [_partition_count_oracle(n) for n in range(cfg.level + 1)]
    out.append(VerificationReport.from_diffs(
        "weight-dimensions", f"level={cfg.level}",
        [] if dims == want else [(("dims",), dims, want)],
        note=",".join(map(str, dims))))

    diffs = []
    for lv in V.basis_upto():
        v = GradedVector.basis(lv)
        ys = V.vertex_series(v, V.vacuum,
                             Window.of(x=(-2 * cfg.level - 2, 2 * cfg.level + 2)))
        if any(e[0] < 0 for e in ys.coeff):
            diffs.append(((lv, "regular"), "negative powers", "none"))
        if ys.coefficient((0,)) != v:
            diffs.append(((lv, "constant"), "differs", "v"))
        if sum(lv) + 1 <= cfg.level:
            got = ys.coefficient((1,)) or GradedVector()
            if got != V.virasoro(-1, v):
                diffs.append(((lv, "first-order"), "differs", "L(-1)v"))
    out.append(VerificationReport.from_diffs(
        "creation-property", f"level={cfg.level}", diffs))

    for lu in V.basis_upto():
        for lv in V.basis_upto():
            if lu > lv:
                continue
            out.append(axioms.check_skew_symmetry(
                V, GradedVector.basis(lu), GradedVector.basis(lv), cfg.level))

    win = Window.of(x=(-cfg.level - 1, cfg.level + 1))
    for lv in V.basis_upto():
        out.extend(axioms.check_commutators(V, GradedVector.basis(lv), win))

    diffs = []
    c = V.central_charge
    ceil = cfg.level + 8
    for m in range(-4, 5):
        for n in range(-4, 5):
            for w in range(0, min(4, cfg.level) + 1):
                for lab in V.basis(w):
                    vec = GradedVector.basis(lab)
                    lhs = V.virasoro(m, V.virasoro(n, vec, ceil), ceil) \
                        - V.virasoro(n, V.virasoro(m, vec, ceil), ceil)
                    rhs = V.virasoro(m + n, vec, ceil).scale(Fraction(m - n))
                    if m + n == 0:
                        rhs = rhs + vec.scale(c * Fraction(m ** 3 - m, 12))
                    l, _ = lhs.clip(cfg.level)
                    r, _ = rhs.clip(cfg.level)
                    if l != r:
                        diffs.append(((m, n, lab), "differs", ""))
    out.append(VerificationReport.from_diffs(
        "virasoro-bracket", "range=4;maxwt=4", diffs))
    return _tag(out, "voa-axioms")


def _jacobi_triples(level: int, max_total: int):
    for total in range(max_total + 1):
        for w1 in range(total + 1):
            for w2 in range(total - w1 + 1):
                w3 = total - w1 - w2
                for l1 in partitions(w1):
                    for l2 in partitions(w2):
                        for l3 in partitions(w3):
                            yield l1, l2, l3


def jacobi_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    V = build_heisenberg(cfg.level)
    win = Window.symmetric(("x0", "x1", "x2"), cfg.window)
    items = list(_jacobi_triples(cfg.level, cfg.level))

    def run(t):
        l1, l2, l3 = t
        return axioms.check_jacobi(V, GradedVector.basis(l1),
                                   GradedVector.basis(l2),
                                   GradedVector.basis(l3), win)

    return _tag(_parallel_map(run, items, cfg.jobs), "jacobi")


def s3_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    V = build_heisenberg(cfg.level)
    win = Window.symmetric(("x0", "x1", "x2"), cfg.s3_window)
    out = []
    kept = 0
    for l1, l2, l3 in _jacobi_triples(cfg.level, cfg.level):
        if kept >= cfg.count:
            break
        u = GradedVector.basis(l1)
        v = GradedVector.basis(l2)
        w = GradedVector.basis(l3)
        reps = [axioms.check_iterate_skew(V, u, v, w, win),
                axioms.check_translate_skew(V, u, v, w, win)]
        for perm in ((1, 0, 2), (0, 2, 1)):
            reps.extend(axioms.s3_transform_check(V, u, v, w, perm, win)[-1:])
        if any(r.status is Status.SKIPPED for r in reps):
            continue
        kept += 1
        out.extend(reps)
    return _tag(out, "s3")


def contragredient_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    V = build_heisenberg(cfg.level)
    M = contra.VOAModule(V)
    Mp = contra.ContragredientModule(M)
    out = []
    out.extend(contra.check_defining_relation(M, Mp))
    out.append(contra.check_dual_virasoro(M, cfg.level, Mp))
    out.append(contra.check_dual_derivative(M, cfg.level, Mp))
    out.append(contra.check_double_contragredient(M, Mp))
    out.extend(contra.check_invariant_form(M))
    form = contra.build_invariant_form(M)
    om = V.omega
    want = V.central_charge / 2
    got = form.pair(om, om)
    out.append(VerificationReport.from_diffs(
        "form-conformal-norm", f"level={cfg.level}",
        [] if got == want else [(("omega",), got, want)], note=f"value={got}"))
    win = Window.symmetric(("x0", "x1", "x2"), 2)
    a = GradedVector.basis((1,))
    for v1, v2, wp in ((V.vacuum, V.vacuum, GradedVector.basis(())),
                       (a, a, GradedVector.basis((1,))),
                       (a, om, GradedVector.basis(())),
                       (om, om, GradedVector.basis(()))):
        out.append(contra.check_contragredient_jacobi(M, v1, v2, wp, win, Mp))
    out.extend(_direct_sum_reports(min(cfg.level, 4)))
    return _tag(out, "contragredient")


def _direct_sum_reports(level: int) -> list[VerificationReport]:
    V = build_heisenberg(level)
    M = contra.VOAModule(V)
    form = contra.build_invariant_form(M)
    ds = contra.combine_direct_sum(V, M, form, form)
    zero = GradedVector()
    out = []

    diffs = []
    for lu in V.basis_upto():
        for lx in V.basis_upto():
            u = contra.DSVector(GradedVector.basis(lu), zero)
            x = contra.DSVector(GradedVector.basis(lx), zero)
            for n in range(-level - 1, level + 1):
                got = ds.act(u, n, x)
                want = V.apply_mode(GradedVector.basis(lu), n,
                                    GradedVector.basis(lx))
                if got.v != want or not got.w.is_zero():
                    diffs.append(((lu, n, lx), "differs", ""))
    out.append(VerificationReport.from_diffs(
        "direct-sum-algebra-block", f"level={level}", diffs))

    diffs = []
    for lu in V.basis_upto():
        for lx in V.basis_upto():
            u = contra.DSVector(zero, GradedVector.basis(lu))
            x = contra.DSVector(zero, GradedVector.basis(lx))
            for n in range(-level - 1, level + 1):
                got = ds.act(u, n, x)
                if not got.w.is_zero():
                    diffs.append(((lu, n, lx), "nonzero", "zero"))
                for l3 in V.basis_upto():
                    w3 = contra.DSVector(zero, GradedVector.basis(l3))
                    if form.pair(GradedVector.basis(l3), got.w) != 0:
                        diffs.append(((lu, n, lx, l3), "nonzero", "zero"))
    out.append(VerificationReport.from_diffs(
        "direct-sum-module-orthogonality", f"level={level}", diffs))

    diffs = []
    for lu in V.basis_upto():
        for lx in V.basis_upto():
            u = contra.DSVector(zero, GradedVector.basis(lu))
            x = contra.DSVector(GradedVector.basis(lx), zero)
            for n in range(-level - 1, level + 1):
                got = ds.act(u, n, x)
                if not got.v.is_zero():
                    diffs.append(((lu, n, lx), "nonzero", "zero"))
    out.append(VerificationReport.from_diffs(
        "direct-sum-block-structure", f"level={level}", diffs))

    diffs = []
    basis = [contra.DSVector(GradedVector.basis(l), zero)
             for l in V.basis_upto(2)]
    basis += [contra.DSVector(zero, GradedVector.basis(l))
              for l in V.basis_upto(2)]

    def sigma(t):
        return contra.DSVector(t.v, t.w.scale(-1))

    for u in basis:
        for x in basis:
            for n in range(-4, 4):
                lhs = sigma(ds.act(u, n, x))
                rhs = ds.act(sigma(u), n, sigma(x))
                if not (lhs - rhs).is_zero():
                    diffs.append((("involution", n), "differs", ""))
    out.append(VerificationReport.from_diffs(
        "direct-sum-involution", f"level={level}", diffs))
    return out


def fusion_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    out = []
    paths = list(cfg.fixtures)
    if not paths:
        base = resources.files("voacalc") / "fixtures"
        paths = [base / "one_label.fus", base / "ising.fus"]
    for path in paths:
        T = fusion.load_fusion_tensor(path)
        name = str(path).rsplit("/", 1)[-1]
        for rep in (fusion.check_s3_symmetry(T), fusion.check_positivity(T)):
            rep.params += f";file={name}"
            out.append(rep)
        try:
            A = fusion.build_verlinde(T)
        except fusion.SymmetryViolation as e:
            out.append(VerificationReport(
                "verlinde-build", f"file={name}", Status.FAIL,
                [(("symmetry",), str(e), "")]))
            continue
        for rep in (fusion.check_commutativity(A), fusion.check_associativity(A),
                    fusion.check_unit(A)):
            rep.params += f";file={name}"
            out.append(rep)

    V = build_heisenberg(3)
    win = Window.symmetric(("x0", "x1", "x2"), 2)
    I1 = fusion.intertwiner_from_algebra(V)
    for rep in fusion.check_intertwiner(I1, win):
        rep.params += ";type=self"
        out.append(rep)
    Mp = contra.ContragredientModule(contra.VOAModule(V))
    I2 = fusion.intertwiner_from_module(V, Mp)
    for rep in fusion.check_intertwiner(I2, win):
        rep.params += ";type=dual-module"
        out.append(rep)
    return _tag(out, "fusion")


def moduli_suite(cfg: SuiteConfig) -> list[VerificationReport]:
    Mo = cfg.moduli_order
    rng = random.Random(cfg.seed)
    out = []
    ident = moduli.identity_element(Mo)
    cap = moduli.cap_element(Mo)

    sample = [moduli.random_supported_element(rng, Mo) for _ in range(20)]
    diffs = []
    for qi, Q in enumerate(sample):
        for i in range(1, Q.arity + 1):
            if moduli.sew(Q, i, ident).element != Q:
                diffs.append(((qi, "right", i), "differs", ""))
        if moduli.sew(ident, 1, Q).element != Q:
            diffs.append(((qi, "left"), "differs", ""))
    out.append(VerificationReport.from_diffs(
        "operad-identity", f"sample={len(sample)}", diffs))

    a, b = Fraction(7, 2), Fraction(-3, 5)
    got = moduli.sew(moduli.scaling_element(a, Mo), 1,
                     moduli.scaling_element(b, Mo)).element
    want = moduli.scaling_element(a * b, Mo)
    out.append(VerificationReport.from_diffs(
        "scaling-composition", f"a={a};b={b}",
        [] if got == want else [(("compose",), "differs", "")]))

    got = moduli.sew(moduli.two_puncture_element(1, Mo), 1, cap).element
    out.append(VerificationReport.from_diffs(
        "cap-two-puncture", "z=1",
        [] if got == ident else [(("cap",), "differs", "")]))

    pinned = [
        moduli.ModuliElement(
            2, Mo, (QQi(16),), (QQi(0),) * Mo,
            (moduli.LocalCoordinate(QQi(2), (QQi(0),) * Mo),
             moduli.LocalCoordinate(QQi(1), (QQi(0),) * Mo))),
        moduli.ModuliElement(
            2, Mo, (QQi(Fraction(1, 2)),), (QQi(0),) * Mo,
            (moduli.LocalCoordinate(QQi(1), (QQi(0),) * Mo),
             moduli.LocalCoordinate(QQi(Fraction(1, 3)), (QQi(0),) * Mo))),
        moduli.scaling_element(Fraction(5, 4), Mo),
        ident,
    ]
    out.extend(moduli.check_operad_axioms(pinned, seed=cfg.seed))

    V = build_heisenberg(cfg.level)
    aa = GradedVector.basis((1,))
    dual1 = GradedVector.basis((1,))
    P2 = moduli.two_puncture_element(2, Mo)
    P1 = moduli.two_puncture_element(1, Mo)
    res = moduli.nu_evaluate(V, moduli.scaling_element(Fraction(3, 2), Mo),
                             [aa], dual1, max(cfg.cutoffs))
    want_val = QQi(Fraction(2, 3))
    out.append(VerificationReport.from_diffs(
        "nu-grading", "a=3/2;wt=1",
        [] if res.value == want_val else [(("value",), res.value, want_val)],
        note=f"stable={res.stable}"))
    res = moduli.nu_evaluate(V, P2, [aa, aa], GradedVector.basis(()),
                             max(cfg.cutoffs))
    want_val = QQi(Fraction(1, 4))
    out.append(VerificationReport.from_diffs(
        "nu-two-point", "z=2",
        [] if res.value == want_val else [(("value",), res.value, want_val)]))

    out.append(moduli.check_sewing_axiom(V, P2, 1, ident, [aa, aa], dual1,
                                         cfg.cutoffs))
    rep = moduli.check_sewing_axiom(V, P2, 1, P1, [aa, aa, aa], dual1,
                                    cfg.cutoffs)
    rep.identity = "sewing-evaluation-nontrivial"
    out.append(rep)
    return _tag(out, "moduli")


SUITES = {
    "delta": delta_suite,
    "voa-axioms": voa_suite,
    "jacobi": jacobi_suite,
    "s3": s3_suite,
    "contragredient": contragredient_suite,
    "fusion": fusion_suite,
    "moduli": moduli_suite,
}


def _parallel_map(fn, items, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def run_suites(names, cfg: SuiteConfig) -> RunReport:
    cfg.validate()
    t0 = time.time()
    run = RunReport()

    def one(name):
        return SUITES[name](cfg)

    for chunk in _parallel_map(one, list(names), cfg.jobs):
        run.extend(chunk)
    run.reports.sort(key=lambda r: (r.suite, r.identity, r.params))
    run.elapsed = time.time() - t0
    return run


def emit(run: RunReport, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "structured":
        for r in run.reports:
            stream.write(r.record() + "\n")
        return
    for r in run.reports:
        mark = {"pass": "[PASS]", "fail": "[FAIL]",
                "skipped-budget": "[SKIP]"}[r.status.value]
        line = f"{mark} {r.suite or '-'} {r.identity} {r.params}"
        if r.note:
            line += f"  ({r.note})"
        stream.write(line + "\n")
        for d in r.diffs[:5]:
            stream.write(f"        at {d[0]}: lhs={d[1]} rhs={d[2]}\n")
        if len(r.diffs) > 5:
            stream.write(f"        ... {len(r.diffs) - 5} more\n")
    stream.write(f"passed={run.passed} failed={run.failed} "
                 f"skipped={run.skipped} elapsed={run.elapsed:.1f}s\n")


def _common(sub):
    sub.add_argument("--level", type=int, default=6)
    sub.add_argument("--window", type=int, default=3)
    sub.add_argument("--order", type=int, default=3)
    sub.add_argument("--cutoffs", type=str, default="4,8,12")
    sub.add_argument("--count", type=int, default=50)
    sub.add_argument("--seed", type=int, default=94201)
    sub.add_argument("--format", choices=("text", "structured"),
                     default="text", dest="fmt")
    sub.add_argument("--jobs", type=int, default=1)


def _config_from(args, fixtures=()) -> SuiteConfig:
    try:
        cutoffs = tuple(int(t) for t in args.cutoffs.split(",") if t)
    except ValueError:
        raise ConfigError(f"bad cutoff schedule {args.cutoffs!r}")
    cfg = SuiteConfig(level=args.level, window=args.window,
                      s3_window=min(args.window, 2), order=args.order,
                      cutoffs=cutoffs, seed=args.seed, count=args.count,
                      jobs=args.jobs, fmt=args.fmt,
                      fixtures=tuple(str(f) for f in fixtures))
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="voacalc",
        description="exact verification suites for a truncated free boson "
                    "vertex algebra")
    subs = parser.add_subparsers(dest="command", required=True)

    p_check = subs.add_parser("check", help="run one verification suite")
    p_check.add_argument("suite", choices=("delta", "jacobi", "skew",
                                           "commutators", "conjugation", "s3"))
    _common(p_check)

    p_con = subs.add_parser("contragredient",
                            help="dual module construction and checks")
    p_con.add_argument("action", choices=("build", "verify"))
    _common(p_con)

    p_fus = subs.add_parser("fusion", help="fusion tensor fixtures")
    p_fus.add_argument("action", choices=("verify",))
    p_fus.add_argument("files", nargs="*")
    _common(p_fus)

    p_mod = subs.add_parser("moduli", help="sewing and evaluation checks")
    p_mod.add_argument("action", choices=("sew", "axioms", "nu"))
    p_mod.add_argument("files", nargs="*")
    p_mod.add_argument("--at", type=int, default=1)
    _common(p_mod)

    p_all = subs.add_parser("all", help="every suite")
    _common(p_all)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (ConfigError, FixtureError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "check":
        cfg = _config_from(args)
        mapping = {"delta": ["delta"], "jacobi": ["jacobi"], "s3": ["s3"],
                   "skew": ["voa-axioms"], "commutators": ["voa-axioms"],
                   "conjugation": None}
        if args.suite == "conjugation":
            run = _conjugation_run(cfg)
        else:
            run = run_suites(mapping[args.suite], cfg)
        emit(run, cfg.fmt)
        return run.exit_code

    if args.command == "contragredient":
        cfg = _config_from(args)
        if args.action == "build":
            V = build_heisenberg(cfg.level)
            M = contra.VOAModule(V)
            form = contra.build_invariant_form(M)
            dets = form.block_determinants()
            for w in sorted(dets):
                print(f"weight {w}: dim {V.dim(w)} det {dets[w]}")
            print(f"symmetric={form.symmetric}")
            return 0
        run = run_suites(["contragredient"], cfg)
        emit(run, cfg.fmt)
        return run.exit_code

    if args.command == "fusion":
        cfg = _config_from(args, fixtures=args.files)
        run = run_suites(["fusion"], cfg)
        emit(run, cfg.fmt)
        return run.exit_code

    if args.command == "moduli":
        cfg = _config_from(args)
        if args.action == "sew":
            if len(args.files) != 2:
                raise ConfigError("moduli sew needs exactly two element files")
            Q1 = moduli.load_moduli_element(args.files[0])
            Q2 = moduli.load_moduli_element(args.files[1])
            try:
                res = moduli.sew(Q1, args.at, Q2)
            except (moduli.UnsupportedSewing, moduli.SewingUndefined) as e:
                print(f"error: {e}", file=sys.stderr)
                return 1
            sys.stdout.write(moduli.format_moduli_element(res.element))
            return 0
        if args.action == "nu":
            if len(args.files) != 1:
                raise ConfigError("moduli nu needs one element file")
            Q = moduli.load_moduli_element(args.files[0])
            V = build_heisenberg(cfg.level)
            vecs = [V.omega] * Q.arity
            vp = GradedVector.basis(())
            for N in cfg.cutoffs:
                try:
                    res = moduli.nu_evaluate(V, Q, vecs, vp, N)
                except moduli.DomainViolation as e:
                    print(f"error: {e}", file=sys.stderr)
                    return 1
                print(f"cutoff {N}: value {res.value} stable {res.stable}")
            return 0
        run = run_suites(["moduli"], cfg)
        emit(run, cfg.fmt)
        return run.exit_code

    cfg = _config_from(args)
    run = run_suites(list(SUITES), cfg)
    emit(run, cfg.fmt)
    return run.exit_code


def _conjugation_run(cfg: SuiteConfig) -> RunReport:
    V = build_heisenberg(cfg.level)
    run = RunReport()
    t0 = time.time()
    for lv in V.basis_upto(min(cfg.level, 4)):
        run.extend(_tag(axioms.check_conjugation(
            V, GradedVector.basis(lv), cfg.order), "conjugation"))
    run.reports.sort(key=lambda r: (r.suite, r.identity, r.params))
    run.elapsed = time.time() - t0
    return run


if __name__ == "__main__":
    sys.exit(main())
