"""Command-line front end: kernel evaluation, transforms, norm dashboards,
atomic decompositions, dyadic experiments, commutators and the verification
suites.  Reports are CSV with columns check,parameter,value,bound,pass and
the exit status is nonzero iff any check failed.
"""

import argparse
import os
import sys

import numpy as np

from . import dyadic as dy
from . import product_ops as po
from . import singular as sg
from .commutator import commutator_sweep, iterated_commutator
from .grids import SampledFunction1D, SampledFunction2D, lp_norm, sample2d
from .io import read_function_1d, read_function_2d, write_function_1d, write_function_2d
from .kernels import (
    BesselParams,
    conj_poisson_kernel,
    heat_kernel,
    poisson_kernel_subordination,
    q_deriv_kernel,
    riesz_apply,
)
from .verify import (
    KERNEL_SUITES,
    RunConfig,
    SUITES,
    UnknownSuiteError,
    VerificationReport,
    family_2d,
    run_suite,
)


def _load_config_file(path):
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SystemExit(f"{path}:{lineno}: expected key=value")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


_FIELD_TYPES = {
    "lam": float, "grid_min": float, "grid_max": float, "grid_n": int,
    "grid_kind": str, "t_min": float, "t_max": float, "scales_per_octave": int,
    "tol": float, "seed": int, "out": str, "grid2d_max": float, "grid2d_n": int,
}


def build_config(args):
    values = {}
    if getattr(args, "config", None):
        for key, raw in _load_config_file(args.config).items():
            if key not in _FIELD_TYPES:
                raise SystemExit(f"unknown config key: {key}")
            values[key] = _FIELD_TYPES[key](raw)
    overrides = {
        "lam": args.lam, "grid_min": args.grid_min, "grid_max": args.grid_max,
        "grid_n": args.grid_n, "grid_kind": args.grid_kind, "tol": args.tol,
        "seed": args.seed, "out": args.out,
    }
    for key, val in overrides.items():
        if val is not None:
            values[key] = val
    return RunConfig(**values)


def add_common_flags(sub):
    sub.add_argument("--lambda", dest="lam", type=float, default=None)
    sub.add_argument("--grid-min", dest="grid_min", type=float, default=None)
    sub.add_argument("--grid-max", dest="grid_max", type=float, default=None)
    sub.add_argument("--grid-n", dest="grid_n", type=int, default=None)
    sub.add_argument("--grid-kind", dest="grid_kind", choices=("uniform", "log"), default=None)
    sub.add_argument("--tol", type=float, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--out", type=str, default=None)
    sub.add_argument("--config", type=str, default=None)


def _report_out(report, cfg, default_name):
    path = cfg.out or default_name
    report.to_csv(path)
    print(report)
    print(f"report written to {path}")
    return 0 if report.all_pass else 1


def cmd_kernel(args):
    cfg = build_config(args)
    p = cfg.params()
    p.warn_if_outside_regime()
    if args.action == "eval":
        t, x, y = args.t, args.x, args.y
        if args.kind == "heat":
            val = heat_kernel(p, t, x, y)
        elif args.kind == "poisson":
            val = poisson_kernel_subordination(p, None, t, x, y)
        elif args.kind == "conjugate":
            val = float(conj_poisson_kernel(p, None, t, [x], [y])[0, 0])
        elif args.kind == "qderiv":
            val = float(q_deriv_kernel(p, t, [x], [y])[0, 0])
        else:
            raise SystemExit(f"unknown kernel kind {args.kind}")
        print(f"{val:.17g}")
        return 0
    report = run_suite(args.suite, cfg)
    return _report_out(report, cfg, "report.csv")


def cmd_transform(args):
    cfg = build_config(args)
    p = cfg.params()
    f = read_function_1d(args.input)
    if args.action == "apply":
        if args.op == "hilbert":
            out = SampledFunction1D(f.grid, sg.hilbert_matrix(f.grid) @ f.values)
        elif args.op == "telyakovskii":
            mat, clipped = sg.telyakovskii_matrix(f.grid)
            out = SampledFunction1D(f.grid, mat @ f.values)
            if np.any(clipped):
                print(f"note: {int(np.sum(clipped))} window-clipped rows", file=sys.stderr)
        elif args.op == "riesz":
            out = riesz_apply(p, f, route=args.route)
        else:
            raise SystemExit(f"unknown transform {args.op}")
        write_function_1d(args.out_file or "out.csv", out)
        print(f"written {args.out_file or 'out.csv'}")
        return 0
    # constants: L1 ratio of a comparison operator
    ratio = sg.l1_ratio(f.grid, args.which.replace("J", "I"), f.values)
    print(f"{ratio:.10g}")
    return 0


def cmd_norms(args):
    cfg = build_config(args)
    p = cfg.params()
    cone = po.ConeParams(
        t_min=cfg.t_min, t_max=cfg.t_max, scales_per_octave=cfg.scales_per_octave
    )
    if args.testcase.startswith("file:"):
        f = read_function_2d(args.testcase[5:])
        family = {"file": f}
    else:
        n = cfg.grid2d_n
        grid = dy.dyadic_aligned_grid(cfg.grid2d_max, n)
        full = family_2d(grid, grid)
        picks = {
            "bump": ("bump",),
            "indicator": ("product-indicator",),
            "oscillatory": ("oscillatory",),
            "family": tuple(full),
        }.get(args.testcase)
        if picks is None:
            raise SystemExit(f"unknown testcase {args.testcase}")
        family = {k: full[k] for k in picks}
    table = po.hardy_dashboard(p, family, cone)
    path = cfg.out or "dashboard.csv"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("function,kind,value\n")
        for name in sorted(table):
            for kind in po.HARDY_KINDS:
                fh.write(f"{name},{kind},{table[name][kind]:.10g}\n")
    print(f"dashboard written to {path}")
    return 0


def cmd_atoms(args):
    cfg = build_config(args)
    p = cfg.params()
    f = read_function_2d(args.input)
    dec = dy.atomic_decompose(p, f, depth=args.depth)
    outdir = cfg.out or "atoms"
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "coefficients.csv"), "w", encoding="utf-8") as fh:
        fh.write("ell,lambda_ell\n")
        for ell, lam_c in zip(dec.levels, dec.coefficients):
            fh.write(f"{ell},{lam_c:.10g}\n")
    for ell, atom in zip(dec.levels, dec.atoms):
        write_function_2d(os.path.join(outdir, f"atom_{ell}.csv"), atom)
    err = lp_norm(
        SampledFunction2D(f.grid1, f.grid2, dec.reconstruction.values - f.values), 2
    ) / lp_norm(f, 2)
    print(f"{len(dec.atoms)} atoms, sum|lambda| = {dec.coefficient_sum:.6g}, "
          f"reconstruction rel L2 error = {err:.4g}")
    print(f"atoms written to {outdir}/")
    return 0


def cmd_dyadic(args):
    cfg = build_config(args)
    if args.action == "journe":
        rng = dy.Lcg(cfg.seed)
        worst = 0.0
        for _ in range(args.samples):
            om = dy.random_dyadic_open_set(rng, depth=args.depth)
            worst = max(worst, dy.journe_ratio(om, delta=args.delta))
        print(f"recorded c_delta over {args.samples} samples: {worst:.10g}")
        return 0
    b = read_function_2d(args.input)
    val = dy.bmo_norm(cfg.params(), b, depth=args.depth)
    print(f"{val:.10g}")
    return 0


def cmd_commutator(args):
    cfg = build_config(args)
    p = cfg.params()
    if args.action == "run":
        b = read_function_2d(args.b)
        f = read_function_2d(args.f)
        res = iterated_commutator(p, b, f)
        write_function_2d(cfg.out or "result.csv", res.output)
        print(f"operator ratio: {res.operator_ratio:.10g}")
        return 0
    grid = dy.dyadic_aligned_grid(8.0, 128)
    bs = {
        "bump": sample2d(grid, grid, lambda x, y: np.exp(-((x - 3.0) ** 2) - (y - 4.0) ** 2)),
        "tilted": sample2d(grid, grid, lambda x, y: np.exp(-0.5 * ((x - 4.0) ** 2 + (y - 3.0) ** 2))),
    }
    fam = family_2d(grid, grid, count=5)
    rows, max_ratio = commutator_sweep(p, bs, fam, bmo_depth=4)
    for b_name, f_name, ratio in rows:
        print(f"{b_name} x {f_name}: {ratio:.6g}")
    print(f"max ratio: {max_ratio:.10g}")
    return 0


def cmd_verify(args):
    cfg = build_config(args)
    report = VerificationReport()
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    try:
        for name in names:
            report.extend(run_suite(name, cfg))
    except UnknownSuiteError as exc:
        raise SystemExit(str(exc))
    return _report_out(report, cfg, "report.csv")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="bessel-hardy",
        description="Kernels, singular integrals and product Hardy/BMO "
        "functionals for the Bessel Schrodinger operator",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    k = subs.add_parser("kernel", help="evaluate kernels or run kernel suites")
    ksubs = k.add_subparsers(dest="action", required=True)
    ke = ksubs.add_parser("eval")
    ke.add_argument("--kind", choices=("heat", "poisson", "conjugate", "qderiv"), required=True)
    ke.add_argument("--t", type=float, required=True)
    ke.add_argument("--x", type=float, required=True)
    ke.add_argument("--y", type=float, required=True)
    add_common_flags(ke)
    kv = ksubs.add_parser("verify")
    kv.add_argument("--suite", choices=KERNEL_SUITES, required=True)
    add_common_flags(kv)

    t = subs.add_parser("transform", help="apply 1D transforms / L1 constants")
    tsubs = t.add_subparsers(dest="action", required=True)
    ta = tsubs.add_parser("apply")
    ta.add_argument("--op", choices=("hilbert", "telyakovskii", "riesz"), required=True)
    ta.add_argument("--route", choices=("hankel", "kernel"), default="hankel")
    ta.add_argument("--input", required=True)
    ta.add_argument("--out-file", dest="out_file", default=None)
    add_common_flags(ta)
    tc = tsubs.add_parser("constants")
    tc.add_argument("--which", choices=("I1", "I2", "I3", "J1", "J2", "J3"), required=True)
    tc.add_argument("--input", required=True)
    add_common_flags(tc)

    n = subs.add_parser("norms", help="H1 functional dashboard")
    nsubs = n.add_subparsers(dest="action", required=True)
    nc = nsubs.add_parser("compare")
    nc.add_argument("--testcase", default="bump")
    add_common_flags(nc)

    a = subs.add_parser("atoms", help="atomic decomposition")
    asubs = a.add_subparsers(dest="action", required=True)
    ad = asubs.add_parser("decompose")
    ad.add_argument("--input", required=True)
    ad.add_argument("--depth", type=int, default=6)
    add_common_flags(ad)

    d = subs.add_parser("dyadic", help="Journe experiments and BMO norms")
    dsubs = d.add_subparsers(dest="action", required=True)
    dj = dsubs.add_parser("journe")
    dj.add_argument("--samples", type=int, default=100)
    dj.add_argument("--delta", type=float, default=1.0)
    dj.add_argument("--depth", type=int, default=6)
    add_common_flags(dj)
    db = dsubs.add_parser("bmo")
    db.add_argument("--input", required=True)
    db.add_argument("--depth", type=int, default=5)
    add_common_flags(db)

    c = subs.add_parser("commutator", help="iterated commutator experiments")
    csubs = c.add_subparsers(dest="action", required=True)
    cr = csubs.add_parser("run")
    cr.add_argument("--b", required=True)
    cr.add_argument("--f", required=True)
    add_common_flags(cr)
    cs = csubs.add_parser("sweep")
    cs.add_argument("--family", default="default")
    add_common_flags(cs)

    v = subs.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, help="suite name or 'all'")
    add_common_flags(v)

    args = parser.parse_args(argv)
    handlers = {
        "kernel": cmd_kernel,
        "transform": cmd_transform,
        "norms": cmd_norms,
        "atoms": cmd_atoms,
        "dyadic": cmd_dyadic,
        "commutator": cmd_commutator,
        "verify": cmd_verify,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
