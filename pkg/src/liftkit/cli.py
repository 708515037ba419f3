"""Command-line interface: ``liftkit {lift,demo2x2,demoN,sweep,gen}``.

Exit codes: 0 success, 2 lift conditions failed, 3 degenerate lift,
64 usage error, 74 file/format error.
"""

import argparse
import sys

import numpy as np

from . import experiments, matgen, mmio
from .errors import DegenerateLift, DimensionMismatch, ParseError, SpectralCollision
from .lifting import LiftVectors, Strategy, build_lift, solve_nullpair, verify_alpha

EXIT_OK = 0
EXIT_CONDITIONS = 2
EXIT_DEGENERATE = 3
EXIT_USAGE = 64
EXIT_IOERR = 74

DEFAULT_SEED = 42


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _fmt(x):
    return repr(float(x))


def _cfmt(z):
    z = complex(z)
    return f"{_fmt(z.real)} {_fmt(z.imag)}"


def parse_complex(text):
    """``"RE"`` or ``"RE,IM"`` to a complex number."""
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise argparse.ArgumentTypeError(f"expected RE[,IM], got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE[,IM], got {text!r}") from None
    return complex(vals[0], vals[1] if len(vals) == 2 else 0.0)


def parse_grid(text):
    """Comma list ``"1e-3,1,10"`` or log range ``"LO:HI:COUNT"``."""
    try:
        if ":" in text:
            lo, hi, count = text.split(":")
            return [float(x) for x in np.logspace(np.log10(float(lo)), np.log10(float(hi)),
                                                  int(count))]
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty grid")
    return vals


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser():
    p = _Parser(prog="liftkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    lift = sub.add_parser("lift", help="lift one matrix and recover its nullvector")
    lift.add_argument("--matrix", required=True, help="Matrix Market file")
    lift.add_argument("--mu", required=True, type=parse_complex,
                      help="eigenvalue to lift, RE[,IM]; the matrix is shifted by it")
    lift.add_argument("--beta", type=float, default=1.0)
    lift.add_argument("--gamma", type=float, default=None, help="defaults to --beta")
    src = lift.add_mutually_exclusive_group()
    src.add_argument("--seed", type=int, default=None)
    src.add_argument("--vectors", help="(N+1)x2 Matrix Market file: columns (v,eta), (w,omega)")
    lift.add_argument("--out", default="nullvector.mtx",
                      help="where to write the recovered nullvector")

    for name, helptext in (("demo2x2", "2x2 family, one (epsilon, beta) cell"),
                           ("demoN", "large hidden 2x2 problem, one cell")):
        d = sub.add_parser(name, help=helptext)
        d.add_argument("--epsilon", type=float, required=True)
        d.add_argument("--beta", type=float, default=1.0)
        d.add_argument("--seed", type=int, default=DEFAULT_SEED)
        if name == "demoN":
            d.add_argument("--n", type=_positive_int, default=100)
            d.add_argument("--matrix-seed", type=int, default=DEFAULT_SEED)
            d.add_argument("--trials", type=_positive_int, default=50)
        else:
            d.add_argument("--trials", type=_positive_int, default=1000)

    sw = sub.add_parser("sweep", help="(epsilon, beta) grid to CSV")
    sw.add_argument("--problem", choices=("small", "large"), default="small")
    sw.add_argument("--epsilons", type=parse_grid, required=True)
    sw.add_argument("--betas", type=parse_grid, required=True)
    sw.add_argument("--trials", type=_positive_int, default=None,
                    help="default 1000 (small) or 50 (large)")
    sw.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sw.add_argument("--n", type=_positive_int, default=100)
    sw.add_argument("--matrix-seed", type=int, default=DEFAULT_SEED)
    sw.add_argument("--out", required=True)

    gen = sub.add_parser("gen", help="write a test matrix")
    gen.add_argument("--family", choices=("m2x2", "large", "poisson"), required=True)
    gen.add_argument("--epsilon", type=float, default=0.0)
    gen.add_argument("--n", type=_positive_int, default=100)
    gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    gen.add_argument("--out", required=True)
    gen.add_argument("--transform-out", help="large family: also write the similarity Q")
    gen.add_argument("--format", choices=("array", "coordinate"), default="array")
    return p


def _print_record(rec, out):
    for name in experiments.CSV_COLUMNS:
        v = getattr(rec, name)
        print(f"{name} {v if isinstance(v, int) else _fmt(v)}", file=out)


def cmd_lift(args, out):
    m = mmio.read_matrix(args.matrix)
    if m.shape[0] != m.shape[1]:
        raise UsageError(f"{args.matrix}: matrix is {m.shape[0]}x{m.shape[1]}, not square")
    n = m.shape[0]
    a = m - args.mu * np.eye(n)
    if args.vectors:
        cols = mmio.read_matrix(args.vectors)
        if cols.shape != (n + 1, 2):
            raise DimensionMismatch(
                f"{args.vectors}: expected {n + 1}x2 lift vectors, got "
                f"{cols.shape[0]}x{cols.shape[1]}")
        lift = LiftVectors.from_columns(cols[:, 0], cols[:, 1], strategy=Strategy.CUSTOM)
    else:
        gamma = args.beta if args.gamma is None else args.gamma
        seed = DEFAULT_SEED if args.seed is None else args.seed
        lift = matgen.random_lift_vectors(n, args.beta, gamma, seed=seed)

    sys_ = build_lift(a, lift)
    rep = sys_.checks
    print(f"n {n}", file=out)
    print(f"mu {_cfmt(args.mu)}", file=out)
    for name, value in (("w_dot_phi", rep.w_dot_phi), ("psi_dot_v", rep.psi_dot_v),
                        ("eta_omega", rep.eta_omega), ("lifted_inner", rep.lifted_inner)):
        ok = rep.flags()[name]
        print(f"check {name} {_cfmt(value)} {'ok' if ok else 'FAILED'}", file=out)

    try:
        pair = solve_nullpair(sys_)
    except DegenerateLift as exc:
        print(f"degenerate {exc}", file=out)
        status = EXIT_CONDITIONS if not rep.passed else EXIT_DEGENERATE
        print(f"status {'conditions_failed' if not rep.passed else 'degenerate'}", file=out)
        return status

    print(f"lambda0 {_cfmt(pair.lambda0)}", file=out)
    print(f"xi {_cfmt(pair.xi)}", file=out)
    print(f"zeta {_cfmt(pair.zeta)}", file=out)
    print(f"alpha {_cfmt(verify_alpha(sys_, pair))}", file=out)
    print(f"s0 {_fmt(experiments.condition_s0(pair))}", file=out)
    mmio.write_matrix(pair.recovered_right, args.out, field="complex",
                      comment="recovered right nullvector (unit, phase-normalized)")
    print(f"wrote {args.out}", file=out)
    if not rep.passed:
        print("status conditions_failed", file=out)
        return EXIT_CONDITIONS
    print("status pass", file=out)
    return EXIT_OK


def cmd_demo2x2(args, out):
    rec = experiments.run_cell(experiments.Small(args.epsilon), args.beta, args.trials, args.seed)
    _print_record(rec, out)
    return EXIT_OK


def cmd_demoN(args, out):
    problem = experiments.Large(args.n, args.epsilon, args.matrix_seed)
    rec = experiments.run_cell(problem, args.beta, args.trials, args.seed)
    _print_record(rec, out)
    return EXIT_OK


def cmd_sweep(args, out):
    trials = args.trials or (1000 if args.problem == "small" else 50)
    records = experiments.sweep(args.epsilons, args.betas, problem=args.problem,
                                n_trials=trials, seed=args.seed, n=args.n,
                                matrix_seed=args.matrix_seed)
    mmio.emit_csv(records, args.out)
    print(f"wrote {len(records)} rows to {args.out}", file=out)
    for eps, beta in experiments.optimal_beta(records).items():
        print(f"optimal_beta epsilon={_fmt(eps)} beta={_fmt(beta)}", file=out)
    return EXIT_OK


def cmd_gen(args, out):
    if args.family == "m2x2":
        fam = matgen.make_2x2(args.epsilon)
        mmio.write_matrix(fam.m, args.out, fmt=args.format)
        print(f"mu_plus {_cfmt(fam.mu_plus)}", file=out)
    elif args.family == "large":
        if args.n < 3:
            raise UsageError("--n must be >= 3 for the large family")
        tm = matgen.make_large(args.n, args.epsilon, args.seed)
        mmio.write_matrix(tm.m, args.out, fmt=args.format)
        if args.transform_out:
            mmio.write_matrix(tm.q, args.transform_out, fmt=args.format)
        print(f"mu_plus {_cfmt(tm.mu_plus)}", file=out)
        print(f"poisson_variant {tm.poisson_variant}", file=out)
    else:
        mmio.write_matrix(matgen.poisson_block(args.n), args.out, fmt=args.format)
    print(f"wrote {args.out}", file=out)
    return EXIT_OK


COMMANDS = {
    "lift": cmd_lift,
    "demo2x2": cmd_demo2x2,
    "demoN": cmd_demoN,
    "sweep": cmd_sweep,
    "gen": cmd_gen,
}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, SpectralCollision) as exc:
        print(f"liftkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ParseError, DimensionMismatch) as exc:
        print(f"liftkit: error: {exc}", file=sys.stderr)
        return EXIT_IOERR


def entry():
    sys.exit(main())
