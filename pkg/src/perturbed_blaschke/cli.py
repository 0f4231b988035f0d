"""Command-line front end."""
from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from typing import Optional, Sequence

import numpy as np

from .errors import BlaschkeError
from .orbit import CLASSIFY_MAX_ITER, DEFAULT_MAX_ITER, DEFAULT_RHO

def parse_complex(text: str) -> complex:
    """``"re,im"`` or a bare real, both in decimal or scientific notation."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im' or a real number, got {text!r}")


def parse_resolution(text: str) -> tuple[int, int]:
    try:
        nx, ny = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NXxNY, got {text!r}") from None
    if nx < 1 or ny < 1:
        raise argparse.ArgumentTypeError("resolution must be positive")
    return nx, ny


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _fmt(x: float) -> str:
    return repr(float(x))


@contextmanager
def _output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def _window(args, default_center: complex, default_width: float):
    center = args.center if args.center is not None else default_center
    width = args.width if args.width is not None else default_width
    nx, ny = args.res
    height = args.height if args.height is not None else width * ny / nx
    return center, width, height, nx, ny


# -- subcommands ---------------------------------------------------------------

def cmd_render_dynamical(args) -> int:
    from .critical_finder import full_inventory
    from .orbit import geometry
    from .rational_map import ParameterPair
    from .render import render_dynamical

    p = ParameterPair(args.a, args.lam)
    center, width, height, nx, ny = _window(args, 0j, 2.4)
    image = render_dynamical(
        p, center, width, height, nx, ny, args.max_iter, rho=args.rho, threads=args.threads
    )
    image.write(args.out)
    if args.figure:
        from .plotting import save_figure

        points, circles = [], []
        if p.lam != 0:
            inv = full_inventory(p)
            g = geometry(p, args.rho, inv)
            points = [("c-", inv.c_minus), ("z0", inv.z0)]
            circles = [("throat", g.throat_radius), ("annulus", g.annulus_lo), ("", g.annulus_hi)]
        save_figure(
            image, args.figure, center=center, width=width, height=height,
            title=f"a={p.a:g}, lambda={p.lam:g}", points=points, circles=circles,
        )
    return 0


def cmd_render_parameter(args) -> int:
    from .render import DEFAULT_LAMBDA_CENTER, DEFAULT_LAMBDA_WIDTH, render_parameter
    from .suites import REFERENCE_PARAMETERS

    center, width, height, nx, ny = _window(args, DEFAULT_LAMBDA_CENTER, DEFAULT_LAMBDA_WIDTH)
    image = render_parameter(
        args.a, center, width, height, nx, ny, args.max_iter, rho=args.rho, threads=args.threads
    )
    image.write(args.out)
    if args.figure:
        from .plotting import save_figure

        points = [(str(case), complex(lam)) for case, lam in REFERENCE_PARAMETERS.items()]
        save_figure(
            image, args.figure, center=center, width=width, height=height,
            title=f"lambda-plane, a={args.a:g}", points=points,
            xlabel="Re lambda", ylabel="Im lambda",
        )
    return 0


def cmd_classify(args) -> int:
    from .fatou import ClassifierBudget, FatouCase, classify_detailed, critical_component
    from .rational_map import ParameterPair

    budget = ClassifierBudget(max_iter=args.max_iter, rho=args.rho)
    lams = args.lam or [complex(1e-5)]
    with _output(args.out) as out:
        for lam in lams:
            p = ParameterPair(args.a, lam)
            res = classify_detailed(p, budget)
            conn = ""
            if res.case in (FatouCase.CASE_A, FatouCase.CASE_B, FatouCase.CASE_C):
                stats = critical_component(p, res.c_minus, max_iter=args.max_iter, rho=args.rho)
                conn = "" if stats is None else str(stats.connectivity)
            e = "" if res.escape_index is None else str(res.escape_index)
            out.write(f"{_fmt(lam.real)},{_fmt(lam.imag)},{res.case},{e},{conn}\n")
    return 0


def cmd_critical_points(args) -> int:
    from .critical_finder import blaschke_crits, check_annulus, full_inventory
    from .rational_map import ParameterPair

    p = ParameterPair(args.a, args.lam)
    with _output(args.out) as out:
        if p.lam == 0:
            cm, cp = blaschke_crits(p.a)
            out.write("# role re im residual\n")
            out.write(f"c_plus {cp.real:.17g} {cp.imag:.17g} 0.000e+00\n")
            out.write(f"c_minus {cm.real:.17g} {cm.imag:.17g} 0.000e+00\n")
            return 0
        inv = full_inventory(p)
        out.write(inv.to_text())
        out.write(f"# annulus_check {'true' if check_annulus(p, inv) else 'false'}\n")
    return 0


def cmd_itinerary(args) -> int:
    from .rational_map import ParameterPair
    from .symbolic import compute_itinerary, label_annuli

    p = ParameterPair(args.a, args.lam)
    n_theta, n_radial = args.polar_res
    labeling = label_annuli(p, args.depth, n_theta, n_radial, threads=args.threads)
    points = list(args.point or [])
    rng = np.random.default_rng(args.seed)
    for _ in range(args.samples):
        points.append(labeling.sample_point(int(rng.integers(len(labeling))), rng))
    with _output(args.out) as out:
        out.write(labeling.to_text())
        out.write("# re im terminal symbols\n")
        for z in points:
            it = compute_itinerary(labeling, z, args.max_steps)
            out.write(f"{_fmt(z.real)} {_fmt(z.imag)} {it.terminal}" + "".join(f" {s}" for s in it.symbols) + "\n")
    return 0


def cmd_verify(args) -> int:
    from .suites import SUITES, run_suite

    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    with _output(args.out) as out:
        for name in names:
            report = run_suite(name)
            out.write("\n".join(report.lines()) + "\n")
            out.flush()
            ok &= report.passed
    return 0 if ok else 1


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perturbed-blaschke",
        description="Dynamics of z^3 (z-a)/(1-conj(a) z) + lambda/z^2.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, max_iter=DEFAULT_MAX_ITER):
        p.add_argument("--a", type=parse_complex, default=complex(0.5), help="re,im (default 0.5)")
        p.add_argument("--max-iter", type=positive_int, default=max_iter)
        p.add_argument("--rho", type=float, default=DEFAULT_RHO, help="small-annulus widening factor")
        p.add_argument("--threads", type=positive_int, default=1)
        p.add_argument("--out", default=None)
        return p

    def window(p, res):
        p.add_argument("--center", type=parse_complex, default=None)
        p.add_argument("--width", type=float, default=None)
        p.add_argument("--height", type=float, default=None)
        p.add_argument("--res", type=parse_resolution, default=res, metavar="NXxNY")
        p.add_argument("--figure", default=None, metavar="PNG", help="also save an annotated figure")

    def lam_arg(p, **kw):
        p.add_argument("--lambda", dest="lam", type=parse_complex, **kw)

    p = common(sub.add_parser("render-dynamical", help="escape-time image of the z-plane"))
    window(p, (512, 512))
    lam_arg(p, default=complex(1e-5))
    p.set_defaults(func=cmd_render_dynamical, out_default="dynamical.ppm")

    p = common(sub.add_parser("render-parameter", help="escape of c_minus over a lambda window"))
    window(p, (256, 256))
    p.set_defaults(func=cmd_render_parameter, out_default="parameter.ppm")

    p = common(sub.add_parser("classify", help="CSV: re,im,case,escape_index,connectivity"), CLASSIFY_MAX_ITER)
    lam_arg(p, action="append", help="repeatable")
    p.set_defaults(func=cmd_classify)

    p = common(sub.add_parser("critical-points", help="critical points and zeros"))
    lam_arg(p, default=complex(1e-5))
    p.set_defaults(func=cmd_critical_points)

    p = common(sub.add_parser("itinerary", help="annulus labels and itineraries"))
    lam_arg(p, default=complex(1e-5))
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--res", dest="polar_res", type=parse_resolution, default=(2048, 4096),
                   metavar="NTHETAxNR", help="polar raster size")
    p.add_argument("--point", type=parse_complex, action="append")
    p.add_argument("--samples", type=int, default=10, help="random band points to follow")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=positive_int, default=32)
    p.set_defaults(func=cmd_itinerary)

    p = common(sub.add_parser("verify", help="run an invariant suite"))
    p.add_argument("suite", choices=["inventory", "lemma", "asymptotics", "classify3", "topology", "itinerary", "all"])
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.out is None and hasattr(args, "out_default"):
        args.out = args.out_default
    try:
        return args.func(args)
    except (BlaschkeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
