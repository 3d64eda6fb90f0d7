"""Command-line front end.

Exit codes: 0 success, 2 invalid parameters, 3 a theorem's hypothesis fails
for the symbol, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from typing import Any, Iterable, Sequence

from . import document
from . import kernels as ks
from . import laguerre as lg
from . import verdicts as vd
from .errors import InvalidInput, NumericalFailure, PreconditionError
from .symbol import AffineSymbol, fixed_point

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_PRECONDITION = 3
EXIT_NUMERICAL = 4


def _fmt(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    if x is None:
        return ""
    return str(x)


def _csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _table(header: Sequence[str], rows: list[Sequence[Any]], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, row)) for row in rows], indent=2) + "\n"
    return _csv(header, rows)


def _symbol(args) -> AffineSymbol:
    return AffineSymbol(args.a, complex(args.b_re, args.b_im))


def cmd_classify(args) -> str:
    rep = vd.report(_symbol(args))
    return document.dumps(document.to_document(rep))


def cmd_orbit(args) -> str:
    phi = _symbol(args)
    w = complex(args.w_re, args.w_im)
    gram = ks.orbit_norms(phi, ks.kernel(w), args.n)
    rows = []
    for n, g in enumerate(gram):
        closed = ks.orbit_norm_kernel_closed(phi, w, n)
        rows.append((n, g, closed, abs(g - closed)))
    return _table(("n", "norm_gram", "norm_closed", "abs_diff"), rows, args.format)


def cmd_pseudo(args) -> str:
    phi = _symbol(args)
    if args.n < 1:
        raise InvalidInput("--n must be at least 1")
    if args.witness:
        if fixed_point(phi) is None or not fixed_point(phi).interior:
            raise PreconditionError(
                "fixed-point witness precondition: the symbol has no fixed point "
                "in the open right half-plane")
        eta = vd.interior_fixed_point(phi)
        f = ks.kernel(eta)
        orbit = vd.non_shadowing_witness(phi, f, args.delta, args.n)
        values = vd.witness_fixed_point_values(orbit)
        slope = args.delta * abs(ks.evaluate(f, eta)) / ks.norm(ks.apply(phi, f))
        rows = [(n, dev, values[n].real, values[n].imag, abs(values[n]), n * slope)
                for n, dev in enumerate(orbit.deviations(), start=1)]
        header = ("n", "deviation", "fixed_point_re", "fixed_point_im",
                  "fixed_point_abs", "expected_abs")
        return _table(header, rows, args.format)

    f0 = ks.kernel(complex(args.w_re, args.w_im))
    orbit = vd.random_pseudo_orbit(phi, f0, args.delta, args.n, args.seed)
    devs = orbit.deviations()
    if phi.a > 1:
        shadow = vd.shadow_construct(phi, orbit, args.epsilon)
        errors = vd.shadow_errors(phi, orbit, shadow.seed)
        rows = [(n, devs[n - 1], errors[n], shadow.bound) for n in range(1, args.n + 1)]
        return _table(("n", "deviation", "shadow_error", "bound"), rows, args.format)
    rows = [(n, devs[n - 1]) for n in range(1, args.n + 1)]
    return _table(("n", "deviation"), rows, args.format)


def cmd_spectrum(args) -> str:
    phi = _symbol(args)
    basis = lg.LaguerreBasis(args.laguerre_scale, args.basis_size)
    T = lg.build_matrix(phi, basis)
    eig = lg.spectrum_estimate(T)
    est = lg.norm_estimate(T)
    desc = vd.report(phi).spectrum
    rows = [(i, z.real, z.imag, abs(z)) for i, z in enumerate(eig)]
    if args.format == "json":
        out = {
            "descriptor": {"variant": desc.variant.value, "radius": desc.radius,
                           "description": desc.describe(), "provenance": desc.provenance},
            "basis": {"N": basis.N, "c": basis.c},
            "norm_estimate": est,
            "label": "truncation eigenvalues",
            "eigenvalues": [{"re": float(r[1]), "im": float(r[2]), "modulus": float(r[3])}
                            for r in rows],
        }
        return json.dumps(out, indent=2) + "\n"
    head = [
        f"# descriptor: {desc.variant.value}",
        f"# radius: {_fmt(desc.radius)}",
        f"# description: {desc.describe()}",
        f"# basis: N={basis.N} c={_fmt(basis.c)}",
        f"# norm_estimate: {_fmt(est)}",
        "# label: truncation eigenvalues",
    ]
    rows = [(i, float(r), float(im), float(m)) for i, r, im, m in rows]
    return "\n".join(head) + "\n" + _csv(("index", "re", "im", "modulus"), rows)


def cmd_grid(args) -> str:
    header = ["a", "b_re", "b_im", "class", "operator_norm", "invertible", "normal",
              "self_adjoint", "unitary", *document.VERDICT_FIELDS, "spectrum"]
    rows = []
    for a, b_re, b_im in itertools.product(args.a, args.b_re, args.b_im):
        rep = vd.report(AffineSymbol(a, complex(b_re, b_im)))
        rows.append([a, b_re, b_im, rep.symbol_class.value, rep.operator_norm, rep.invertible,
                     rep.normal, rep.self_adjoint, rep.unitary,
                     *(getattr(rep, name).value.value for name in document.VERDICT_FIELDS),
                     rep.spectrum.variant.value])
    return _table(header, rows, args.format)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affinehardy",
        description="Dynamics of affine composition operators on the Hardy space "
                    "of the right half-plane.")
    sub = parser.add_subparsers(dest="command", required=True)

    def symbol_flags(p, multi=False):
        if multi:
            p.add_argument("--a", type=float, nargs="+", required=True)
            p.add_argument("--b-re", type=float, nargs="+", default=[0.0])
            p.add_argument("--b-im", type=float, nargs="+", default=[0.0])
        else:
            p.add_argument("--a", type=float, required=True)
            p.add_argument("--b-re", type=float, default=0.0)
            p.add_argument("--b-im", type=float, default=0.0)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", metavar="FILE")

    p = sub.add_parser("classify", help="verdict report as JSON")
    symbol_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("orbit", help="kernel orbit norms, Gram vs closed form")
    symbol_flags(p)
    p.add_argument("--w-re", type=float, default=0.5)
    p.add_argument("--w-im", type=float, default=0.0)
    p.add_argument("--n", type=_positive_int, default=10)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("pseudo", help="pseudo-orbit experiments")
    symbol_flags(p)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--n", type=_positive_int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--w-re", type=float, default=1.0)
    p.add_argument("--w-im", type=float, default=0.0)
    p.add_argument("--witness", action="store_true",
                   help="fixed-point non-shadowing witness instead of a random pseudo-orbit")
    p.set_defaults(func=cmd_pseudo)

    p = sub.add_parser("spectrum", help="Laguerre truncation eigenvalues")
    symbol_flags(p)
    p.add_argument("--basis-size", type=_positive_int, default=lg.DEFAULT_SIZE)
    p.add_argument("--laguerre-scale", type=float, default=1.0)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("grid", help="verdict table over a parameter mesh")
    symbol_flags(p, multi=True)
    p.set_defaults(func=cmd_grid)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PreconditionError as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
