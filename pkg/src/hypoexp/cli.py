"""Command-line surface with deterministic, machine-readable output.

Every subcommand is a thin adapter over one library call; JSON output prints
reals with 17 significant digits so values round-trip bit-faithfully, and all
defaults (truncation order, tolerance, seed) are echoed in the output.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import (
    DEFAULT_ORDER,
    DEFAULT_SEED,
    DEFAULT_TOL,
    HypoexpDistribution,
    Series,
    binomial_weights,
    c_coefficients,
    convolve_numeric,
    d_coefficients,
    exponentiality_test,
    forward_solve_theorem1,
    forward_solve_theorem2,
    is_exponential_series,
    lagrange_weights,
    lemma2_check,
    residual_h,
    residual_q,
    validate_rates,
    validate_scales,
    weights_from_scales,
)
from .errors import HypoexpError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REJECT = 2


def _format_value(value) -> str:
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    if isinstance(value, dict):
        return (
            "{"
            + ", ".join(
                f"{json.dumps(str(k))}: {_format_value(v)}"
                for k, v in value.items()
            )
            + "}"
        )
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(_format_value(payload))
    else:
        for key, value in payload.items():
            print(f"{key} = {_format_value(value)}")


def _read_reals(source: str) -> list[float]:
    """Inline JSON array, a single-column CSV/text path, or '-' for stdin."""
    text = source.strip()
    if text.startswith("["):
        values = json.loads(text)
        return [float(v) for v in values]
    if text == "-":
        raw = sys.stdin.read()
    else:
        with open(text) as fh:
            raw = fh.read()
    out = []
    for line in raw.splitlines():
        line = line.split(",")[0].strip()
        if line:
            out.append(float(line))
    return out


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypoexp",
        description=(
            "Hypoexponential distribution toolkit and exponential "
            "characterization verifier. Defaults: K=%d, tol=%g, seed=%d."
            % (DEFAULT_ORDER, DEFAULT_TOL, DEFAULT_SEED)
        ),
    )
    parser.add_argument(
        "--format", choices=("json", "table"), default="json",
        help="output format (default json)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        return p

    p = add("weights", "signed mixture weights from rates, scales, or n")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--rates", help="JSON array or CSV path of rates")
    group.add_argument("--scales", help="JSON array or CSV path of scales")
    group.add_argument("--binomial", type=int, help="harmonic-scale case for given n")

    for name in ("pdf", "cdf", "sf"):
        p = add(name, f"evaluate the {name} at one or more points")
        p.add_argument("--rates", required=True)
        p.add_argument("--x", required=True, help="JSON array of points")

    p = add("quantile", "invert the cdf at one or more probabilities")
    p.add_argument("--rates", required=True)
    p.add_argument("--p", required=True, help="JSON array of probabilities")

    p = add("moments", "raw moment of order k, mean, and variance")
    p.add_argument("--rates", required=True)
    p.add_argument("--k", type=int, required=True)

    p = add("sample", "deterministic draws from the distribution")
    p.add_argument("--rates", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = add("laplace", "Laplace transform in product and mixture form")
    p.add_argument("--rates", required=True)
    p.add_argument("--t", required=True, help="JSON array of transform arguments")

    p = add("verify-lemma2", "check the weight identities at every order")
    p.add_argument("--rates", required=True)
    p.add_argument("--K", type=int, default=12)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = add("coeffs", "structural coefficients of the forward recursions")
    p.add_argument("--which", choices=("c", "d"), required=True)
    p.add_argument("--scales", required=True)
    p.add_argument("--K", type=int, default=DEFAULT_ORDER)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = add("residual", "residuals of a candidate series in either equation")
    p.add_argument("--which", choices=("h", "q"), required=True)
    p.add_argument("--psi", required=True, help="JSON array of series coefficients")
    p.add_argument("--scales", required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = add("solve", "forward-solve the coefficient recursion")
    p.add_argument("--theorem", type=int, choices=(1, 2), required=True)
    p.add_argument("--scales", required=True)
    p.add_argument("--a1", type=float, default=1.0)
    p.add_argument("--K", type=int, default=DEFAULT_ORDER)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = add("oracle-convolve", "compare the analytic density to convolution quadrature")
    p.add_argument("--rates", required=True)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--tmax", type=float, default=None)

    p = add("test-exponential", "tuple-based exponentiality test on data")
    p.add_argument("--data", required=True, help="path, '-' for stdin, or JSON array")
    p.add_argument("--scales", required=True)
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    return parser


def _config(**kwargs) -> dict:
    return kwargs


def _run(args) -> tuple[dict, int]:
    cmd = args.command

    if cmd == "weights":
        if args.binomial is not None:
            wv = binomial_weights(args.binomial)
        elif args.rates is not None:
            wv = lagrange_weights(validate_rates(_read_reals(args.rates)))
        else:
            wv = weights_from_scales(validate_scales(_read_reals(args.scales)))
        return {
            "weights": list(wv.weights),
            "signs": list(wv.signs),
            "log_magnitudes": list(wv.log_magnitudes),
            "exact": wv.exact,
        }, EXIT_OK

    if cmd in ("pdf", "cdf", "sf"):
        dist = HypoexpDistribution.from_rates(_read_reals(args.rates))
        xs = _read_reals(args.x)
        fn = {"pdf": dist.pdf, "cdf": dist.cdf, "sf": dist.survival}[cmd]
        return {"x": xs, "values": [fn(x) for x in xs]}, EXIT_OK

    if cmd == "quantile":
        dist = HypoexpDistribution.from_rates(_read_reals(args.rates))
        ps = _read_reals(args.p)
        return {"p": ps, "values": [dist.quantile(p) for p in ps]}, EXIT_OK

    if cmd == "moments":
        dist = HypoexpDistribution.from_rates(_read_reals(args.rates))
        return {
            "k": args.k,
            "moment": dist.moment(args.k),
            "mean": dist.mean(),
            "variance": dist.variance(),
        }, EXIT_OK

    if cmd == "sample":
        dist = HypoexpDistribution.from_rates(_read_reals(args.rates))
        draws = dist.sample(args.n, args.seed)
        return {
            "config": _config(seed=args.seed, n=args.n),
            "samples": [float(v) for v in draws],
        }, EXIT_OK

    if cmd == "laplace":
        dist = HypoexpDistribution.from_rates(_read_reals(args.rates))
        ts = _read_reals(args.t)
        return {
            "t": ts,
            "product": [dist.laplace(t, "product") for t in ts],
            "mixture": [dist.laplace(t, "mixture") for t in ts],
        }, EXIT_OK

    if cmd == "verify-lemma2":
        report = lemma2_check(
            validate_rates(_read_reals(args.rates)), order=args.K, tol=args.tol
        )
        payload = {"config": _config(K=args.K, tol=args.tol)}
        payload.update(report.to_dict())
        return payload, EXIT_OK if report.passed else EXIT_REJECT

    if cmd == "coeffs":
        mu = validate_scales(_read_reals(args.scales))
        fn = c_coefficients if args.which == "c" else d_coefficients
        coeffs = fn(mu, args.K, args.tol)
        return {
            "config": _config(K=args.K, tol=args.tol),
            "which": coeffs.kind,
            "values": list(coeffs.values),
        }, EXIT_OK

    if cmd == "residual":
        mu = validate_scales(_read_reals(args.scales))
        psi = Series.from_coefficients(_read_reals(args.psi))
        fn = residual_h if args.which == "h" else residual_q
        report = fn(psi, mu, tol=args.tol)
        payload = {"config": _config(tol=args.tol), "which": args.which}
        payload.update(report.to_dict())
        code = EXIT_OK if report.compatible else EXIT_REJECT
        return payload, code

    if cmd == "solve":
        mu = validate_scales(_read_reals(args.scales))
        if args.theorem == 1:
            solved = forward_solve_theorem1(mu, args.a1, order=args.K, tol=args.tol)
        else:
            solved = forward_solve_theorem2(mu, order=args.K, tol=args.tol)
        verdict = is_exponential_series(solved, tol=max(args.tol, 1e-9))
        payload = {
            "config": _config(K=args.K, tol=args.tol, theorem=args.theorem),
            "series": list(solved.coefficients),
        }
        payload.update(verdict.to_dict())
        return payload, EXIT_OK

    if cmd == "oracle-convolve":
        rv = validate_rates(_read_reals(args.rates))
        gd = convolve_numeric(rv, step=args.step, t_max=args.tmax)
        dist = HypoexpDistribution.from_rates(rv)
        return {
            "config": _config(step=args.step, t_max=float(gd.grid[-1])),
            "n_points": len(gd.grid),
            "integral": gd.integral(),
            "sup_distance": gd.sup_distance_to(dist.pdf),
        }, EXIT_OK

    if cmd == "test-exponential":
        mu = validate_scales(_read_reals(args.scales))
        data = _read_reals(args.data)
        report = exponentiality_test(data, mu, alpha=args.alpha, seed=args.seed)
        payload = {"config": _config(alpha=args.alpha, seed=args.seed)}
        payload.update(report.to_dict())
        return payload, EXIT_REJECT if report.rejected else EXIT_OK

    raise AssertionError(f"unhandled command {cmd!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        payload, code = _run(args)
    except (HypoexpError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(payload, args.format)
    return code


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
