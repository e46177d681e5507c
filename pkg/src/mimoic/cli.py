"""Command-line interface.

Exit codes: 0 success, 1 property or numeric failure, 2 usage error.
Every command writes its artifact to ``--out``; stdout only carries a short
human summary.  Report files contain a ``digest`` (SHA-256 of the report
without its ``wall_time`` field) so runs can be compared byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .achievability import combined_achievable, guaranteed_inner_region
from .asymptotics import (
    DofSpec,
    GdofSpec,
    coop_saturation_beta,
    dof_region,
    gdof_curve,
    gdof_nrc,
    gdof_piecewise,
    gdof_region,
    gdof_value,
    symmetric_dof_value,
)
from .channel import ChannelError, ChannelSeedSpec, from_json, generate, siso_from_scalars, to_json
from .geometry import erode_by_box, is_subset, max_gap, region_to_dict
from .hermitian import NotPositiveDefinite
from .outer import outer_region, outer_terms
from .plot import regions_svg
from .validate import PROPERTIES, run_suite

log = logging.getLogger("mimoic")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad flags or unreadable input; maps to exit code 2."""


def _nonneg(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if math.isnan(v) or v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return v


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return v


def _capacity(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    return _nonneg(text)


def _decades(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}")
    if not lo <= hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, allow_nan=False) + "\n"


def _report(command: str, args: dict, inputs: dict, outputs: dict, passed: bool, started: float) -> str:
    body = {"command": command, "args": args, "inputs": inputs, "outputs": outputs, "pass": passed}
    body["digest"] = hashlib.sha256(_dump(body).encode()).hexdigest()
    body["wall_time"] = round(time.perf_counter() - started, 6)
    return _dump(body)


def _load_channel(path: str):
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        ch = from_json(raw.decode("utf-8"))
    except (ChannelError, UnicodeDecodeError) as exc:
        raise UsageError(f"invalid channel file {path}: {exc}") from exc
    return ch, {Path(path).name: hashlib.sha256(raw).hexdigest()}


def cmd_gen_channel(a) -> int:
    if a.siso is not None:
        if any(x is not None for x in (a.rho11, a.rho12, a.rho21, a.rho22, a.snr)):
            raise UsageError("--siso cannot be combined with --rho* or --snr")
        ch = siso_from_scalars(*a.siso, a.c12, a.c21)
    else:
        dims = (a.m1, a.n1, a.m2, a.n2)
        if any(d is None for d in dims):
            raise UsageError("--m1 --n1 --m2 --n2 are required without --siso")
        rhos = (a.rho11, a.rho12, a.rho21, a.rho22)
        if a.snr is not None:
            if any(r is not None for r in rhos):
                raise UsageError("--snr cannot be combined with --rho*")
            spec = ChannelSeedSpec.from_exponents(*dims, a.snr, a.alpha, a.beta, a.seed)
            if a.beta == 0:
                spec = ChannelSeedSpec(*dims, a.seed, spec.rho, a.c12, a.c21)
        else:
            rho = {k: (1.0 if r is None else r) for k, r in zip(("11", "12", "21", "22"), rhos)}
            spec = ChannelSeedSpec(*dims, a.seed, rho, a.c12, a.c21)
        ch = generate(spec)
    _write(a.out, to_json(ch))
    print(f"wrote {a.out}")
    return EXIT_OK


def _regions(ch, which: str) -> list:
    names = ("outer", "inner-guaranteed", "achievable") if which == "all" else (which,)
    build = {
        "outer": outer_region,
        "inner-guaranteed": guaranteed_inner_region,
        "achievable": combined_achievable,
    }
    return [(n, build[n](ch)) for n in names]


def cmd_region(a) -> int:
    ch, _ = _load_channel(a.channel)
    regions = _regions(ch, a.which)
    if a.which == "all":
        doc = {name: region_to_dict(r) for name, r in regions}
    else:
        doc = region_to_dict(regions[0][1])
    _write(a.out, _dump(doc))
    if a.svg:
        _write(a.svg, regions_svg(regions))
    print(f"wrote {a.out}")
    return EXIT_OK


def cmd_gap(a) -> int:
    started = time.perf_counter()
    ch, digests = _load_channel(a.channel)
    terms = outer_terms(ch)
    outer = outer_region(ch)
    inner = guaranteed_inner_region(ch, terms)
    ach = combined_achievable(ch)
    bound = ch.n1 + ch.n2
    checks = {
        "eroded_in_guaranteed": is_subset(erode_by_box(outer, bound, bound), inner, 1e-6),
        "guaranteed_in_outer": is_subset(inner, outer, 1e-6),
        "achievable_in_outer": is_subset(ach, outer, 1e-6),
        "guaranteed_in_achievable": is_subset(inner, ach, 1e-6),
    }
    gap_ach = max_gap(outer, ach)
    checks["achievable_gap_within_bound"] = gap_ach <= bound + 1e-6
    outputs = {
        "terms": terms.as_dict(),
        "gap_achievable": gap_ach,
        "gap_guaranteed": max_gap(outer, inner),
        "bound": bound,
        "checks": checks,
    }
    passed = all(checks.values())
    args = {"channel": Path(a.channel).name}
    _write(a.out, _report("gap", args, digests, outputs, passed, started))
    print(f"gap {gap_ach:.6f} bits (bound {bound}); {'pass' if passed else 'FAIL'}")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_dof(a) -> int:
    spec = DofSpec(a.m1, a.n1, a.m2, a.n2, a.beta12, a.beta21)
    region = dof_region(spec)
    doc = {
        "spec": {k: getattr(spec, k) for k in ("m1", "n1", "m2", "n2", "beta12", "beta21")},
        "region": region_to_dict(region),
    }
    if spec.m1 == spec.m2 and spec.n1 == spec.n2 and spec.beta12 == spec.beta21:
        doc["symmetric_dof"] = symmetric_dof_value(spec.m1, spec.n1, spec.beta12)
        doc["saturation_beta"] = coop_saturation_beta(spec.m1, spec.n1)
    _write(a.out, _dump(doc))
    print(" ".join(f"({x:g},{y:g})" for x, y in region.vertices))
    return EXIT_OK


def cmd_gdof(a) -> int:
    spec = GdofSpec(a.m, a.alpha, a.beta)
    value = gdof_value(spec)
    doc = {
        "spec": {"m": spec.m, "alpha": spec.alpha, "beta": spec.beta},
        "gdof": value,
        "gdof_piecewise": gdof_piecewise(spec),
        "gdof_no_cooperation": gdof_nrc(spec.m, spec.alpha),
        "region": region_to_dict(gdof_region(spec)),
    }
    _write(a.out, _dump(doc))
    print(f"{value:.12g}")
    return EXIT_OK


def cmd_gdof_curve(a) -> int:
    if a.step <= 0 or a.alpha_max < a.alpha_min:
        raise UsageError("need step > 0 and alpha-max >= alpha-min")
    count = int(math.floor((a.alpha_max - a.alpha_min) / a.step + 1e-9)) + 1
    grid = [a.alpha_min + k * a.step for k in range(count)]
    lines = ["alpha,gdof"] + [f"{x:.12g},{y:.12g}" for x, y in gdof_curve(a.m, a.beta, grid)]
    _write(a.out, "\n".join(lines) + "\n")
    print(f"wrote {count} points to {a.out}")
    return EXIT_OK


def cmd_validate(a) -> int:
    started = time.perf_counter()
    unknown = set(a.skip) - set(PROPERTIES)
    if unknown:
        raise UsageError(f"unknown properties: {sorted(unknown)}")
    lo, hi = a.snr_decades
    if a.trials == 0:
        log.warning("no trials requested; the suite passes vacuously")
    result = run_suite(a.trials, a.seed, a.max_antennas, lo, hi, a.skip)
    args = {
        "trials": a.trials, "seed": a.seed, "max_antennas": a.max_antennas,
        "snr_decades": [lo, hi], "skip": sorted(a.skip),
    }
    _write(a.out, _report("validate", args, {}, result["properties"], result["pass"], started))
    for name, p in result["properties"].items():
        print(f"{name:26s} checked {p['checked']:5d} failed {p['failed']:5d}")
    return EXIT_OK if result["pass"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mimoic", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-channel", help="write a random or scalar channel file")
    for name in ("m1", "n1", "m2", "n2"):
        g.add_argument(f"--{name}", type=_count)
    for name in ("rho11", "rho12", "rho21", "rho22"):
        g.add_argument(f"--{name}", type=_nonneg)
    g.add_argument("--snr", type=_nonneg, help="direct-link gain; cross links get snr**alpha")
    g.add_argument("--alpha", type=_nonneg, default=1.0)
    g.add_argument("--beta", type=_nonneg, default=0.0, help="backhaul = beta*log2(snr) with --snr")
    g.add_argument("--siso", type=_nonneg, nargs=4, metavar=("SNR1", "SNR2", "INR1", "INR2"))
    g.add_argument("--c12", type=_capacity, default=0.0)
    g.add_argument("--c21", type=_capacity, default=0.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen_channel)

    r = sub.add_parser("region", help="compute rate regions")
    r.add_argument("--channel", required=True)
    r.add_argument("--which", choices=("outer", "inner-guaranteed", "achievable", "all"), default="all")
    r.add_argument("--out", required=True)
    r.add_argument("--svg")
    r.set_defaults(func=cmd_region)

    q = sub.add_parser("gap", help="constant-gap report")
    q.add_argument("--channel", required=True)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_gap)

    d = sub.add_parser("dof", help="DoF region")
    for name in ("m1", "n1", "m2", "n2"):
        d.add_argument(f"--{name}", type=_count, required=True)
    d.add_argument("--beta12", type=_nonneg, default=0.0)
    d.add_argument("--beta21", type=_nonneg, default=0.0)
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_dof)

    s = sub.add_parser("gdof", help="symmetric GDoF")
    s.add_argument("--m", type=_count, required=True)
    s.add_argument("--alpha", type=_nonneg, required=True)
    s.add_argument("--beta", type=_nonneg, default=0.0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gdof)

    c = sub.add_parser("gdof-curve", help="GDoF versus alpha as CSV")
    c.add_argument("--m", type=_count, required=True)
    c.add_argument("--beta", type=_nonneg, default=0.0)
    c.add_argument("--alpha-min", type=_nonneg, default=0.0)
    c.add_argument("--alpha-max", type=_nonneg, default=3.0)
    c.add_argument("--step", type=float, default=0.01)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_gdof_curve)

    v = sub.add_parser("validate", help="randomized property suite")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--max-antennas", type=_count, default=4)
    v.add_argument("--snr-decades", type=_decades, default=(0.0, 12.0))
    v.add_argument("--skip", nargs="*", default=[], metavar="PROPERTY")
    v.add_argument("--out", required=True)
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "trials", 0) < 0:
        parser.error("--trials must be nonnegative")
    try:
        return args.func(args)
    except (NotPositiveDefinite, ArithmeticError, np.linalg.LinAlgError) as exc:
        log.error("numeric failure: %s", exc)
        return EXIT_FAIL
    except (UsageError, ChannelError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
