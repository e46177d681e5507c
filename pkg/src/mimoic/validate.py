"""Randomized property suite behind ``mimoic validate``.

Every property is checked once per trial on an independently seeded random
channel.  Trials are independent, so they may run on worker threads; the
per-property counts are merged in trial order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .achievability import (
    combined_achievable,
    covariance_split,
    guaranteed_inner_region,
    quantization_plan,
)
from .asymptotics import empirical_slope
from .channel import ChannelSeedSpec, generate
from .geometry import erode_by_box, is_subset
from .hermitian import block_logdet_check, psd_check, resolvent_identity_check, schur_capped
from .outer import outer_region, outer_terms

__all__ = ["PROPERTIES", "run_suite", "random_channel", "worker_count"]

PROPERTIES = (
    "xi_bound",
    "split_psd",
    "block_det",
    "schur_monotone",
    "resolvent",
    "eroded_in_guaranteed",
    "guaranteed_in_outer",
    "achievable_in_outer",
    "guaranteed_in_achievable",
    "slope",
)

FAULT_ENV = "MIMOIC_INJECT_FAULT"


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("MIMOIC_THREADS", "1")))
    except ValueError:
        return 1


def random_channel(rng: np.random.Generator, max_antennas: int, lo: float, hi: float, seed: int):
    """Antennas in 1..max_antennas, log10 rho uniform in [lo, hi], C uniform in [0, 30]."""
    dims = [int(x) for x in rng.integers(1, max_antennas + 1, 4)]
    rho = {k: float(10 ** rng.uniform(lo, hi)) for k in ("11", "12", "21", "22")}
    c12, c21 = (float(x) for x in rng.uniform(0, 30, 2))
    return generate(ChannelSeedSpec(*dims, seed=seed, rho=rho, c12=c12, c21=c21))


def _crandn(rng, rows, cols):
    return (rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))) / math.sqrt(2)


def _trial(index: int, seed: int, max_antennas: int, lo: float, hi: float, skip) -> dict:
    rng = np.random.default_rng([seed, index])
    ch = random_channel(rng, max_antennas, lo, hi, seed=(seed * 1_000_003 + index) % 2**64)
    res: dict = {}

    def check(name, fn):
        if name not in skip:
            res[name] = bool(fn())

    def xi_ok():
        s = covariance_split(ch)
        return all(
            quantization_plan(ch, s, order).xi <= (ch.n2 if order == "two_one_two" else ch.n1) + 1e-9
            for order in ("two_one_two", "one_two_one")
        )

    def split_ok():
        s = covariance_split(ch)
        ok = True
        pairs = (
            (s.q1p, s.q1c, s.q1p_half, ch.h12, ch.rho12, ch.n2),
            (s.q2p, s.q2c, s.q2p_half, ch.h21, ch.rho21, ch.n1),
        )
        for qp, qc, half, h, rho, n in pairs:
            ok &= psd_check(qp) and psd_check(qc)
            # factor form: forming rho * H Qp H^H directly loses ~rho * eps
            f = math.sqrt(rho) * h @ half
            ok &= psd_check(f @ f.conj().T, np.eye(n))
        return ok

    def block_ok():
        n = int(rng.integers(2, 9))
        k = int(rng.integers(1, n))
        g = _crandn(rng, n, n)
        full = g @ g.conj().T + 0.1 * np.eye(n)
        a, b = full[:k, :k], full[:k, k:]
        c, d = full[k:, :k], full[k:, k:]
        x, y = block_logdet_check(a, b, c, d)
        return abs(x - y) <= 1e-10 * max(1.0, abs(x))

    def schur_ok():
        m = int(rng.integers(1, 6))
        n = int(rng.integers(1, 6))
        g1, g2 = _crandn(rng, m, m), _crandn(rng, m, m)
        k1 = g1 @ g1.conj().T
        k2 = k1 + g2 @ g2.conj().T
        s = _crandn(rng, m, n) * 10 ** rng.uniform(-1, 2)
        l1, l2 = schur_capped(k1, s), schur_capped(k2, s)
        return psd_check(l1, l2) and psd_check(l1, k1)

    def resolvent_ok():
        n = int(rng.integers(1, 5))
        h = _crandn(rng, n, n)
        return all(resolvent_identity_check(h, r) <= 1e-9 * (1 + r) for r in (0.0, 1.0, 1e3, 1e6, 1e9))

    check("xi_bound", xi_ok)
    check("split_psd", split_ok)
    check("block_det", block_ok)
    check("schur_monotone", schur_ok)
    check("resolvent", resolvent_ok)

    if {"eroded_in_guaranteed", "guaranteed_in_outer", "achievable_in_outer", "guaranteed_in_achievable"} - set(skip):
        terms = outer_terms(ch)
        outer = outer_region(ch)
        inner = guaranteed_inner_region(ch, terms)
        ach = combined_achievable(ch)
        g = ch.n1 + ch.n2
        check("eroded_in_guaranteed", lambda: is_subset(erode_by_box(outer, g, g), inner, 1e-6))
        check("guaranteed_in_outer", lambda: is_subset(inner, outer, 1e-6))
        check("achievable_in_outer", lambda: is_subset(ach, outer, 1e-6))
        check("guaranteed_in_achievable", lambda: is_subset(inner, ach, 1e-6))

    if "slope" not in skip and hi - lo >= 4:
        m = 1 + index % 2
        alpha = (0.5, 1.0, 2.0)[index % 3]
        snrs = np.logspace(max(lo, hi - 6), hi, 13)
        report = empirical_slope(ChannelSeedSpec(m, m, m, m, seed=index), alpha, 0.0, snrs)
        res["slope"] = all(r["abs_err"] <= 0.05 for r in report)

    if os.environ.get(FAULT_ENV) == "1" and index == 0:
        res["xi_bound"] = False
    return res


def run_suite(trials: int, seed: int, max_antennas: int, lo: float, hi: float, skip=()) -> dict:
    """Run ``trials`` independent trials and count passes per property.

    Returns
    -------
    dict
        ``{"properties": {name: {"checked", "failed", "failed_trials"}}, "pass": bool}``
    """
    skip = frozenset(skip)
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        results = list(pool.map(lambda i: _trial(i, seed, max_antennas, lo, hi, skip), range(trials)))
    if os.environ.get(FAULT_ENV) == "1" and not results:
        results = [{"xi_bound": False}]
    props = {}
    for name in PROPERTIES:
        outcomes = [(i, r[name]) for i, r in enumerate(results) if name in r]
        failed = [i for i, ok in outcomes if not ok]
        props[name] = {"checked": len(outcomes), "failed": len(failed), "failed_trials": failed[:20]}
    return {"properties": props, "pass": all(p["failed"] == 0 for p in props.values())}
