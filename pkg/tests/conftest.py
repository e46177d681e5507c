import math
import sys

import numpy as np
import pytest

from mimoic.channel import ChannelInstance, ChannelSeedSpec, generate, siso_from_scalars

MIMO_H11 = [[0.3096, 0.1974, 0.1080], [0.3066, 0.4470, 0.3885], [0.3595, 0.6582, 0.9854], [0.4595, 0.6582, 0.4566]]
MIMO_H22 = [[0.9070, 0.6690, 0.6854, 0.6565], [0.6067, 0.9480, 0.6585, 0.6645], [0.4465, 0.6167, 0.6845, 0.3685]]
MIMO_H21 = [
    [0.8660, 0.9767, 0.4595, 0.6582],
    [0.8603, 0.5850, 0.6582, 0.9854],
    [0.3066, 0.4470, 0.6585, 0.3885],
    [0.3066, 0.6167, 0.4470, 0.3885],
]
MIMO_H12 = [[0.1890, 0.7650, 0.3864], [0.6678, 0.2880, 0.3867], [0.4886, 0.7904, 0.2684]]

SISO_WEAK = (5, 5, 2, 2, 1.1, 1.1)
SISO_STRONG = (1000, 1500, 4000, 10000, 11, 6)
SISO_MIXED = (9000, 1500, 5000, 1000, 11, 6)


def mimo_channel(c12=15.0, c21=21.0) -> ChannelInstance:
    return ChannelInstance(
        3, 4, 4, 3,
        np.array(MIMO_H11), np.array(MIMO_H12), np.array(MIMO_H21), np.array(MIMO_H22),
        rho11=1e8, rho12=1e8, rho21=1e8, rho22=1e8, c12=c12, c21=c21,
    )


def random_corpus(count, seed, log_rho=(0.0, 8.0), max_antennas=4, cap=30.0):
    """Seed-fixed random channels: antennas 1..max, log10 rho uniform, C uniform in [0, cap]."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        dims = [int(x) for x in rng.integers(1, max_antennas + 1, 4)]
        rho = {l: float(10 ** rng.uniform(*log_rho)) for l in ("11", "12", "21", "22")}
        c12, c21 = (float(x) for x in rng.uniform(0, cap, 2))
        out.append(generate(ChannelSeedSpec(*dims, seed=seed * 100_000 + k, rho=rho, c12=c12, c21=c21)))
    return out


def crandn(rng, rows, cols):
    return (rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))) / math.sqrt(2)


@pytest.fixture
def mimo():
    return mimo_channel()


@pytest.fixture
def siso_weak():
    return siso_from_scalars(*SISO_WEAK)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
