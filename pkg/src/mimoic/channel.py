"""Two-user MIMO interference channel instances.

``H_ij`` maps transmitter ``i`` to receiver ``j`` and has shape ``(N_j, M_i)``.
``c12`` is the backhaul rate from receiver 1 to receiver 2 and ``c21`` the
reverse; either may be ``math.inf``.

Random instances come from a Philox4x64-10 counter generator keyed by the
seed (counter starting at zero).  Each complex entry consumes two raw 64-bit
words ``w1, w2``, mapped to ``u1 = ((w1 >> 11) + 1) / 2**53`` in (0, 1] and
``u2 = (w2 >> 11) / 2**53`` in [0, 1).  Box-Muller then gives
``sqrt(-2 ln u1) * (cos 2 pi u2 + j sin 2 pi u2) / sqrt(2)``, a CN(0, 1) draw.
Matrices are filled row-major in the order h11, h12, h21, h22.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "ChannelError",
    "ShapeError",
    "NegativeParameter",
    "InvalidSpec",
    "ChannelInstance",
    "ChannelSeedSpec",
    "generate",
    "complex_normal_words",
    "validate",
    "siso_from_scalars",
    "to_json",
    "from_json",
    "to_dict",
    "from_dict",
    "swap_users",
    "COND_WARN",
]

COND_WARN = 1e8
_LINKS = ("11", "12", "21", "22")


class ChannelError(ValueError):
    """Base class for malformed channel descriptions."""


class ShapeError(ChannelError):
    """A channel matrix does not match the antenna counts."""


class NegativeParameter(ChannelError):
    """A link gain or backhaul rate is negative or NaN."""


class InvalidSpec(ChannelError):
    """A seed spec cannot produce a channel."""


@dataclass(frozen=True, eq=False)
class ChannelInstance:
    """Antenna counts, channel matrices, link gains and backhaul rates."""

    m1: int
    n1: int
    m2: int
    n2: int
    h11: np.ndarray
    h12: np.ndarray
    h21: np.ndarray
    h22: np.ndarray
    rho11: float = 1.0
    rho12: float = 1.0
    rho21: float = 1.0
    rho22: float = 1.0
    c12: float = 0.0
    c21: float = 0.0

    def __post_init__(self):
        for name in ("h11", "h12", "h21", "h22"):
            arr = np.array(getattr(self, name), dtype=np.complex128)
            if arr.ndim != 2:
                raise ShapeError(f"{name} must be a matrix")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        for name in ("m1", "n1", "m2", "n2"):
            object.__setattr__(self, name, int(getattr(self, name)))
        for name in ("rho11", "rho12", "rho21", "rho22", "c12", "c21"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def shape_of(self, link: str) -> tuple[int, int]:
        """Expected ``(rows, cols)`` of ``h<link>``."""
        i, j = int(link[0]), int(link[1])
        return (self.n1 if j == 1 else self.n2, self.m1 if i == 1 else self.m2)

    def matrix(self, link: str) -> np.ndarray:
        return getattr(self, "h" + link)

    def rho(self, link: str) -> float:
        return getattr(self, "rho" + link)

    def with_backhaul(self, c12: float, c21: float) -> "ChannelInstance":
        return replace(self, c12=c12, c21=c21)

    def __eq__(self, other):
        if not isinstance(other, ChannelInstance):
            return NotImplemented
        return to_dict(self) == to_dict(other)


@dataclass(frozen=True)
class ChannelSeedSpec:
    """Recipe for a random instance: antenna counts, gains, backhaul, seed."""

    m1: int
    n1: int
    m2: int
    n2: int
    seed: int = 0
    rho: dict = field(default_factory=lambda: {k: 1.0 for k in _LINKS})
    c12: float = 0.0
    c21: float = 0.0

    @classmethod
    def from_exponents(cls, m1, n1, m2, n2, snr, alpha, beta, seed=0):
        """Direct links at ``snr``, cross links at ``snr**alpha``, backhaul ``beta log2 snr``."""
        cross = float(snr) ** alpha
        rho = {"11": float(snr), "22": float(snr), "12": cross, "21": cross}
        cap = beta * math.log2(snr)
        return cls(m1, n1, m2, n2, seed, rho, cap, cap)


def complex_normal_words(seed: int, count: int) -> np.ndarray:
    """``count`` CN(0, 1) samples from the documented Philox/Box-Muller stream."""
    if not 0 <= seed < 2**64:
        raise InvalidSpec("seed must be a 64-bit unsigned integer")
    bitgen = np.random.Philox(key=int(seed), counter=0)
    words = bitgen.random_raw(2 * count).reshape(count, 2)
    u1 = ((words[:, 0] >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53
    u2 = (words[:, 1] >> np.uint64(11)).astype(np.float64) * 2.0**-53
    radius = np.sqrt(-2.0 * np.log(u1)) / math.sqrt(2.0)
    return radius * np.exp(2j * math.pi * u2)


def generate(spec: ChannelSeedSpec) -> ChannelInstance:
    """Draw i.i.d. CN(0, 1) channel matrices for ``spec``."""
    dims = (spec.m1, spec.n1, spec.m2, spec.n2)
    if any(int(d) != d or d < 1 for d in dims):
        raise InvalidSpec(f"antenna counts must be positive integers, got {dims}")
    if set(spec.rho) != set(_LINKS):
        raise InvalidSpec("rho must have keys 11, 12, 21, 22")
    m1, n1, m2, n2 = (int(d) for d in dims)
    shapes = [(n1, m1), (n2, m1), (n1, m2), (n2, m2)]
    draws = complex_normal_words(spec.seed, sum(r * c for r, c in shapes))
    mats, pos = [], 0
    for r, c in shapes:
        mats.append(draws[pos : pos + r * c].reshape(r, c))
        pos += r * c
    ch = ChannelInstance(
        m1, n1, m2, n2, *mats,
        rho11=spec.rho["11"], rho12=spec.rho["12"],
        rho21=spec.rho["21"], rho22=spec.rho["22"],
        c12=spec.c12, c21=spec.c21,
    )
    try:
        _check_params(ch)
    except NegativeParameter as exc:
        raise InvalidSpec(str(exc)) from exc
    return ch


def _check_params(ch: ChannelInstance) -> None:
    for name in ("rho11", "rho12", "rho21", "rho22"):
        v = getattr(ch, name)
        if math.isnan(v) or v < 0 or math.isinf(v):
            raise NegativeParameter(f"{name} = {v} must be finite and nonnegative")
    for name in ("c12", "c21"):
        v = getattr(ch, name)
        if math.isnan(v) or v < 0:
            raise NegativeParameter(f"{name} = {v} must be nonnegative")


def validate(ch: ChannelInstance) -> list[str]:
    """Check shapes and signs; return warnings for ill-conditioned matrices.

    Raises
    ------
    ShapeError, NegativeParameter
    """
    for name in ("m1", "n1", "m2", "n2"):
        if getattr(ch, name) < 1:
            raise ShapeError(f"{name} must be at least 1")
    for link in _LINKS:
        got = ch.matrix(link).shape
        want = ch.shape_of(link)
        if got != want:
            raise ShapeError(f"h{link} has shape {got}, expected {want}")
        if not np.all(np.isfinite(ch.matrix(link))):
            raise ShapeError(f"h{link} has non-finite entries")
    _check_params(ch)
    warnings = []
    for link in _LINKS:
        h = ch.matrix(link)
        s = np.linalg.svd(h, compute_uv=False)
        cond = math.inf if s[-1] == 0 else s[0] / s[-1]
        if s[0] > 0 and cond > COND_WARN:
            warnings.append(f"h{link} condition number {cond:.3g} exceeds {COND_WARN:g}")
    return warnings


def siso_from_scalars(snr1, snr2, inr1, inr2, c12, c21) -> ChannelInstance:
    """Scalar channel with unit gains and ``rho`` set from SNR/INR values.

    ``INR1`` is the interference seen at receiver 1, hence ``rho21``.
    """
    one = np.ones((1, 1))
    ch = ChannelInstance(
        1, 1, 1, 1, one, one, one, one,
        rho11=snr1, rho12=inr2, rho21=inr1, rho22=snr2, c12=c12, c21=c21,
    )
    _check_params(ch)
    return ch


def swap_users(ch: ChannelInstance) -> ChannelInstance:
    """Relabel user 1 as user 2 and vice versa."""
    return ChannelInstance(
        ch.m2, ch.n2, ch.m1, ch.n1,
        h11=ch.h22, h12=ch.h21, h21=ch.h12, h22=ch.h11,
        rho11=ch.rho22, rho12=ch.rho21, rho21=ch.rho12, rho22=ch.rho11,
        c12=ch.c21, c21=ch.c12,
    )


def _enc_real(x: float):
    return "inf" if math.isinf(x) and x > 0 else x


def _dec_real(x) -> float:
    if x == "inf":
        return math.inf
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ChannelError(f"expected a number or 'inf', got {x!r}")
    return float(x)


def to_dict(ch: ChannelInstance) -> dict:
    out = {"m1": ch.m1, "n1": ch.n1, "m2": ch.m2, "n2": ch.n2}
    for link in _LINKS:
        out["h" + link] = [
            [[float(z.real), float(z.imag)] for z in row] for row in ch.matrix(link)
        ]
    out["rho"] = {link: ch.rho(link) for link in _LINKS}
    out["c"] = {"12": _enc_real(ch.c12), "21": _enc_real(ch.c21)}
    return out


def from_dict(d: dict) -> ChannelInstance:
    """Parse the channel JSON schema; raises :class:`ChannelError` subclasses."""
    try:
        dims = [d[k] for k in ("m1", "n1", "m2", "n2")]
        if any(isinstance(x, bool) or not isinstance(x, int) for x in dims):
            raise ShapeError("antenna counts must be integers")
        mats = []
        for link in _LINKS:
            rows = d["h" + link]
            arr = np.array(
                [[complex(_dec_real(re), _dec_real(im)) for re, im in row] for row in rows],
                dtype=np.complex128,
            )
            if arr.ndim != 2:
                raise ShapeError(f"h{link} is not a rectangular matrix")
            mats.append(arr)
        rho = {k: _dec_real(d["rho"][k]) for k in _LINKS}
        c = {k: _dec_real(d["c"][k]) for k in ("12", "21")}
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ChannelError):
            raise
        raise ChannelError(f"malformed channel description: {exc}") from exc
    ch = ChannelInstance(
        *dims, *mats,
        rho11=rho["11"], rho12=rho["12"], rho21=rho["21"], rho22=rho["22"],
        c12=c["12"], c21=c["21"],
    )
    validate(ch)
    return ch


def to_json(ch: ChannelInstance) -> str:
    return json.dumps(to_dict(ch), indent=1, allow_nan=False) + "\n"


def from_json(text: str) -> ChannelInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ChannelError("channel JSON must be an object")
    return from_dict(data)
