"""Resistive model of the Alice-wire-Bob loop with an optional T-attenuator.

The attenuator is a symmetric pad: one series element on each side of a
shunt leg.  The shunt is what matters for security: it splits the single
Kirchhoff loop into two coupled loops, so the currents measured at the two
ends stop being equal and their mean squares become resistor-dependent.

Closed-form mean-square currents neglect the small series elements (they
are tiny against the loop resistances); the instantaneous solver keeps them
exactly, which lets tests measure the size of that approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .noise import NoiseSpec


@dataclass(frozen=True)
class AttenuatorConfig:
    """Symmetric T-pad: ``r_series`` on each side of the ``r_shunt`` leg.

    ``r_shunt=None`` means there is no shunt leg at all, so the loop stays
    single.  The open branch is never encoded as a float infinity.
    """

    r_series: float
    r_shunt: float | None

    def __post_init__(self) -> None:
        if self.r_series < 0:
            raise ValueError("pad r_series must be >= 0")
        if self.r_shunt is not None and self.r_shunt <= 0:
            raise ValueError("pad r_shunt must be > 0 (use None for no shunt)")


@dataclass(frozen=True)
class NetworkConfig:
    """End resistors and pad of one loop instantiation.

    ``r_alice``/``r_bob`` are the resistors currently connected at the two
    ends; ``pad=None`` is the ideal lossless single loop.
    """

    r_alice: float
    r_bob: float
    pad: AttenuatorConfig | None = None
    label: str = ""

    def __post_init__(self) -> None:
        if self.r_alice <= 0:
            raise ValueError("r_alice must be > 0")
        if self.r_bob <= 0:
            raise ValueError("r_bob must be > 0")

    @property
    def r_series(self) -> float:
        return self.pad.r_series if self.pad is not None else 0.0

    @property
    def r_shunt(self) -> float | None:
        return self.pad.r_shunt if self.pad is not None else None

    @property
    def single_loop(self) -> bool:
        """True when no shunt leg exists and the end currents are forced equal."""
        return self.r_shunt is None

    def with_resistors(self, r_alice: float, r_bob: float) -> "NetworkConfig":
        return replace(self, r_alice=r_alice, r_bob=r_bob)


@dataclass(frozen=True)
class CurrentMoments:
    """Mean-square end currents and their imbalance ratio (>= 1)."""

    ms_alice: float
    ms_bob: float
    ratio: float


@dataclass(frozen=True)
class InstantState:
    """One instantaneous solution: the two end currents and the shunt-node voltage."""

    i_alice: float
    i_bob: float
    v_node: float


def parallel_resistance(r1: float, r2: float | None) -> float:
    """r1*r2/(r1+r2); ``r2=None`` stands for an open branch and returns r1."""
    if r2 is None or math.isinf(r2):
        return r1
    if r1 == 0.0 or r2 == 0.0:
        return 0.0
    return r1 * r2 / (r1 + r2)


def _normalized_moments(net: NetworkConfig) -> tuple[float, float]:
    """Mean-square end currents per unit 4kTB, series elements neglected."""
    ra, rb, r2 = net.r_alice, net.r_bob, net.r_shunt
    if r2 is None:
        m = 1.0 / (ra + rb)
        return m, m

    def one_end(r_near: float, r_far: float) -> float:
        # own generator driving the near loop, plus the far generator's
        # contribution after the shunt current divider
        own = r_near / (r_near + parallel_resistance(r_far, r2)) ** 2
        divider = (1.0 / r_near) / (1.0 / r_near + 1.0 / r2)
        coupled = divider**2 * r_far / (r_far + parallel_resistance(r_near, r2)) ** 2
        return own + coupled

    return one_end(ra, rb), one_end(rb, ra)


def analytic_mean_square_currents(net: NetworkConfig, noise: NoiseSpec) -> CurrentMoments:
    """Closed-form mean-square currents at the two ends of the loop.

    Moments carry the 4kT_eff*B scale of ``noise``; the ratio is computed
    on the unscaled values, so it is bit-identical under any positive
    rescaling of the noise intensity.  With no pad both ends see the same
    4kT_eff*B/(r_alice+r_bob).
    """
    fa, fb = _normalized_moments(net)
    scale = noise.unit_scale
    return CurrentMoments(
        ms_alice=scale * fa,
        ms_bob=scale * fb,
        ratio=max(fa, fb) / min(fa, fb),
    )


def current_ratio(m: CurrentMoments) -> float:
    """Imbalance of the two mean-square end currents, always >= 1."""
    return max(m.ms_alice, m.ms_bob) / min(m.ms_alice, m.ms_bob)


def solve_network(u_alice, u_bob, net: NetworkConfig):
    """End currents and shunt-node voltage for instantaneous source values.

    Keeps the pad's series elements exactly.  Accepts scalars or numpy
    arrays (elementwise); returns ``(i_alice, i_bob, v_node)``.  Without a
    shunt the same current flows at both ends by construction.
    """
    ra = net.r_alice + net.r_series
    rb = net.r_bob + net.r_series
    r2 = net.r_shunt
    if r2 is None:
        i = (u_alice - u_bob) / (ra + rb)
        return i, i, u_alice - i * ra
    g_sum = 1.0 / ra + 1.0 / rb + 1.0 / r2
    v = (u_alice / ra + u_bob / rb) / g_sum
    return (u_alice - v) / ra, (v - u_bob) / rb, v


def solve_network_sample(u_alice: float, u_bob: float, net: NetworkConfig) -> InstantState:
    """Scalar convenience wrapper around :func:`solve_network`."""
    i_a, i_b, v = solve_network(u_alice, u_bob, net)
    return InstantState(i_alice=float(i_a), i_bob=float(i_b), v_node=float(v))


def design_tee_pad(loss_db: float, z0: float) -> AttenuatorConfig:
    """Symmetric T-pad with matched image impedance ``z0`` and the given loss.

    The returned pad presents an input impedance of exactly ``z0`` when its
    far port is terminated in ``z0``, and attenuates the terminated voltage
    by 10**(-loss_db/20).  Zero loss degenerates to a straight-through pad
    (no series elements, no shunt).
    """
    if loss_db < 0:
        raise ValueError("loss_db must be >= 0")
    if z0 <= 0:
        raise ValueError("z0 must be > 0")
    if loss_db == 0:
        return AttenuatorConfig(r_series=0.0, r_shunt=None)
    a = 10.0 ** (loss_db / 20.0)
    return AttenuatorConfig(
        r_series=z0 * (a - 1.0) / (a + 1.0),
        r_shunt=2.0 * z0 * a / (a * a - 1.0),
    )
