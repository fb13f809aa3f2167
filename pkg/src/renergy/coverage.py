"""Monte Carlo downlink outage for stations powered by a random energy field.

The typical station sits at the window center of a toroidal arena. Each trial
draws one energy field, the station's power budget, a Poisson number of users
uniform in the station's hexagonal cell, and their fading marks; both power
allocation schemes are then evaluated on the same draws:

* channel_independent - the budget is split equally over the cell's users; a
  user is in outage when its required power exceeds its share.
* inversion - users are granted their exact required powers in increasing
  order until the budget runs out; the remainder are in outage.

Outage is reported per user. Every tally field is an integer, so chunked or
multi-process runs merge into bit-identical totals, and each trial draws from
a stream keyed by its absolute index, making results independent of chunking.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .aggregation import (Distributed, _stations_per_aggregator, build_clusters,
                          certified_efficiency, clustered_window, delivered_power,
                          resolve_voltage)
from .bounds import (BoundInputs, aggregated_outage_bound, energy_shortfall_bound,
                     fading_tail_terms_equal_split, fading_tail_terms_inversion,
                     max_power_markov_bound, power_law_outage_bound,
                     total_outage_bound)
from .channel import (ChannelSpec, ChiSquaredFading, mean_inverse_fading,
                      required_power, sample_fading)
from .energy_field import EnergyFieldSpec, Kernel, draw_field, field_values
from .geometry import (Window, hex_cell_circumradius, nearest_site_indices,
                       sample_in_hex_cell, substream)
from .stats import wilson_ci


class Scheme(str, enum.Enum):
    CHANNEL_INDEPENDENT = "channel_independent"
    INVERSION = "inversion"


@dataclass(frozen=True)
class OnSite:
    """Each station consumes its own harvester's output directly."""


@dataclass(frozen=True)
class ScenarioConfig:
    field: EnergyFieldSpec
    channel: ChannelSpec
    lambda_b: float = 0.78
    lambda_u: float = 7.8
    theta: float = 8.0
    eta: float = 1.0
    scheme: Scheme = Scheme.CHANNEL_INDEPENDENT
    architecture: OnSite | Distributed = OnSite()
    estimator: str = "user_weighted"
    wrap: bool = True
    window_side: float | None = None

    def __post_init__(self) -> None:
        for name in ("lambda_b", "lambda_u", "theta"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.eta <= 1:
            raise ValueError("eta must lie in (0, 1]")
        if self.estimator not in ("user_weighted", "palm"):
            raise ValueError("estimator must be 'user_weighted' or 'palm'")
        if self.window_side is not None and self.window_side <= 0:
            raise ValueError("window_side must be positive")
        if isinstance(self.architecture, Distributed):
            if not self.wrap:
                raise ValueError("the distributed architecture needs wrap=True")
            _stations_per_aggregator(self.lambda_b, self.architecture.lambda_a)

    @property
    def mean_users_per_cell(self) -> float:
        return self.lambda_u / self.lambda_b


# Margin, in multiples of the kernel length scale, kept between the typical
# cell and a hard (non-wrapped) window edge so the missing field contribution
# at the center is below exp(-25).
_EDGE_GUARD_SCALES = 5.0


def resolve_window(cfg: ScenarioConfig) -> Window:
    """Simulation arena for a scenario.

    The default side covers ten station pitches and ten kernel length scales,
    whichever is larger. Distributed scenarios round the side up so the arena
    is commensurate with the aggregator lattice; non-wrapped on-site scenarios
    are padded with an edge guard instead.
    """
    side = cfg.window_side if cfg.window_side is not None else \
        max(10.0 / math.sqrt(cfg.lambda_b), 10.0 * math.sqrt(cfg.field.nu))
    if isinstance(cfg.architecture, Distributed):
        return clustered_window(cfg.architecture.lambda_a, side)
    if not cfg.wrap:
        side += 2.0 * _EDGE_GUARD_SCALES * math.sqrt(cfg.field.nu)
    return Window(side, side, wrap=cfg.wrap)


@dataclass
class TrialTally:
    """Integer event counts; adding tallies merges runs exactly."""

    trials: int = 0
    zero_user_trials: int = 0
    users: int = 0
    out_ci: int = 0
    persist_ci: int = 0
    out_inv: int = 0
    persist_inv: int = 0
    union_trials: int = 0
    gain_clamps: int = 0

    def __add__(self, other: "TrialTally") -> "TrialTally":
        return TrialTally(*(a + b for a, b in
                            zip(self._astuple(), other._astuple())))

    def _astuple(self) -> tuple[int, ...]:
        return (self.trials, self.zero_user_trials, self.users, self.out_ci,
                self.persist_ci, self.out_inv, self.persist_inv,
                self.union_trials, self.gain_clamps)


@dataclass(frozen=True)
class _DistributedState:
    positions: np.ndarray     # harvesters feeding the typical aggregator
    line_lengths: np.ndarray
    voltage: float
    stations_per_aggregator: int
    peak_station_power: float


def _distributed_state(cfg: ScenarioConfig, window: Window) -> _DistributedState:
    arch = cfg.architecture
    assign = build_clusters(arch.lambda_h, arch.lambda_a, window)
    center = np.asarray(window.center, dtype=float)[None, :]
    typical = int(nearest_site_indices(center, assign.aggregators.sites.points,
                                       window)[0][0])
    members = assign.assignment == typical
    positions = assign.harvesters.sites.points[members]
    lengths = assign.line_lengths[members]
    n_per = _stations_per_aggregator(cfg.lambda_b, arch.lambda_a)
    voltage = resolve_voltage(arch.line, cfg.eta, cfg.field.gamma, arch.lambda_a)
    peak_budget = np.full(len(lengths), cfg.eta * cfg.field.gamma)
    peak = delivered_power(peak_budget, lengths, voltage, arch.line.beta,
                           arch.line.mode, arch.line.tau)
    return _DistributedState(positions, lengths, voltage, n_per,
                             float(np.sum(peak)) / n_per)


def run_trials_chunk(cfg: ScenarioConfig, start: int, stop: int, seed: int) -> TrialTally:
    """Run trials [start, stop) of the given master seed and tally events for
    both schemes from shared draws."""
    if start < 0 or stop < start:
        raise ValueError("need 0 <= start <= stop")
    window = resolve_window(cfg)
    cell_radius = hex_cell_circumradius(cfg.lambda_b)
    mu = cfg.mean_users_per_cell
    palm = cfg.estimator == "palm"
    center = np.asarray(window.center, dtype=float)[None, :]
    dist_state = None
    if isinstance(cfg.architecture, Distributed):
        dist_state = _distributed_state(cfg, window)
        peak_power = dist_state.peak_station_power
        line = cfg.architecture.line
    else:
        peak_power = cfg.eta * cfg.field.gamma
    tally = TrialTally()
    clamp_box = [0]
    for t in range(start, stop):
        rng = substream(seed, t)
        real = draw_field(cfg.field, window, rng)
        if dist_state is None:
            power = cfg.eta * float(field_values(real, center)[0])
        else:
            budgets = cfg.eta * field_values(real, dist_state.positions)
            delivered = delivered_power(budgets, dist_state.line_lengths,
                                        dist_state.voltage, line.beta,
                                        line.mode, line.tau)
            power = float(np.sum(delivered)) / dist_state.stations_per_aggregator
        k = int(rng.poisson(mu))
        if palm:
            k += 1
        tally.trials += 1
        if k == 0:
            tally.zero_user_trials += 1
            continue
        tally.users += k
        pos = sample_in_hex_cell(cell_radius, k, rng)
        dist = np.maximum(np.hypot(pos[:, 0], pos[:, 1]), 1e-12)
        h = sample_fading(cfg.channel, rng, k)
        need = required_power(cfg.theta, dist, h, cfg.channel, clamp_box)
        tally.out_ci += int(np.count_nonzero(need > power / k))
        tally.persist_ci += int(np.count_nonzero(need > peak_power / k))
        csum = np.cumsum(np.sort(need))
        tally.out_inv += k - int(np.searchsorted(csum, power, side="right"))
        tally.persist_inv += k - int(np.searchsorted(csum, peak_power, side="right"))
        tally.union_trials += int(csum[-1] > power)
    tally.gain_clamps = clamp_box[0]
    return tally


@dataclass(frozen=True)
class OutageEstimate:
    """Per-user outage estimate for one scheme, with its decomposition into
    the component removable by more power (energy_random) and the component
    that persists at the peak budget (max_power)."""

    scheme: Scheme
    p_out: float
    ci_lo: float
    ci_hi: float
    n_trials: int
    n_users: int
    n_outages: int
    p_energy_random: float
    p_max_power: float
    union_rate: float | None
    zero_user_trials: int
    gain_clamps: int
    low_confidence: bool
    bound_values: Mapping[str, float]

    @property
    def ci_halfwidth(self) -> float:
        return 0.5 * (self.ci_hi - self.ci_lo)


def _bound_inputs(cfg: ScenarioConfig, tau: float = 1.0) -> BoundInputs | None:
    fading = cfg.channel.fading
    omega = fading.omega if isinstance(fading, ChiSquaredFading) else None
    try:
        e_h_inv = mean_inverse_fading(fading)
    except ValueError:
        e_h_inv = None
    arch = cfg.architecture
    distributed = isinstance(arch, Distributed)
    return BoundInputs(
        psi=cfg.field.psi, gamma_eta=cfg.field.gamma * cfg.eta, theta=cfg.theta,
        alpha=cfg.channel.alpha, lambda_b=cfg.lambda_b, lambda_u=cfg.lambda_u,
        e_h_inv=e_h_inv, omega=omega, tau=tau,
        lambda_h=arch.lambda_h if distributed else None,
        lambda_e=cfg.field.lambda_e, nu=cfg.field.nu)


def _certified_tau(cfg: ScenarioConfig) -> float:
    arch = cfg.architecture
    line = arch.line
    if line.mode == "tau_floor" or line.voltage is None:
        return line.tau
    return certified_efficiency(line.voltage, line.beta, cfg.eta,
                                cfg.field.gamma, arch.lambda_a)


def bound_values(cfg: ScenarioConfig, scheme: Scheme) -> dict[str, float]:
    """Closed-form bounds applicable to a scenario, keyed by stable names.

    Bounds whose hypotheses the scenario does not satisfy (wrong kernel,
    fading without the needed moments) are simply omitted.
    """
    vals: dict[str, float] = {}
    kernel = cfg.field.kernel
    if isinstance(cfg.architecture, Distributed):
        if kernel is Kernel.BOOLEAN_MAX_EXP:
            b = _bound_inputs(cfg, tau=_certified_tau(cfg))
            if b.e_h_inv is not None:
                vals["aggregated"] = aggregated_outage_bound(b)
        return vals
    b = _bound_inputs(cfg)
    if kernel is Kernel.BOOLEAN_MAX_EXP:
        if b.e_h_inv is not None:
            vals["energy_shortfall"] = energy_shortfall_bound(b)
            vals["max_power_markov"] = max_power_markov_bound(b)
            vals["total"] = total_outage_bound(b)
        if b.omega is not None and b.omega >= 2:
            terms = fading_tail_terms_equal_split(b) \
                if scheme is Scheme.CHANNEL_INDEPENDENT else fading_tail_terms_inversion(b)
            vals["tail_total"] = terms[0] + terms[1]
    elif kernel is Kernel.BOOLEAN_MAX_PLAW:
        if b.omega is not None and b.omega >= 2:
            t1, t2 = power_law_outage_bound(b)
            vals["power_law_total"] = t1 + t2
    return vals


def estimates_from_tally(cfg: ScenarioConfig, tally: TrialTally
                         ) -> dict[Scheme, OutageEstimate]:
    """Turn raw tallies into per-scheme estimates with Wilson intervals and
    attached bounds."""
    out: dict[Scheme, OutageEstimate] = {}
    users = tally.users
    for scheme in Scheme:
        if scheme is Scheme.CHANNEL_INDEPENDENT:
            n_out, n_persist = tally.out_ci, tally.persist_ci
            union = None
        else:
            n_out, n_persist = tally.out_inv, tally.persist_inv
            union = tally.union_trials / tally.trials if tally.trials else None
        if users > 0:
            p = n_out / users
            lo, hi = wilson_ci(n_out, users)
        else:
            p, lo, hi = 0.0, 0.0, 1.0
        out[scheme] = OutageEstimate(
            scheme=scheme, p_out=p, ci_lo=lo, ci_hi=hi,
            n_trials=tally.trials, n_users=users, n_outages=n_out,
            p_energy_random=(n_out - n_persist) / users if users else 0.0,
            p_max_power=n_persist / users if users else 0.0,
            union_rate=union, zero_user_trials=tally.zero_user_trials,
            gain_clamps=tally.gain_clamps, low_confidence=users < 100,
            bound_values=bound_values(cfg, scheme))
    return out


def simulate_both(cfg: ScenarioConfig, n_trials: int, seed: int
                  ) -> dict[Scheme, OutageEstimate]:
    """Serial run of n_trials; both schemes come from the same draws."""
    if n_trials <= 0:
        raise ValueError("n_trials must be positive")
    tally = run_trials_chunk(cfg, 0, n_trials, seed)
    return estimates_from_tally(cfg, tally)


def simulate_onsite(cfg: ScenarioConfig, n_trials: int, seed: int) -> OutageEstimate:
    """Outage estimate for an on-site scenario under its configured scheme."""
    if not isinstance(cfg.architecture, OnSite):
        raise ValueError("scenario architecture is not OnSite")
    return simulate_both(cfg, n_trials, seed)[cfg.scheme]


def with_scheme(cfg: ScenarioConfig, scheme: Scheme) -> ScenarioConfig:
    return replace(cfg, scheme=scheme)
