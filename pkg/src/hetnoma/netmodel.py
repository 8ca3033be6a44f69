"""Domain configuration types and elementary channel functions.

All SNR-like quantities are stored linear; dB conversion happens only at
the CLI/JSON boundary.  Configurations are frozen dataclasses: derive
variants with ``dataclasses.replace``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class TierConfig:
    power: float              # transmit power P_t, watts
    density: float            # BS intensity lambda_t, per m^2
    pathloss_exp: float       # alpha_t (> 2)
    coverage_radius: float    # Y_t, meters
    bias: float = 1.0         # association bias B_t
    noise_variance: float = 1.0  # sigma_t^2, watts


@dataclass(frozen=True)
class NomaConfig:
    num_users: int = 2
    power_factors: tuple[float, ...] = (0.8, 0.2)  # a_1 >= ... >= a_M, NOMA order
    target_rate: float = 0.03                      # R, bits/s/Hz
    receive_snr_m: float = 1.0                     # stored for fidelity; engines use rho_m * P_m
    receive_snr_f: float = 1.0                     # stored for fidelity; engines use rho_f * P_f
    bandwidth_fraction_m: float = 0.5              # MU bandwidth share; MU threshold is 2^(R/frac) - 1


@dataclass(frozen=True)
class SensingConfig:
    sense_threshold: float = 1.0   # T_B, linear SNR
    tail_eps: float = 0.01         # epsilon of the contention-radius tail condition
    guard_radius: float = 2.0      # r_g > 1, meters
    contention_radius: float | None = None  # r_c, derived; see geometry.contention_radius


@dataclass(frozen=True)
class ScenarioConfig:
    macro: TierConfig
    femto: TierConfig
    noma: NomaConfig = field(default_factory=NomaConfig)
    sensing: SensingConfig = field(default_factory=SensingConfig)
    transmit_snr_m: float = 10.0 ** 1.6  # rho_m, 16 dB
    transmit_snr_f: float = 1.0          # rho_f, 0 dB


def table1() -> ScenarioConfig:
    """Default scenario: the paper's network-parameter table plus the
    exponents of the offloading proposition (nu_m=3, nu_f=4) and unit noise.
    """
    return ScenarioConfig(
        macro=TierConfig(power=40.0, density=1e-4, pathloss_exp=3.0, coverage_radius=1000.0),
        femto=TierConfig(power=1.0, density=1e-3, pathloss_exp=4.0, coverage_radius=5.0),
    )


def path_loss(r: float, alpha: float) -> float:
    """Bounded path loss L(r) = 1 / (1 + r^alpha); strictly below 1 for r > 0."""
    if r < 0.0:
        raise ValueError(f"path_loss requires r >= 0, got {r}")
    return 1.0 / (1.0 + r ** alpha)


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    if x <= 0.0:
        raise ValueError(f"linear_to_db requires x > 0, got {x}")
    return 10.0 * math.log10(x)


def validate(cfg: ScenarioConfig) -> list[str]:
    """Return a list of invariant violations, each naming the offending field.

    An empty list means the configuration is valid.  Violations are data,
    not exceptions: callers decide how to react.
    """
    bad: list[str] = []
    for name, tier in (("macro", cfg.macro), ("femto", cfg.femto)):
        if not tier.power > 0.0:
            bad.append(f"{name}.power must be positive")
        if not tier.density > 0.0:
            bad.append(f"{name}.density must be positive")
        if not tier.pathloss_exp > 2.0:
            bad.append(f"{name}.pathloss_exp must exceed 2")
        if not tier.coverage_radius > 0.0:
            bad.append(f"{name}.coverage_radius must be positive")
        if tier.bias < 0.0:
            bad.append(f"{name}.bias must be non-negative")
        if not tier.noise_variance > 0.0:
            bad.append(f"{name}.noise_variance must be positive")

    noma = cfg.noma
    if noma.num_users < 1:
        bad.append("noma.num_users must be >= 1")
    if len(noma.power_factors) != noma.num_users:
        bad.append("noma.power_factors length must equal noma.num_users")
    if any(not 0.0 < a < 1.0 for a in noma.power_factors) and noma.power_factors != (1.0,):
        bad.append("noma.power_factors must each lie in (0, 1) (or be the single factor 1.0)")
    if any(a1 < a2 for a1, a2 in zip(noma.power_factors, noma.power_factors[1:])):
        bad.append("noma.power_factors not non-increasing")
    if sum(noma.power_factors) > 1.0 + 1e-12:
        bad.append("noma.power_factors must sum to at most 1")
    if not noma.target_rate > 0.0:
        bad.append("noma.target_rate must be positive")
    if not 0.0 < noma.bandwidth_fraction_m <= 1.0:
        bad.append("noma.bandwidth_fraction_m must lie in (0, 1]")

    sens = cfg.sensing
    if not sens.sense_threshold > 0.0:
        bad.append("sensing.sense_threshold must be positive")
    if not 0.0 < sens.tail_eps < 1.0:
        bad.append("sensing.tail_eps must lie in (0, 1)")
    if not sens.guard_radius > 1.0:
        bad.append("sensing.guard_radius must exceed 1")
    if sens.contention_radius is not None and not sens.contention_radius > 1.0:
        bad.append("sensing.contention_radius must exceed 1")

    if not cfg.transmit_snr_m > 0.0:
        bad.append("transmit_snr_m must be positive")
    if not cfg.transmit_snr_f > 0.0:
        bad.append("transmit_snr_f must be positive")
    return bad


# --- JSON configuration ---------------------------------------------------
# SNR/threshold fields accept either linear ("x": v) or dB ("x_db": v) form.

_DB_FIELDS = {"sense_threshold", "transmit_snr_m", "transmit_snr_f"}


def _pick(d: dict, key: str, default):
    if key in d and f"{key}_db" in d:
        raise ValueError(f"config field '{key}' given in both linear and dB form")
    if f"{key}_db" in d:
        return db_to_linear(float(d[f"{key}_db"]))
    if key in d:
        return float(d[key])
    return default


def _tier_from_dict(d: dict, defaults: TierConfig) -> TierConfig:
    return TierConfig(
        power=float(d.get("power", defaults.power)),
        density=float(d.get("density", defaults.density)),
        pathloss_exp=float(d.get("pathloss_exp", defaults.pathloss_exp)),
        coverage_radius=float(d.get("coverage_radius", defaults.coverage_radius)),
        bias=float(d.get("bias", defaults.bias)),
        noise_variance=float(d.get("noise_variance", defaults.noise_variance)),
    )


def config_from_dict(d: dict) -> ScenarioConfig:
    base = table1()
    noma_d = d.get("noma", {})
    sens_d = d.get("sensing", {})
    noma = NomaConfig(
        num_users=int(noma_d.get("num_users", base.noma.num_users)),
        power_factors=tuple(float(a) for a in noma_d.get("power_factors", base.noma.power_factors)),
        target_rate=float(noma_d.get("target_rate", base.noma.target_rate)),
        receive_snr_m=float(noma_d.get("receive_snr_m", base.noma.receive_snr_m)),
        receive_snr_f=float(noma_d.get("receive_snr_f", base.noma.receive_snr_f)),
        bandwidth_fraction_m=float(noma_d.get("bandwidth_fraction_m", base.noma.bandwidth_fraction_m)),
    )
    sensing = SensingConfig(
        sense_threshold=_pick(sens_d, "sense_threshold", base.sensing.sense_threshold),
        tail_eps=float(sens_d.get("tail_eps", base.sensing.tail_eps)),
        guard_radius=float(sens_d.get("guard_radius", base.sensing.guard_radius)),
        contention_radius=sens_d.get("contention_radius"),
    )
    return ScenarioConfig(
        macro=_tier_from_dict(d.get("macro", {}), base.macro),
        femto=_tier_from_dict(d.get("femto", {}), base.femto),
        noma=noma,
        sensing=sensing,
        transmit_snr_m=_pick(d, "transmit_snr_m", base.transmit_snr_m),
        transmit_snr_f=_pick(d, "transmit_snr_f", base.transmit_snr_f),
    )


def load_config(path: str) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def config_to_dict(cfg: ScenarioConfig) -> dict:
    def tier(t: TierConfig) -> dict:
        return {"power": t.power, "density": t.density, "pathloss_exp": t.pathloss_exp,
                "coverage_radius": t.coverage_radius, "bias": t.bias,
                "noise_variance": t.noise_variance}

    return {
        "macro": tier(cfg.macro),
        "femto": tier(cfg.femto),
        "noma": {
            "num_users": cfg.noma.num_users,
            "power_factors": list(cfg.noma.power_factors),
            "target_rate": cfg.noma.target_rate,
            "receive_snr_m": cfg.noma.receive_snr_m,
            "receive_snr_f": cfg.noma.receive_snr_f,
            "bandwidth_fraction_m": cfg.noma.bandwidth_fraction_m,
        },
        "sensing": {
            "sense_threshold": cfg.sensing.sense_threshold,
            "tail_eps": cfg.sensing.tail_eps,
            "guard_radius": cfg.sensing.guard_radius,
            "contention_radius": cfg.sensing.contention_radius,
        },
        "transmit_snr_m": cfg.transmit_snr_m,
        "transmit_snr_f": cfg.transmit_snr_f,
    }


def mu_sinr_threshold(cfg: ScenarioConfig, rate: float | None = None) -> float:
    """MU outage threshold phi = 2^(R / bandwidth_fraction_m) - 1."""
    r = cfg.noma.target_rate if rate is None else rate
    return 2.0 ** (r / cfg.noma.bandwidth_fraction_m) - 1.0


def set_axis(cfg: ScenarioConfig, axis: str, value: float) -> ScenarioConfig:
    """Return a copy of ``cfg`` with one swept field replaced.

    ``axis`` is a dotted ScenarioConfig path ("femto.density",
    "noma.target_rate", "transmit_snr_f") with an optional ``_db`` suffix on
    SNR-like leaves; the virtual axis "transmit_snr_db" sets both tiers'
    transmit SNR at once.
    """
    db = False
    if axis.endswith("_db"):
        axis, db = axis[:-3], True
    if db:
        value = db_to_linear(value)
    if axis == "transmit_snr":
        return replace(cfg, transmit_snr_m=value, transmit_snr_f=value)
    parts = axis.split(".")
    if len(parts) == 1:
        if not hasattr(cfg, parts[0]):
            raise KeyError(f"unknown axis '{axis}'")
        return replace(cfg, **{parts[0]: value})
    if len(parts) == 2:
        sub = getattr(cfg, parts[0], None)
        if sub is None or not hasattr(sub, parts[1]):
            raise KeyError(f"unknown axis '{axis}'")
        return replace(cfg, **{parts[0]: replace(sub, **{parts[1]: value})})
    raise KeyError(f"unknown axis '{axis}'")
