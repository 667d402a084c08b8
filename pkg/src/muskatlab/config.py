"""INI run configuration: typed, range-checked, unknown keys rejected.

Sections and keys (all optional)::

    [grid]        L, N
    [sim]         cutoff, s, dt, t_end, stepper, profile, amplitude, mode, seed, beta, k_max,
                  output_every, nonlinear, blowup_factor
    [ensemble]    seed, count, beta, k_max, amplitude, localization, moments
    [check]       ids, epsilon, nu, delta, besov_s, sigma, theta, hilbert_nu, growth_limit
    [convergence] cutoffs, s_prime
    [verify]      rule_perturbation
    [output]      dir
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field, replace

from .errors import MuskatLabError
from .estimator import CHECKS, CampaignConfig, EnsembleSpec
from .estimator import validate_params
from .evolution import SimConfig


class ConfigError(MuskatLabError):
    pass


def _float(v: str) -> float:
    v = v.strip().lower()
    if v in ("inf", "infinity", "none"):
        return math.inf
    if v == "pi":
        return math.pi
    return float(v)


def _int(v: str) -> int:
    f = float(v)
    if f != int(f):
        raise ValueError(f"expected an integer, got {v!r}")
    return int(f)


def _bool(v: str) -> bool:
    low = v.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {v!r}")


def _list(conv):
    def parse(v: str):
        return tuple(conv(item) for item in re.split(r"[,\s]+", v.strip()) if item)
    return parse


SCHEMA = {
    "grid": {"L": _float, "N": _int},
    "sim": {"cutoff": _float, "s": _float, "dt": _float, "t_end": _float, "stepper": str,
            "profile": str, "amplitude": _float, "mode": _int, "seed": _int, "beta": _float, "k_max": _float,
            "output_every": _int, "nonlinear": _bool, "blowup_factor": _float},
    "ensemble": {"seed": _int, "count": _int, "beta": _float, "k_max": _float,
                 "amplitude": _float, "localization": str, "moments": _int},
    "check": {"ids": _list(str), "epsilon": _float, "nu": _float, "delta": _float,
              "besov_s": _float, "sigma": _float, "theta": _float, "hilbert_nu": _float,
              "growth_limit": _float},
    "convergence": {"cutoffs": _list(_float), "s_prime": _float},
    "verify": {"rule_perturbation": _float},
    "output": {"dir": str},
}


@dataclass(frozen=True)
class RunConfig:
    sim: SimConfig = SimConfig()
    campaign: CampaignConfig = CampaignConfig()
    cutoffs: tuple = (32.0, 64.0, 128.0, 256.0)
    s_prime: float = 0.5
    rule_perturbation: float = 0.0
    output_dir: str | None = None
    source: str | None = None
    raw: dict = field(default_factory=dict)

    def with_seed(self, seed: int) -> "RunConfig":
        ens = replace(self.campaign.ensemble, seed=seed)
        return replace(self, sim=replace(self.sim, seed=seed),
                       campaign=replace(self.campaign, ensemble=ens))


def _line_numbers(text: str) -> dict:
    """(section, key) -> 1-based line number, for error messages."""
    where, section = {}, None
    for i, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s[0] in "#;":
            continue
        m = re.match(r"\[(.+)\]$", s)
        if m:
            section = m.group(1).strip()
            where[(section, None)] = i
            continue
        key = re.split(r"[=:]", s, maxsplit=1)[0].strip()
        where[(section, key)] = i
    return where


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    lines = _line_numbers(text)

    def where(section, key=None):
        return f"{source}:{lines.get((section, key), '?')}"

    values: dict = {}
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(f"{where(section)}: unknown section [{section}]")
        for key, raw in parser.items(section):
            conv = SCHEMA[section].get(key)
            if conv is None:
                raise ConfigError(f"{where(section, key)}: unknown key {key!r} in [{section}]")
            try:
                values[(section, key)] = conv(raw)
            except ValueError as exc:
                raise ConfigError(f"{where(section, key)}: bad value for {key}: {exc}") from None

    def pick(section, mapping):
        return {dst: values[(section, src)] for src, dst in mapping.items()
                if (section, src) in values}

    grid = pick("grid", {"L": "half_length", "N": "sample_count"})
    try:
        sim_kwargs = dict(grid)
        sim_kwargs.update(pick("sim", {k: k for k in SCHEMA["sim"]}))
        if "dt" in sim_kwargs and math.isinf(sim_kwargs["dt"]):
            sim_kwargs["dt"] = None
        sim = SimConfig(**sim_kwargs)
    except MuskatLabError as exc:
        raise ConfigError(f"{where('sim')}: {exc}") from None
    try:
        ens = EnsembleSpec(**pick("ensemble", {k: k for k in SCHEMA["ensemble"]}))
    except MuskatLabError as exc:
        raise ConfigError(f"{where('ensemble')}: {exc}") from None
    check = pick("check", {k: k for k in SCHEMA["check"]})
    ids = check.pop("ids", CampaignConfig.checks)
    for cid in ids:
        if cid not in CHECKS:
            raise ConfigError(f"{where('check', 'ids')}: unknown check id {cid!r}")
    growth = check.pop("growth_limit", 2.0)
    for cid in ids:
        try:
            validate_params(cid, check)
        except MuskatLabError as exc:
            raise ConfigError(f"{where('check')}: {exc}") from None
    campaign_grid = dict(grid)
    campaign_grid.setdefault("sample_count", CampaignConfig.sample_count)
    campaign = CampaignConfig(ensemble=ens, checks=tuple(ids), params=check,
                              growth_limit=growth, **campaign_grid)
    conv = pick("convergence", {"cutoffs": "cutoffs", "s_prime": "s_prime"})
    cutoffs = conv.get("cutoffs", RunConfig.cutoffs)
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])) or any(c <= 0 for c in cutoffs):
        raise ConfigError(f"{where('convergence', 'cutoffs')}: cutoffs must be positive and increasing")
    s_prime = conv.get("s_prime", RunConfig.s_prime)
    if not s_prime < sim.s:
        raise ConfigError(f"{where('convergence', 's_prime')}: s_prime must be below s")
    pert = values.get(("verify", "rule_perturbation"), 0.0)
    if pert < 0:
        raise ConfigError(f"{where('verify', 'rule_perturbation')}: must be >= 0")
    return RunConfig(sim=sim, campaign=campaign, cutoffs=tuple(cutoffs), s_prime=s_prime,
                     rule_perturbation=pert, output_dir=values.get(("output", "dir")),
                     source=source, raw={f"{s}.{k}": v for (s, k), v in values.items()})


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, str(path))
