import copy
import json
import logging
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, List, Optional

import yaml
from packaging import version
from pydantic import BaseModel, Field, ValidationError, model_validator

from polarstar.exceptions import ConfigurationError

logger = logging.getLogger("polarstar")

DEFAULTS_FILE = "polarstar.yml"

PATTERN_ALIASES = {
    "uniform": "Uniform",
    "perm": "RandomRouterPermutation",
    "permutation": "RandomRouterPermutation",
    "endpoint-perm": "RandomEndpointPermutation",
    "shuffle": "BitShuffle",
    "reverse": "BitReverse",
    "adversarial": "AdversarialSupernode",
}

SCHEME_ALIASES = {
    "min": "MIN",
    "mmin": "M_MIN",
    "m_min": "M_MIN",
    "m-min": "M_MIN",
    "ugal": "UGAL",
}

TOPOLOGY_KINDS = ("polarstar", "er", "iq", "paley", "dragonfly", "hyperx", "fattree")


def deep_merge(user: Any, defaults: Any) -> Any:
    """
    Deep merge defaults into user, adding only missing keys.
    User values take precedence, defaults fill the gaps.
    """
    if not isinstance(user, dict) or not isinstance(defaults, dict):
        return user

    result = user.copy()
    for key, value in defaults.items():
        if key not in result:
            result[key] = copy.deepcopy(value)
        elif isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = deep_merge(result[key], value)

    return result


@lru_cache(1)
def _load_packaged_defaults() -> dict:
    text = resources.files("polarstar").joinpath(DEFAULTS_FILE).read_text("utf-8")
    data = yaml.safe_load(text)
    if not isinstance(data, dict):
        raise ConfigurationError(f"{DEFAULTS_FILE} must contain a mapping")
    return data


def load_defaults() -> dict:
    """Return a private copy of the packaged defaults."""
    return copy.deepcopy(_load_packaged_defaults())


def default_seed() -> int:
    return int(_load_packaged_defaults()["defaults"]["seed"])


def schema_version() -> str:
    return str(_load_packaged_defaults()["export"]["schema_version"])


def check_schema_version(found: Optional[str]) -> None:
    """Accept envelopes written by this or an older major schema."""
    if found is None:
        raise ConfigurationError("JSON envelope has no schema_version")
    try:
        theirs = version.parse(str(found))
    except version.InvalidVersion as e:
        raise ConfigurationError(f"Invalid schema_version {found!r}: {e}")
    ours = version.parse(schema_version())
    if theirs.major > ours.major:
        raise ConfigurationError(
            f"Envelope schema {theirs} is newer than supported schema {ours}"
        )


def _normalise(value: str, aliases: dict, what: str) -> str:
    canonical = set(aliases.values())
    if value in canonical:
        return value
    key = str(value).strip().lower()
    if key in aliases:
        return aliases[key]
    raise ValueError(f"Unknown {what} {value!r}")


class TopologySpec(BaseModel):
    """Recipe for one topology, as given on the command line or in a campaign."""

    kind: str = "polarstar"
    q: Optional[int] = None
    supernode: str = "iq"
    dprime: Optional[int] = None
    radix: Optional[int] = None
    a: Optional[int] = None
    h: Optional[int] = None
    S: Optional[int] = None
    L: Optional[int] = None
    levels: Optional[int] = None
    p: Optional[int] = None
    endpoints: Optional[int] = None

    @model_validator(mode="before")
    @classmethod
    def normalise_kind(cls, values):
        if isinstance(values, dict):
            values = dict(values)
            kind = str(values.get("kind", values.get("topology", "polarstar")))
            values.pop("topology", None)
            values["kind"] = kind.lower()
            if values["kind"] not in TOPOLOGY_KINDS:
                raise ValueError(f"Unknown topology kind {kind!r}")
            if "supernode" in values and values["supernode"] is not None:
                values["supernode"] = str(values["supernode"]).lower()
        return values

    def label(self) -> str:
        if self.kind == "polarstar":
            return f"PS-{self.supernode}(q={self.q},d'={self.dprime})"
        if self.kind == "dragonfly":
            return f"DF(a={self.a},h={self.h})"
        if self.kind == "hyperx":
            return f"HX(S={self.S},L={self.L})"
        if self.kind == "fattree":
            return f"FT(n={self.levels},p={self.p})"
        return f"{self.kind}(q={self.q},d'={self.dprime})"


class SimConfig(BaseModel):
    topology: Optional[TopologySpec] = None
    endpoints_per_router: Optional[int] = None
    packet_size: int = Field(4, ge=1)
    buffer_depth: int = Field(128, ge=1)
    num_vcs: int = Field(4, ge=1)
    warmup_cycles: int = Field(1000, ge=0)
    measure_cycles: int = Field(2000, ge=2)
    drain_cycles: int = Field(20000, ge=0)
    watchdog_cycles: int = Field(5000, ge=1)
    saturation_growth: float = Field(0.10, ge=0.0)
    load: float = Field(0.1, gt=0.0, le=1.0)
    seed: int = 20230414
    ugal_threshold: float = Field(0.25, ge=0.0, le=1.0)
    ugal_samples: int = Field(4, ge=1)

    @model_validator(mode="after")
    def check_buffers(self):
        if self.buffer_depth < self.num_vcs:
            raise ValueError("buffer_depth must give every VC at least one slot")
        return self

    @property
    def vc_depth(self) -> int:
        return self.buffer_depth // self.num_vcs


class AnalysisConfig(BaseModel):
    bisection_starts: int = Field(16, ge=1)
    bisection_exact_limit: int = Field(16, ge=0)
    fault_trials: int = Field(100, ge=1)
    fault_step: float = Field(0.01, gt=0.0, le=1.0)
    verify_full_limit: int = Field(6000, ge=1)
    verify_samples: int = Field(256, ge=1)


class CampaignConfig(BaseModel):
    topologies: List[TopologySpec]
    loads: List[float]
    patterns: List[str]
    schemes: List[str]
    seeds: List[int]
    workers: int = Field(1, ge=1)
    simulation: SimConfig = SimConfig()

    @model_validator(mode="before")
    @classmethod
    def normalise_names(cls, values):
        if isinstance(values, dict):
            values = dict(values)
            values["patterns"] = [
                _normalise(p, PATTERN_ALIASES, "pattern")
                for p in values.get("patterns") or []
            ]
            values["schemes"] = [
                _normalise(s, SCHEME_ALIASES, "routing scheme")
                for s in values.get("schemes") or []
            ]
        return values


def normalise_pattern(name: str) -> str:
    try:
        return _normalise(name, PATTERN_ALIASES, "pattern")
    except ValueError as e:
        raise ConfigurationError(str(e))


def normalise_scheme(name: str) -> str:
    try:
        return _normalise(name, SCHEME_ALIASES, "routing scheme")
    except ValueError as e:
        raise ConfigurationError(str(e))


def sim_config(**overrides) -> SimConfig:
    """Build a SimConfig from the packaged defaults plus keyword overrides."""
    defaults = load_defaults()
    merged = deep_merge(
        {k: v for k, v in overrides.items() if v is not None},
        {
            **defaults["simulation"],
            "seed": defaults["defaults"]["seed"],
            "ugal_threshold": defaults["routing"]["ugal_threshold"],
            "ugal_samples": defaults["routing"]["ugal_samples"],
        },
    )
    try:
        return SimConfig(**merged)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid simulation configuration:\n{e}")


def analysis_config(**overrides) -> AnalysisConfig:
    merged = deep_merge(
        {k: v for k, v in overrides.items() if v is not None},
        load_defaults()["analysis"],
    )
    try:
        return AnalysisConfig(**merged)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid analysis configuration:\n{e}")


def load_campaign(path) -> CampaignConfig:
    """Read a YAML or JSON campaign file and merge it onto the defaults."""
    path = Path(path)
    try:
        text = path.read_text("utf-8")
    except OSError as e:
        raise ConfigurationError(f"Could not read campaign file {path}: {e}")
    try:
        if path.suffix == ".json":
            data = json.loads(text)
        else:
            data = yaml.safe_load(text)
    except (yaml.YAMLError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"Could not parse campaign file {path}: {e}")
    if not isinstance(data, dict):
        raise ConfigurationError(f"Campaign file {path} must contain a mapping")
    return campaign_from_dict(data)


def campaign_from_dict(data: dict) -> CampaignConfig:
    defaults = load_defaults()
    base = dict(defaults["campaign"])
    base["seeds"] = base.get("seeds") or [defaults["defaults"]["seed"]]
    merged = deep_merge(data, base)
    simulation = deep_merge(
        merged.get("simulation") or {},
        {
            **defaults["simulation"],
            "ugal_threshold": defaults["routing"]["ugal_threshold"],
            "ugal_samples": defaults["routing"]["ugal_samples"],
        },
    )
    merged["simulation"] = simulation
    logger.debug("Campaign configuration after merge: %s", merged)
    try:
        return CampaignConfig(**merged)
    except (ValidationError, ValueError) as e:
        raise ConfigurationError(f"Invalid campaign configuration:\n{e}")
