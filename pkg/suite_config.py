"""
suite_config.py — Configuration for the arboru verification suite

This module centralizes everything `run_suite` needs:
  - Suite mode and seed
  - Search radii and orbit depths
  - Per-battery sample budgets
  - The list of groups F to test
"""

import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

from dotenv import dotenv_values, load_dotenv

from config import (
    BIPARTITION_RADIUS,
    CLASSIFY_SAMPLES,
    CONTRACTION_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_SUITE_GROUPS,
    DENSITY_BALL_RADIUS,
    GENERATION_SAMPLES,
    GROUP_CATALOG,
    LAW_BALL_RADIUS,
    LAW_SAMPLES,
    MAUTNER_MAX_INDEX,
    MAUTNER_SAMPLES,
    MAX_DEGREE,
    MIN_DEGREE,
    ORACLE_DEPTH,
    ORBIT_DEPTH,
    SAMPLE_DEPTH,
    STATE_FILE_PATH,
    SUITE_WORKERS,
    TITS_BALL_RADIUS,
    TITS_SAMPLES,
    WITNESS_RADIUS,
)
from errors import ConfigError, ParseError
from permgroup import PermGroup, group_from_generators, parse_generators

load_dotenv()

logger = logging.getLogger(__name__)


# ═══════════════════════════════════════════════════════════════════════════════
# SUITE MODES
# ═══════════════════════════════════════════════════════════════════════════════

class SuiteMode(Enum):
    """Budget presets for a verify run."""
    DEFAULT = "default"            # Every battery at desk-scale budgets
    QUICK = "quick"                # Smoke run, a handful of samples each
    ACCEPTANCE = "acceptance"      # Full acceptance budgets


# ═══════════════════════════════════════════════════════════════════════════════
# SUITE SECTIONS
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass
class SuiteSettings:
    """Run-wide settings."""

    mode: SuiteMode = SuiteMode.DEFAULT
    seed: int = DEFAULT_SEED
    workers: int = SUITE_WORKERS            # >1 fans groups out to processes
    state_path: str = STATE_FILE_PATH

    # Exact-search radii
    law_radius: int = LAW_BALL_RADIUS
    tits_radius: int = TITS_BALL_RADIUS
    witness_radius: int = WITNESS_RADIUS
    bipartition_radius: int = BIPARTITION_RADIUS
    density_radius: int = DENSITY_BALL_RADIUS

    # Orbit growth
    orbit_depth: int = ORBIT_DEPTH          # N in o_1..o_N
    oracle_depth: int = ORACLE_DEPTH        # union-find cross-check up to here


@dataclass
class SampleBudgets:
    """Random samples drawn per battery, split evenly over the groups."""

    law: int = LAW_SAMPLES
    classify: int = CLASSIFY_SAMPLES
    tits: int = TITS_SAMPLES
    contraction: int = CONTRACTION_SAMPLES
    generation: int = GENERATION_SAMPLES
    mautner: int = MAUTNER_SAMPLES
    mautner_max_index: int = MAUTNER_MAX_INDEX
    round_trip: int = 20
    depth: int = SAMPLE_DEPTH               # hull bound of sampled portraits

    def share(self, total: int, groups: int) -> int:
        """Per-group share of a battery budget (at least 1 when total > 0)."""
        if total <= 0 or groups <= 0:
            return 0
        return max(1, -(-total // groups))


@dataclass
class GroupSpec:
    """A group F given by degree and ';'-separated generator cycles."""

    name: str
    degree: int
    generators: str

    def build(self) -> PermGroup:
        """
        Raises:
            ConfigError: the generators do not parse or the degree is out of range.
        """
        try:
            gens = parse_generators(self.generators, self.degree)
            return group_from_generators(self.degree, gens, self.name)
        except ParseError as e:
            raise ConfigError(f"group {self.name}: generators {self.generators!r}: {e}") from e
        except ValueError as e:
            raise ConfigError(f"group {self.name}: {e}") from e

    @classmethod
    def from_catalog(cls, name: str) -> "GroupSpec":
        if name not in GROUP_CATALOG:
            raise ConfigError(f"unknown group {name!r}; known: {', '.join(sorted(GROUP_CATALOG))}")
        degree, gens = GROUP_CATALOG[name]
        return cls(name, degree, gens)


# ═══════════════════════════════════════════════════════════════════════════════
# COMPLETE SUITE CONFIGURATION
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass
class SuiteConfiguration:
    """Complete configuration for a verify run."""

    settings: SuiteSettings = field(default_factory=SuiteSettings)
    budgets: SampleBudgets = field(default_factory=SampleBudgets)
    groups: list[GroupSpec] = field(default_factory=list)

    def validate(self) -> list[str]:
        """Validate configuration and return list of issues."""
        issues = []

        names = [g.name for g in self.groups]
        for name in sorted({n for n in names if names.count(n) > 1}):
            issues.append(f"group {name} listed more than once")
        for g in self.groups:
            if not MIN_DEGREE <= g.degree <= MAX_DEGREE:
                issues.append(f"group {g.name}: degree {g.degree} outside {MIN_DEGREE}..{MAX_DEGREE}")
                continue
            try:
                parse_generators(g.generators, g.degree)
            except ParseError as e:
                issues.append(f"group {g.name}: {e}")

        s = self.settings
        if s.workers < 1:
            issues.append(f"workers must be >= 1, got {s.workers}")
        if s.orbit_depth < 2:
            issues.append(f"orbit depth must be >= 2, got {s.orbit_depth}")
        for label, radius in (
            ("law", s.law_radius),
            ("tits", s.tits_radius),
            ("witness", s.witness_radius),
            ("bipartition", s.bipartition_radius),
            ("density", s.density_radius),
        ):
            if radius < 1:
                issues.append(f"{label} radius must be >= 1, got {radius}")

        b = self.budgets
        for label in ("law", "classify", "tits", "contraction", "generation", "mautner", "round_trip"):
            if getattr(b, label) < 0:
                issues.append(f"{label} budget must be >= 0, got {getattr(b, label)}")
        if b.depth < 1:
            issues.append(f"sample depth must be >= 1, got {b.depth}")

        return issues

    def to_dict(self) -> dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            "settings": {
                "mode": self.settings.mode.value,
                "seed": self.settings.seed,
                "workers": self.settings.workers,
                "law_radius": self.settings.law_radius,
                "tits_radius": self.settings.tits_radius,
                "orbit_depth": self.settings.orbit_depth,
                "oracle_depth": self.settings.oracle_depth,
            },
            "budgets": {
                "law": self.budgets.law,
                "classify": self.budgets.classify,
                "tits": self.budgets.tits,
                "contraction": self.budgets.contraction,
                "generation": self.budgets.generation,
                "mautner": self.budgets.mautner,
                "depth": self.budgets.depth,
            },
            "groups": [
                {"name": g.name, "degree": g.degree, "generators": g.generators}
                for g in self.groups
            ],
        }


# ═══════════════════════════════════════════════════════════════════════════════
# PRESET CONFIGURATIONS
# ═══════════════════════════════════════════════════════════════════════════════

def _catalog_groups(names: list[str]) -> list[GroupSpec]:
    return [GroupSpec.from_catalog(n) for n in names]


def get_default_config() -> SuiteConfiguration:
    """Default suite: Sym3, Sym5, A5, D5, C4, C5 at desk-scale budgets."""
    return SuiteConfiguration(groups=_catalog_groups(DEFAULT_SUITE_GROUPS))


def get_quick_config() -> SuiteConfiguration:
    """Smoke configuration: every battery runs, with a few samples each."""
    config = get_default_config()
    config.settings.mode = SuiteMode.QUICK
    config.settings.law_radius = 4
    config.settings.orbit_depth = 4
    config.settings.oracle_depth = 3
    config.budgets = SampleBudgets(
        law=12,
        classify=12,
        tits=12,
        contraction=12,
        generation=6,
        mautner=6,
        mautner_max_index=4,
        round_trip=6,
        depth=3,
    )
    return config


def get_acceptance_config() -> SuiteConfiguration:
    """Full acceptance budgets."""
    config = get_default_config()
    config.settings.mode = SuiteMode.ACCEPTANCE
    config.settings.law_radius = 6
    config.settings.tits_radius = 8
    config.settings.orbit_depth = 5
    config.settings.oracle_depth = 4
    config.budgets = SampleBudgets(
        law=1000,
        classify=500,
        tits=500,
        contraction=500,
        generation=100,
        mautner=50,
        mautner_max_index=8,
        round_trip=100,
        depth=4,
    )
    return config


PRESETS = {
    SuiteMode.DEFAULT: get_default_config,
    SuiteMode.QUICK: get_quick_config,
    SuiteMode.ACCEPTANCE: get_acceptance_config,
}


def get_preset(name: str) -> SuiteConfiguration:
    try:
        return PRESETS[SuiteMode(name.lower())]()
    except ValueError as e:
        raise ConfigError(f"unknown preset {name!r}; known: {', '.join(m.value for m in SuiteMode)}") from e


# ═══════════════════════════════════════════════════════════════════════════════
# ENVIRONMENT & FILE CONFIGURATION
# ═══════════════════════════════════════════════════════════════════════════════

_INT_KEYS = {
    "ARBORU_DEPTH": ("budgets", "depth"),
    "ARBORU_LAW_SAMPLES": ("budgets", "law"),
    "ARBORU_CLASSIFY_SAMPLES": ("budgets", "classify"),
    "ARBORU_TITS_SAMPLES": ("budgets", "tits"),
    "ARBORU_CONTRACTION_SAMPLES": ("budgets", "contraction"),
    "ARBORU_GENERATION_SAMPLES": ("budgets", "generation"),
    "ARBORU_MAUTNER_SAMPLES": ("budgets", "mautner"),
    "ARBORU_ORBIT_DEPTH": ("settings", "orbit_depth"),
    "ARBORU_WORKERS": ("settings", "workers"),
    "ARBORU_SEED": ("settings", "seed"),
}


def _to_int(key: str, raw: str) -> int:
    try:
        return int(raw.strip())
    except ValueError as e:
        raise ConfigError(f"{key} must be an integer, got {raw!r}") from e


def _parse_group_value(name: str, raw: str) -> GroupSpec:
    """`<degree>|<generators>`, e.g. `5|(2 5)(3 4);(1 2 3 4 5)`."""
    if "|" not in raw:
        raise ConfigError(f"ARBORU_GROUP_{name} must look like <degree>|<generators>, got {raw!r}")
    degree, _, gens = raw.partition("|")
    return GroupSpec(name, _to_int(f"ARBORU_GROUP_{name}", degree), gens.strip())


def _apply_values(values: dict[str, Optional[str]], config: SuiteConfiguration) -> SuiteConfiguration:
    for key, (section, attr) in _INT_KEYS.items():
        raw = values.get(key)
        if raw:
            setattr(getattr(config, section), attr, _to_int(key, raw))

    if "ARBORU_GROUPS" in values:
        listed = [n.strip() for n in (values["ARBORU_GROUPS"] or "").split(",") if n.strip()]
        groups = []
        for name in listed:
            custom = values.get(f"ARBORU_GROUP_{name}")
            groups.append(_parse_group_value(name, custom) if custom else GroupSpec.from_catalog(name))
        config.groups = groups
    return config


def load_config_from_env(preset: Optional[str] = None) -> SuiteConfiguration:
    """ARBORU_PRESET (or `preset`, which wins) with overrides from the environment."""
    config = get_preset(preset or os.getenv("ARBORU_PRESET") or "default")
    values = {k: v for k, v in os.environ.items() if k.startswith("ARBORU_")}
    return _apply_values(values, config)


def load_config_file(path: str, preset: Optional[str] = None) -> SuiteConfiguration:
    """
    Read a KEY=VALUE suite file:

        ARBORU_PRESET=quick
        ARBORU_GROUPS=Sym3,D5,M
        ARBORU_GROUP_M=6|(1 2 3 4 5 6);(1 2)

    An explicit `preset` wins over ARBORU_PRESET in the file.

    Raises:
        ConfigError: unreadable file, bad integers, unknown group names.
    """
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    try:
        values = dotenv_values(path)
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e

    known = set(_INT_KEYS) | {"ARBORU_PRESET", "ARBORU_GROUPS"}
    for key in values:
        if key not in known and not key.startswith("ARBORU_GROUP_"):
            raise ConfigError(f"{path}: unknown key {key}")

    config = get_preset(preset or values.get("ARBORU_PRESET") or "default")
    config = _apply_values(values, config)
    logger.info(f"Loaded suite config from {path}: {len(config.groups)} groups")
    return config


# ═══════════════════════════════════════════════════════════════════════════════
# EXPORTS
# ═══════════════════════════════════════════════════════════════════════════════

DEFAULT_CONFIG = get_default_config()

__all__ = [
    "SuiteMode",
    "SuiteSettings",
    "SampleBudgets",
    "GroupSpec",
    "SuiteConfiguration",
    "get_default_config",
    "get_quick_config",
    "get_acceptance_config",
    "get_preset",
    "load_config_from_env",
    "load_config_file",
    "DEFAULT_CONFIG",
]
