"""
Configuration management for the bundle engine.
Handles loading and validation of run settings from environment variables
and of fixture parameters from key-value files.
"""

import os
import logging
from typing import Dict, Optional, Any
from dataclasses import dataclass, field
import dotenv

from tkbundle.utils.validators import validate_run_settings

# Try to load .env file if it exists
dotenv.load_dotenv()

logger = logging.getLogger(__name__)

FIXTURE_DIR_ENV = "TKBUNDLE_FIXTURE_DIR"

DEFAULT_TOLERANCES: Dict[str, float] = {
    "fixture-invariants": 1e-10,
    "chain-rule-oracle": 1e-12,
    "chain-rule-functoriality": 1e-10,
    "partition-coefficients": 0.0,
    "tangent-transition-directional": 1e-10,
    "tangent-transition-linearity": 1e-11,
    "connection-map-stages": 1e-12,
    "horizontal-split": 1e-12,
    "connection-compatibility": 1e-9,
    "trivialization-round-trip": 1e-12,
    "block-linearity": 1e-9,
    "block-linearity-negative-control": 1e-3,
    "transition-cocycle": 1e-9,
    "order-restriction": 1e-12,
    "metric-lift-symmetry": 1e-13,
    "metric-lift-definiteness": 0.0,
    "metric-lift-chart-invariance": 1e-9,
    "lagrangian-spray": 1e-9,
    "lagrangian-lift-chart-invariance": 1e-9,
    "lagrangian-lift-order-one": 1e-12,
    "degenerate-lagrangian-detected": 0.0,
    "strong-projective-system": 1e-12,
    "thread-transition-commutes": 1e-12,
    "frechet-axioms": 1e-12,
    "frechet-worked-value": 1e-12,
}

class ConfigError(ValueError):
    """Raised when a run configuration is invalid."""
    pass

@dataclass
class FixtureParams:
    """Numeric parameters of the manifold fixtures."""

    c: float = 1.0
    flat_dim: int = 1
    sphere_dim: int = 2
    annulus_inner: float = 0.2
    annulus_outer: float = 5.0
    box_radius: float = 1.0
    thread_cap: int = 8

    @classmethod
    def load(cls, path: Optional[str] = None) -> 'FixtureParams':
        """
        Load parameters from a key-value file; missing keys keep their defaults.

        Args:
            path: File in KEY=value format, or None for defaults

        Returns:
            FixtureParams instance
        """
        if path is None or not os.path.exists(path):
            if path is not None:
                logger.debug(f"No fixture parameter file at {path}, using defaults")
            return cls()

        values = {k.lower(): v for k, v in dotenv.dotenv_values(path).items() if v is not None}
        defaults = cls()
        try:
            params = cls(
                c=float(values.get("c", defaults.c)),
                flat_dim=int(values.get("flat_dim", defaults.flat_dim)),
                sphere_dim=int(values.get("sphere_dim", defaults.sphere_dim)),
                annulus_inner=float(values.get("annulus_inner", defaults.annulus_inner)),
                annulus_outer=float(values.get("annulus_outer", defaults.annulus_outer)),
                box_radius=float(values.get("box_radius", defaults.box_radius)),
                thread_cap=int(values.get("thread_cap", defaults.thread_cap)),
            )
        except ValueError as e:
            raise ConfigError(f"Malformed fixture parameter file {path}: {e}")

        logger.info(f"Loaded fixture parameters from {path}")
        return params

    @classmethod
    def for_fixture(cls, name: str, fixture_dir: Optional[str] = None) -> 'FixtureParams':
        """Load `<fixture_dir>/<name>.env`, falling back to TKBUNDLE_FIXTURE_DIR."""
        fixture_dir = fixture_dir or os.environ.get(FIXTURE_DIR_ENV)
        if not fixture_dir:
            return cls()
        return cls.load(os.path.join(fixture_dir, f"{name}.env"))

@dataclass
class RunConfig:
    """Settings of one verification or lift-demo run."""

    fixture: str = "flat_poly"
    order: int = 3
    samples: int = 100
    seed: int = 42
    tolerances: Dict[str, float] = field(default_factory=dict)
    output_format: str = "tree"
    output_path: Optional[str] = None
    negative_control: bool = False
    workers: int = 1
    progress: bool = False
    fixture_dir: Optional[str] = None

    @classmethod
    def from_env(cls) -> 'RunConfig':
        """Load configuration from environment variables."""
        try:
            return cls(
                fixture=os.environ.get("TKBUNDLE_FIXTURE", "flat_poly"),
                order=int(os.environ.get("TKBUNDLE_ORDER", "3")),
                samples=int(os.environ.get("TKBUNDLE_SAMPLES", "100")),
                seed=int(os.environ.get("TKBUNDLE_SEED", "42")),
                output_format=os.environ.get("TKBUNDLE_FORMAT", "tree"),
                workers=int(os.environ.get("TKBUNDLE_WORKERS", "1")),
                fixture_dir=os.environ.get(FIXTURE_DIR_ENV),
            )
        except ValueError as e:
            logger.error(f"Invalid numeric TKBUNDLE_* variable: {e}")
            raise ConfigError(f"Invalid numeric environment setting: {e}")

    def validate(self) -> 'RunConfig':
        """
        Validate the configuration.

        Returns:
            self, for chaining

        Raises:
            ConfigError: If any setting is out of range
        """
        is_valid, error = validate_run_settings(self.to_dict())
        if not is_valid:
            raise ConfigError(error)

        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"Unknown check ids in tolerance overrides: {sorted(unknown)}")

        if self.workers < 1:
            raise ConfigError("Worker count must be at least 1")

        return self

    def tolerance(self, check_id: str) -> float:
        """Tolerance for a check, honouring overrides."""
        return self.tolerances.get(check_id, DEFAULT_TOLERANCES[check_id])

    def fixture_params(self) -> FixtureParams:
        """Fixture parameters for the configured fixture."""
        return FixtureParams.for_fixture(self.fixture, self.fixture_dir)

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary (reported in run output)."""
        return {
            "fixture": self.fixture,
            "order": self.order,
            "samples": self.samples,
            "seed": self.seed,
            "tolerances": dict(sorted(self.tolerances.items())),
            "output_format": self.output_format,
            "negative_control": self.negative_control,
        }
