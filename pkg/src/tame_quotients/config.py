"""
Configuration management for the tame quotient calculator.

This module centralizes default primes, truncation bounds, sweep sizes
and logging settings. Values can be overridden through environment
variables.
"""

import os
from dataclasses import dataclass


@dataclass
class AppConfig:
    """Main application configuration."""

    # Exact arithmetic
    DEFAULT_PRIME: int = 7
    DEFAULT_TRUNCATION: int = 8
    MIN_TRUNCATION: int = 2

    # Invariant ring certificates
    DEFAULT_DEGREE_BOUND: int = 12

    # Sweep ranges
    MAX_GROUP_ORDER: int = 12
    MAX_COORDINATES: int = 8
    SWEEP_SEED: int = 0
    SWEEP_MODELS: int = 500
    SWEEP_ACTIONS: int = 100
    SWEEP_SUBSTITUTIONS: int = 200
    SWEEP_PRIMES: tuple[int, ...] = (2, 3, 5, 7)

    # Point counting oracle
    MAX_SEARCH_SPACE: int = 10**7
    MAX_COUNT_FIELD: int = 9
    COUNT_CHUNK_SIZE: int = 2**16

    # Output
    JSON_INDENT: int = 2

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    @classmethod
    def from_env(cls) -> "AppConfig":
        """Create configuration from environment variables."""
        config = cls()

        # Override with environment variables if present
        config.DEFAULT_PRIME = int(os.getenv("DEFAULT_PRIME", str(config.DEFAULT_PRIME)))
        config.DEFAULT_TRUNCATION = int(
            os.getenv("DEFAULT_TRUNCATION", str(config.DEFAULT_TRUNCATION))
        )
        config.DEFAULT_DEGREE_BOUND = int(
            os.getenv("DEFAULT_DEGREE_BOUND", str(config.DEFAULT_DEGREE_BOUND))
        )
        config.SWEEP_SEED = int(os.getenv("SWEEP_SEED", str(config.SWEEP_SEED)))
        config.LOG_LEVEL = os.getenv("LOG_LEVEL", config.LOG_LEVEL)

        return config


# Global configuration instance
config = AppConfig.from_env()

# Letters used to name quotient generators after the uniformizer s
GENERATOR_LETTERS: str = "bcdefghijklmnopqruvw"
