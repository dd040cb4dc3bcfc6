"""
Configuration management for dgx
"""
from pydantic_settings import BaseSettings
from functools import lru_cache
from typing import Optional


class Settings(BaseSettings):
    """Application settings"""

    # Application
    app_name: str = "dgx"
    app_version: str = "1.0.0"

    # Degree window used when a Hom complex has unknown support
    window_lo: int = -6
    window_hi: int = 2

    # Path categories in truncated mode
    len_bound: int = 8

    # Search limits
    sum_bound: int = 2
    budget: int = 4096
    axiom_samples: int = 6
    idempotent_bound: int = 12
    random_seed: int = 20240601

    # Output
    output: str = "text"

    # Logging
    log_level: str = "INFO"
    log_file: Optional[str] = None

    class Config:
        env_file = ".env"
        env_prefix = "DGX_"
        case_sensitive = False


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()
