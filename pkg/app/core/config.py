import math

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="CHTG_", extra="ignore")

    # App
    app_name: str = "Complex Hyperbolic Triangle Groups"
    debug: bool = False
    log_level: str = "WARNING"

    # Precision
    precision_bits: int = 128
    precision_cap_bits: int = 512

    # Tolerances
    boundary_tol: float = 1e-9
    signature_tol: float = 1e-10
    window_tolerance: float = 2 * math.pi / 10**6

    # CLI defaults
    alpha_steps: int = 1024
    n_max: int = 24


settings = Settings()


def get_settings() -> Settings:
    """Settings dependency for the API routers."""
    return settings
