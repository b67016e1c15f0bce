from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Numeric feasibility check
    NUMERIC_GRID_SIZE: int = 10001
    NUMERIC_TOL: float = 1e-9
    GOLDEN_ITERATIONS: int = 60

    # Quadrature (reference h)
    QUADRATURE_TOL: float = 1e-10
    QUADRATURE_MAX_INTERVALS: int = 2**20

    # High-precision closed forms
    MP_DPS: int = 50
    IMAG_RESIDUE_BOUND: float = 1e-30

    # Two-step optimum solver
    ALPHA_BRACKET_LOW: float = 0.9
    ALPHA_BRACKET_HIGH: float = 1.0
    ALPHA_SCAN_CELLS: int = 1000
    BISECTION_TOL: float = 1e-14
    RESIDUAL_TOL: float = 1e-12

    # Cutting-plane optimizer
    OPT_INITIAL_Z_CUTS: int = 33
    OPT_MAX_ROUNDS: int = 200
    OPT_FEASIBILITY_SHRINK: float = 1e-9
    OPT_MAX_SHRINK: float = 1e-6
    OPT_LP_TOLERANCE: float = 1e-10
    OPT_ROUND_DIGITS: int = 9
    OPT_REFINE_SWEEPS: int = 3
    OPT_REFINE_ITERATIONS: int = 30

    # Output
    OUTPUT_DIGITS: int = 12
    LOG_LEVEL: str = "WARNING"

    # API
    API_V1_PREFIX: str = "/api/v1"

    model_config = SettingsConfigDict(env_prefix="AUXBOUND_", case_sensitive=True)


settings = Settings()
