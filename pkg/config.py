from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    """Numerical tolerances and campaign defaults, overridable via SHARPBOUND_* variables."""

    model_config = SettingsConfigDict(env_prefix="SHARPBOUND_", extra="ignore")

    # Tolerances
    identity_tolerance: float = 1e-12
    verdict_tolerance: float = 1e-9
    conjugacy_tolerance: float = 1e-14

    # Exponent range (1, max_exponent]
    max_exponent: float = 64.0

    # Search / campaign defaults
    default_seed: int = 12345
    default_trials: int = 1000
    default_local_steps: int = 80
    default_step_decay: float = 0.8
    default_initial_step: float = 0.5
    default_box: tuple[float, float] = (0.0, 10.0)
    workers: int = 1

    log_level: str = "WARNING"


settings = Settings()

# Tolerances
IDENTITY_TOL = settings.identity_tolerance
VERDICT_TOL = settings.verdict_tolerance
CONJUGACY_TOL = settings.conjugacy_tolerance

# Exponent range
MAX_EXPONENT = settings.max_exponent

# Search defaults
DEFAULT_SEED = settings.default_seed
DEFAULT_TRIALS = settings.default_trials
DEFAULT_LOCAL_STEPS = settings.default_local_steps
DEFAULT_STEP_DECAY = settings.default_step_decay
DEFAULT_INITIAL_STEP = settings.default_initial_step
DEFAULT_BOX = settings.default_box
WORKERS = settings.workers

LOG_LEVEL = settings.log_level
