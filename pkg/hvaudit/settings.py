"""
Runtime settings and logging setup.

Values come from the environment (optionally a .env file) with the defaults
below, so the CLI and the HTTP app resolve the same configuration.
"""
import logging
import os
from dataclasses import dataclass, asdict

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


@dataclass(frozen=True)
class Settings:
    log_level: str = 'INFO'
    log_file: str | None = None
    seed: int = 20080418
    tolerance: float = 1e-12
    theta_points: int = 50
    v_points: int = 1000
    phi_points: int = 8
    trials: int = 100_000
    confidence: float = 0.99
    workers: int = 1
    lemma_matrices: int = 100
    port: int = 5001

    def to_dict(self):
        return asdict(self)


def _env(name, cast, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return cast(raw.strip())
    except ValueError:
        raise ValueError(f"Invalid value for {name}: {raw!r}")


def parse_seed(raw):
    """Accept a decimal or 0x-prefixed hexadecimal 64-bit seed."""
    if isinstance(raw, int):
        value = raw
    else:
        text = str(raw).strip().lower()
        value = int(text, 16) if text.startswith('0x') else int(text, 10)
    if not 0 <= value < 2 ** 64:
        raise ValueError(f"seed out of 64-bit range: {raw}")
    return value


def load_settings():
    """Build Settings from the environment"""
    return Settings(
        log_level=os.getenv('LOG_LEVEL', 'INFO').upper(),
        log_file=os.getenv('LOG_FILE') or None,
        seed=_env('HVAUDIT_SEED', parse_seed, Settings.seed),
        tolerance=_env('HVAUDIT_TOLERANCE', float, Settings.tolerance),
        theta_points=_env('HVAUDIT_THETA_POINTS', int, Settings.theta_points),
        v_points=_env('HVAUDIT_V_POINTS', int, Settings.v_points),
        phi_points=_env('HVAUDIT_PHI_POINTS', int, Settings.phi_points),
        trials=_env('HVAUDIT_TRIALS', int, Settings.trials),
        confidence=_env('HVAUDIT_CONFIDENCE', float, Settings.confidence),
        workers=_env('HVAUDIT_WORKERS', int, Settings.workers),
        lemma_matrices=_env('HVAUDIT_LEMMA_MATRICES', int, Settings.lemma_matrices),
        port=_env('HVAUDIT_PORT', int, Settings.port),
    )


def configure_logging(level='INFO', log_file=None):
    """Configure root logging; handlers write to stderr (and optionally a file), never stdout"""
    handlers = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
