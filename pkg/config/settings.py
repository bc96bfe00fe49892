"""Django settings for config project."""

import math
import os
import sys
from pathlib import Path
from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Load .env file
load_dotenv(BASE_DIR / ".env")

SECRET_KEY = os.environ.get("SECRET_KEY", "fallback-secret")
DEBUG = os.environ.get("DEBUG", "False").lower() in ("true", "1", "t")

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    "rest_framework",
    "detonation.apps.DetonationConfig",
]

# Nothing is stored through the ORM; runs are archived as JSONL/CSV files.
DATABASES = {}

IS_TESTING = os.getenv("IS_TESTING", "False").lower() in ("true", "1", "t") or "test" in sys.argv

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

REST_FRAMEWORK = {
    "UNAUTHENTICATED_USER": None,
}


def _env_float(name, default):
    value = os.getenv(name)
    return float(value) if value not in (None, "") else default


def _env_int(name, default):
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


# Numerical defaults: the tame case q=0.499, D=1, E_A=1, u_ig=0.1, u_plus=0.
# Every key can be overridden by an environment variable DETEVANS_<KEY>.
DETEVANS = {
    "q": _env_float("DETEVANS_Q", 0.499),
    "D": _env_float("DETEVANS_D", 1.0),
    "EA": _env_float("DETEVANS_EA", 1.0),
    "uig": _env_float("DETEVANS_UIG", 0.1),
    "uplus": _env_float("DETEVANS_UPLUS", 0.0),
    "tol": _env_float("DETEVANS_TOL", 1e-8),
    "radius_margin": _env_float("DETEVANS_RADIUS_MARGIN", 1.1),
    "indent": _env_float("DETEVANS_INDENT", 1e-3),
    "n0": _env_int("DETEVANS_N0", 120),
    "refine_threshold": _env_float("DETEVANS_REFINE_THRESHOLD", 0.2),
    "certify_threshold": _env_float("DETEVANS_CERTIFY_THRESHOLD", math.pi / 2),
    "rtol": _env_float("DETEVANS_RTOL", 1e-6),
    "atol": _env_float("DETEVANS_ATOL", 1e-8),
    "jobs": _env_int("DETEVANS_JOBS", 1),
    "out": os.getenv("DETEVANS_OUT", str(BASE_DIR / "detevans-out")),
}

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "simple"},
    },
    "loggers": {
        "detonation": {
            "handlers": ["console"],
            "level": os.getenv("DETEVANS_LOG_LEVEL", "WARNING" if IS_TESTING else "INFO"),
            "propagate": False,
        },
    },
}
