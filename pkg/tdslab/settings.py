"""
Django settings for the tdslab project.

The project has no web surface: Django supplies configuration, logging and the
management-command runner for the neartri app.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/6.0/ref/settings/
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get("SECRET_KEY", "django-insecure-neartri-7q2v@k1m3x9w5z8c")

DEBUG = os.environ.get("DEBUG") == "1"

ALLOWED_HOSTS = ["127.0.0.1", "localhost"]


# Application definition

INSTALLED_APPS = [
    "neartri",
]

# The library keeps no state between runs.
DATABASES = {}

USE_TZ = True
TIME_ZONE = "UTC"


# Exact search limits
NT_ORACLE_MAX = int(os.environ.get("NT_ORACLE_MAX", "25"))
NT_ORACLE_NODE_BUDGET = int(os.environ.get("NT_ORACLE_NODE_BUDGET", "5000000"))
NT_ORACLE_TIME_BUDGET = float(os.environ.get("NT_ORACLE_TIME_BUDGET", "120"))

# Canonical forms of the two exceptional 12-vertex MOPs, written by `deriveexceptions`
NT_EXCEPTIONS_CACHE = Path(
    os.environ.get(
        "NT_EXCEPTIONS_CACHE", BASE_DIR / "neartri" / "data" / "exceptions.json"
    )
)

# Worker processes used by `verify`
NT_VERIFY_WORKERS = int(os.environ.get("NT_VERIFY_WORKERS", "1"))

NT_LOG_LEVEL = os.environ.get("NT_LOG_LEVEL", "INFO")


# Logging
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {module} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": "WARNING",
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": "INFO",
            "propagate": False,
        },
        "neartri": {
            "handlers": ["console"],
            "level": NT_LOG_LEVEL,
            "propagate": False,
        },
    },
}
