"""
Django settings for core project.

Generated by 'django-admin startproject' using Django 5.1.

For more information on this file, see
https://docs.djangoproject.com/en/5.1/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.1/ref/settings/
"""

from pathlib import Path
import os
import dj_database_url
from dotenv import load_dotenv

load_dotenv(".env")

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get("DJANGO_SECRET_KEY", "nonvanishing-desk-key")

DEBUG = os.environ.get("DJANGO_DEBUG") != "False"

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    "chargroup.apps.ChargroupConfig",
    "special.apps.SpecialConfig",
    "lfun.apps.LfunConfig",
    "eulerprod.apps.EulerprodConfig",
    "moments.apps.MomentsConfig",
    "mollifier.apps.MollifierConfig",
    "voronoi.apps.VoronoiConfig",
    "runs.apps.RunsConfig",
    "rest_framework",
    "django.contrib.auth",
    "django.contrib.contenttypes",
]

REST_FRAMEWORK = {
    "COERCE_DECIMAL_TO_STRING": False,
}


# Database
# https://docs.djangoproject.com/en/5.1/ref/settings/#databases

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": BASE_DIR / "db.sqlite3",
    }
}
db_from_env = dj_database_url.config(conn_max_age=500)
DATABASES["default"].update(db_from_env)


# Internationalization

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


# Numerics. Every key can be overridden with NUMERICS_<KEY> in the environment.

_NUMERIC_DEFAULTS = {
    "AFE_TOLERANCE": 1e-13,
    "AFE_MAX_TERMS": 8_000_000,
    "LVALUE_TOLERANCE": 1e-12,
    "EULER_PRIME_CUTOFF": 20_000,
    "EULER_TOLERANCE": 1e-12,
    "QUAD_TOLERANCE": 1e-12,
    "VORONOI_TOLERANCE": 1e-8,
    "VORONOI_MAX_DUAL": 65_536,
    "DET_ESCALATION": 1e-6,
    "DET_PRECISION_DIGITS": 34,
    "MOLLIFIER_MAX_TERMS": 2_000_000,
    "MOLLIFIER_MAX_PRIME": 10_000,
}


def _numeric(key, default):
    raw = os.environ.get(f"NUMERICS_{key}")
    if raw is None:
        return default
    return type(default)(float(raw)) if isinstance(default, int) else float(raw)


NUMERICS = {key: _numeric(key, value) for key, value in _NUMERIC_DEFAULTS.items()}

WORKERS = int(os.environ.get("NONVANISHING_WORKERS", os.cpu_count() or 1))
DEFAULT_SEED = int(os.environ.get("NONVANISHING_SEED", "20240607"))
REPORT_DIR = Path(os.environ.get("NONVANISHING_REPORT_DIR", BASE_DIR / "reports"))
REPORT_SCHEMA_VERSION = 1


# Logging

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name}: {message}",
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
        "level": os.environ.get("NONVANISHING_LOG_LEVEL", "INFO"),
    },
}
