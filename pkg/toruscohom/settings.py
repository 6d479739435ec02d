"""
Django settings for the toruscohom project.

The project has no database and no HTTP surface: Django provides the
settings layer, management commands and the test runner, Celery the
optional distribution of oracle runs.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path

import environ

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

env = environ.Env()
environ.Env.read_env(BASE_DIR / ".env")


SECRET_KEY = env("DJANGO_SECRET_KEY", default="toruscohom-local-batch-key")

DEBUG = env.bool("DJANGO_DEBUG", default=False)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "django.contrib.auth",
    "django.contrib.contenttypes",
    # API serializers for the JSON file formats
    "rest_framework",
    "cohomology.apps.CohomologyConfig",
]

# Everything lives in JSON files; no models, no database.
DATABASES = {}

USE_TZ = True
TIME_ZONE = "UTC"

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


# ===============================
# SOLVER CONFIGURATION
# ===============================

# |Phi| above this marks an obstruction, also the residual tolerance
TORUS_OBSTRUCTION_TOL = env.float("TORUS_OBSTRUCTION_TOL", default=1e-9)
# | |lambda| - 1 | must exceed this for a root to count as hyperbolic
TORUS_HYPERBOLICITY_BAND = env.float("TORUS_HYPERBOLICITY_BAND", default=1e-8)
TORUS_ROOT_TOL = env.float("TORUS_ROOT_TOL", default=1e-12)
TORUS_ROOT_MAX_ITERATIONS = env.int("TORUS_ROOT_MAX_ITERATIONS", default=500)
TORUS_MAX_ADAPTED_EXPONENT = env.int("TORUS_MAX_ADAPTED_EXPONENT", default=10000)
# Upper bound on the number of lattice points enumerated by solve
TORUS_ENUMERATION_CAP = env.int("TORUS_ENUMERATION_CAP", default=10**7)
TORUS_PRUNE_THRESHOLD = env.float("TORUS_PRUNE_THRESHOLD", default=1e-15)
TORUS_ORBIT_STEP_CAP = env.int("TORUS_ORBIT_STEP_CAP", default=100000)
TORUS_CONTINUITY_ORDERS = env.list("TORUS_CONTINUITY_ORDERS", cast=int, default=[0, 1, 2])


# ===============================
# CELERY
# ===============================

CELERY_BROKER_URL = env("CELERY_BROKER_URL", default="redis://localhost:6379/0")
CELERY_RESULT_BACKEND = env("CELERY_RESULT_BACKEND", default="redis://localhost:6379/0")
CELERY_ACCEPT_CONTENT = ["json"]
CELERY_TASK_SERIALIZER = "json"
CELERY_RESULT_SERIALIZER = "json"
CELERY_TIMEZONE = "UTC"

# Oracle runs happen in-process unless a worker pool is configured
CELERY_TASK_ALWAYS_EAGER = env.bool("CELERY_TASK_ALWAYS_EAGER", default=True)
CELERY_TASK_EAGER_PROPAGATES = True
CELERY_TASK_SOFT_TIME_LIMIT = 300  # 5 minutes
CELERY_TASK_TIME_LIMIT = 600  # 10 minutes
CELERY_WORKER_PREFETCH_MULTIPLIER = 1


# ===============================
# LOGGING
# ===============================

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {"format": "{levelname} {name}: {message}", "style": "{"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "simple"},
    },
    "loggers": {
        "cohomology": {
            "handlers": ["console"],
            "level": env("TORUS_LOG_LEVEL", default="WARNING"),
            "propagate": False,
        },
    },
    "root": {
        "handlers": ["console"],
        "level": "WARNING",
    },
}
