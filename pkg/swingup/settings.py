"""
Django settings for the swingup project.

The project has no database and no HTTP surface. Django provides the
settings layer, logging and the management-command runner; every
physics knob that is not part of a run configuration file is read from
the environment here.
"""

from pathlib import Path

from decouple import config, Choices

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='swingup-local-only')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Third-party apps
    'rest_framework',
    # Local apps
    'qalgebra',
    'collective',
    'drive',
    'dynamics',
    'observables',
    'disorder',
    'sweep',
    'cli',
]

MIDDLEWARE = []

# No persistence: every result goes to files under SWINGUP_OUTPUT_DIR
DATABASES = {}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Run outputs

SWINGUP_VERSION = '1.0.0'

SWINGUP_OUTPUT_DIR = Path(config('SWINGUP_OUTPUT_DIR', default=str(BASE_DIR / 'results')))


# Numerics

# Integrator tolerances for every master-equation run
SWINGUP_RTOL = config('SWINGUP_RTOL', default=1e-8, cast=float)
SWINGUP_ATOL = config('SWINGUP_ATOL', default=1e-10, cast=float)

# Fock-cutoff escalation
SWINGUP_FOCK_START = config('SWINGUP_FOCK_START', default=5, cast=int)
SWINGUP_FOCK_STEP = config('SWINGUP_FOCK_STEP', default=2, cast=int)
SWINGUP_FOCK_MAX = config('SWINGUP_FOCK_MAX', default=11, cast=int)
SWINGUP_FOCK_TOLERANCE = config('SWINGUP_FOCK_TOLERANCE', default=1e-3, cast=float)


# Worker pool

SWINGUP_JOBS = config('SWINGUP_JOBS', default=1, cast=int)

# 'local' = concurrent.futures process pool, 'celery' = Celery group
SWINGUP_TASK_BACKEND = config(
    'SWINGUP_TASK_BACKEND',
    default='local',
    cast=Choices(['local', 'celery']),
)


# Celery Configuration
CELERY_BROKER_URL = config('CELERY_BROKER_URL', default='redis://127.0.0.1:6379/0')
CELERY_RESULT_BACKEND = config('CELERY_RESULT_BACKEND', default='redis://127.0.0.1:6379/0')
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TIMEZONE = 'UTC'
CELERY_TASK_TRACK_STARTED = True
CELERY_TASK_TIME_LIMIT = 60 * 60  # one hour per grid point
CELERY_TASK_ALWAYS_EAGER = config('CELERY_TASK_ALWAYS_EAGER', default=False, cast=bool)


# Logging

SWINGUP_LOG_LEVEL = config('SWINGUP_LOG_LEVEL', default='WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': SWINGUP_LOG_LEVEL,
    },
    'loggers': {
        app: {'level': SWINGUP_LOG_LEVEL, 'propagate': True}
        for app in (
            'swingup', 'qalgebra', 'collective', 'drive', 'dynamics',
            'observables', 'disorder', 'sweep', 'cli',
        )
    },
}


# REST Framework: serializers only, no views
REST_FRAMEWORK = {
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [],
    'UNAUTHENTICATED_USER': None,
}
