"""
Django settings for khovanskii_solving project.

Only the pieces the solver uses are configured: the ``khovanskii`` app, a
SQLite database for recorded runs, logging and the ``KHOVANSKII`` options.
Secrets and paths come from the environment.
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('KHOVANSKII_SECRET_KEY', 'development-only-key')

DEBUG = os.environ.get('KHOVANSKII_DEBUG', '') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'khovanskii',
]


# Database
# https://docs.djangoproject.com/en/4.2/ref/settings/#databases

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.environ.get('KHOVANSKII_DB_PATH', BASE_DIR / 'db.sqlite3'),
}
}


# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


# Default primary key field type
# https://docs.djangoproject.com/en/4.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'khovanskii': {
            'handlers': ['console'],
            'level': os.environ.get('KHOVANSKII_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}

KHOVANSKII = {
    'DEFAULT_SEED': 1,
    'RETRIES': 5,
    'EIGEN_TOLERANCE': 1e-6,
    'CLUSTER_TOLERANCE': 1e-8,
    'ADAPTIVE_EXTRA_DEGREES': 10,
    'SCREENING_PRIME': 2147483647,
    'THREADS': int(os.environ.get('KHOVANSKII_THREADS', 1)),
    'BRUTE_FORCE_MAX_PRIME': 10_000,
    'BRUTE_FORCE_MAX_VARS': 3,
    'BRUTE_FORCE_MAX_POINTS': 10 ** 8,
    'BRUTE_FORCE_CHUNK': 1 << 20,
    'PLUECKER_VALIDATION_DEGREE': 2,
    'HILBERT_MAX_POINTS': 2_000_000,
}
