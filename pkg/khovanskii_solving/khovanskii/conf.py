"""Solver settings, read from ``settings.KHOVANSKII`` with packaged defaults."""
from django.conf import settings

DEFAULTS = {
    'DEFAULT_SEED': 1,
    'RETRIES': 5,
    'EIGEN_TOLERANCE': 1e-6,
    'CLUSTER_TOLERANCE': 1e-8,
    'ADAPTIVE_EXTRA_DEGREES': 10,
    'SCREENING_PRIME': 2147483647,
    'THREADS': 1,
    'BRUTE_FORCE_MAX_PRIME': 10_000,
    'BRUTE_FORCE_MAX_VARS': 3,
    'BRUTE_FORCE_MAX_POINTS': 10 ** 8,
    'BRUTE_FORCE_CHUNK': 1 << 20,
    'PLUECKER_VALIDATION_DEGREE': 2,
    'HILBERT_MAX_POINTS': 2_000_000,
}


def get_setting(name):
    if settings.configured:
        overrides = getattr(settings, 'KHOVANSKII', {})
        if name in overrides:
            return overrides[name]
    return DEFAULTS[name]
