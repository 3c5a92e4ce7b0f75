SECRET_KEY = 'django-insecure-kcert-local-only'

DEBUG = True

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'derivator',
]

DATABASES = {}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'derivator': {
            'handlers': ['console'],
            'level': 'INFO',
            'propagate': False,
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
}

# Defaults and hard bounds for kcheck runs.
KCERT = {
    'DEFAULT_PRIME': 2,
    'DEFAULT_SIMPLICIAL_LEVEL': 3,
    'DEFAULT_ISO_LEVEL': 2,
    'DEFAULT_TABLE_LEVEL': 3,
    'DEFAULT_DECOMPOSE_LEVEL': 4,
    'DEFAULT_CAP': 3,
    'DEFAULT_DECOMPOSE_COUNT': 200,
    'DEFAULT_SEED': 0,
    'MAX_SIMPLICIAL_LEVEL': 6,
    'MAX_ISO_LEVEL': 3,
    'MAX_TABLE_LEVEL': 5,
    'MAX_CAP': 6,
    'MAX_PRIME': 11,
}
