import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'kcert.settings')
django.setup()
