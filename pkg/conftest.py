import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "toruscohom.settings")
django.setup()
