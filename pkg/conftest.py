"""pytest wiring: configure Django the same way manage.py test does."""
import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings")
os.environ.setdefault("IS_TESTING", "True")
django.setup()
