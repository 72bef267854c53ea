import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "tdslab.settings")
django.setup()
