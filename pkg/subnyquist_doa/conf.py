"""
Standalone Django settings for the serializer-based config layer.

Projects that already configure Django (or set DJANGO_SETTINGS_MODULE)
keep their own settings.
"""
import os

import django
from django.conf import settings


def configure():
    if settings.configured or 'DJANGO_SETTINGS_MODULE' in os.environ:
        return
    settings.configure(
        USE_I18N=False,
        INSTALLED_APPS=[],
    )
    django.setup()


configure()
