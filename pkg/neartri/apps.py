from django.apps import AppConfig


class NeartriConfig(AppConfig):
    name = "neartri"
