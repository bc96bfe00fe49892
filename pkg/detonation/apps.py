from django.apps import AppConfig


class DetonationConfig(AppConfig):
    name = "detonation"
    verbose_name = "Weak detonation stability"
