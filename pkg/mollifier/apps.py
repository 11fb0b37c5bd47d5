from django.apps import AppConfig


class MollifierConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "mollifier"
