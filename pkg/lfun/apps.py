from django.apps import AppConfig


class LfunConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "lfun"
