from django.apps import AppConfig


class ChargroupConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "chargroup"
