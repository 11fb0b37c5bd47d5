from django.apps import AppConfig


class EulerprodConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "eulerprod"
