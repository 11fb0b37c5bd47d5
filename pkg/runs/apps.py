# runs/apps.py

from django.apps import AppConfig


class RunsConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "runs"

    def ready(self):
        import runs.signals  # Failing records mark their run failed
