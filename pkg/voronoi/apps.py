from django.apps import AppConfig


class VoronoiConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "voronoi"
