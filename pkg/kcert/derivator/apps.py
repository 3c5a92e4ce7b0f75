from django.apps import AppConfig


class DerivatorConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'derivator'
    verbose_name = 'Derivator K-theory certificates'
