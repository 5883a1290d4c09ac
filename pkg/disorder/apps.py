from django.apps import AppConfig


class DisorderConfig(AppConfig):
    name = 'disorder'
    verbose_name = 'Disorder ensembles'
