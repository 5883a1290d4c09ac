from django.apps import AppConfig


class QalgebraConfig(AppConfig):
    name = 'qalgebra'
    verbose_name = 'Operator algebra'
