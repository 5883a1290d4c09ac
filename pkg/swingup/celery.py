"""
Celery configuration for distributed sweep and ensemble points.
"""
import os

from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'swingup.settings')

app = Celery('swingup')

# All CELERY_* keys in settings.py configure the app
app.config_from_object('django.conf:settings', namespace='CELERY')

# Picks up sweep/tasks.py and disorder/tasks.py
app.autodiscover_tasks()
