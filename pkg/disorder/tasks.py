from celery import shared_task

from disorder.ensembles import run_sample


@shared_task
def run_disorder_sample(payload):
    """Celery entry point for one ensemble member."""
    return run_sample(payload)
