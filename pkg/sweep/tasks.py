from celery import shared_task

from sweep.grids import run_phase_point, run_point


@shared_task
def run_sweep_point(payload):
    """One heatmap cell on a Celery worker."""
    return run_point(payload)


@shared_task
def run_phase_sweep_point(payload):
    return run_phase_point(payload)
