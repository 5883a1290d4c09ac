"""
Bounded fan-out of independent simulation points.

``dispatch`` runs a module-level function over JSON-able payloads and
returns the results in payload order, whichever way the work was spread.
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor

from django.conf import settings

logger = logging.getLogger(__name__)


def _init_worker():
    # Spawned children start without Django configured
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'swingup.settings')
    import django
    django.setup()


def resolve_jobs(jobs=None):
    jobs = settings.SWINGUP_JOBS if jobs is None else jobs
    return max(1, int(jobs))


def dispatch(function, payloads, jobs=None, task=None, backend=None):
    """Run ``function(payload)`` for every payload.

    ``task`` is the Celery counterpart of ``function``; it is only used
    when the backend is ``celery``.
    """
    payloads = list(payloads)
    jobs = resolve_jobs(jobs)
    backend = backend or settings.SWINGUP_TASK_BACKEND

    if backend == 'celery' and task is not None:
        from celery import group

        logger.info("Dispatching %d payloads to Celery task %s", len(payloads), task.name)
        result = group([task.s(payload) for payload in payloads]).apply_async()
        return result.get(disable_sync_subtasks=False)

    if jobs == 1 or len(payloads) <= 1:
        return [function(payload) for payload in payloads]

    logger.info("Dispatching %d payloads to %d local workers", len(payloads), jobs)
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker) as pool:
        return list(pool.map(function, payloads))
