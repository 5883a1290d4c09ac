#!/usr/bin/env python
"""Command-line entry point: python manage.py <command> (simulate, sweep, reproduce, ...)."""
import os
import sys


def main():
    """Run a simulation command or a Django utility such as ``test``."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'swingup.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the requirements "
            "(pip install -r requirements.txt) into the active environment."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
