#!/usr/bin/env python
"""Entry point for the verification commands (`python manage.py <command> --help`)."""
import os
import sys


def main():
    """Run a verification or administrative command."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'core.settings')
    try:
        import django
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    from runs.schema import ensure_schema, needs_schema

    if needs_schema(sys.argv):
        # runs and records are persisted on every invocation
        django.setup()
        ensure_schema()
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
