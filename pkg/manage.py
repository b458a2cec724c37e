#!/usr/bin/env python
"""Command-line entry point: ``python manage.py <subcommand> ...``."""
import os
import sys

# Handled by Django itself rather than by a registered command.
BUILTIN_SUBCOMMANDS = {"help", "version"}


def main(argv=None):
    """Run a subcommand such as ``tally`` or ``simulate``.

    An unknown subcommand is a usage error and exits with status 2.
    """
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "rcvcompare_site.settings")
    try:
        import django
        from django.core.management import execute_from_command_line, get_commands
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    argv = list(argv if argv is not None else sys.argv)

    subcommand = argv[1] if len(argv) > 1 else None
    if subcommand and not subcommand.startswith("-") and subcommand not in BUILTIN_SUBCOMMANDS:
        django.setup()
        if subcommand not in get_commands():
            prog = os.path.basename(argv[0])
            sys.stderr.write(
                f"Unknown command: {subcommand!r}\nType '{prog} help' for usage.\n"
            )
            sys.exit(2)
    execute_from_command_line(argv)


if __name__ == "__main__":
    main()
