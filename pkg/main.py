"""The `nt` console script: `nt solve FILE` is `manage.py solve FILE`."""

import os
import sys


def main(argv=None):
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "tdslab.settings")
    from django.core.management import execute_from_command_line

    argv = list(sys.argv[1:] if argv is None else argv)
    execute_from_command_line(["nt", *argv])


if __name__ == "__main__":
    main()
