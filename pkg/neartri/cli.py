"""Shared plumbing for the management commands: file loading and exit codes."""

import json
from contextlib import contextmanager
from pathlib import Path

from django.core.management.base import CommandError

from .embedding import parse
from .exceptions import (
    DecompositionError,
    ExceptionalInput,
    GeneratorError,
    InvalidEmbedding,
    LedgerBreach,
    NotApplicable,
    NtgSyntaxError,
    SearchBudgetExceeded,
    SurgeryError,
)

EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_EXCEPTIONAL = 3
EXIT_BREACH = 4


@contextmanager
def exit_codes():
    """Translate library errors into CommandError with the documented exit code."""
    try:
        yield
    except (NtgSyntaxError, InvalidEmbedding, GeneratorError, NotApplicable, SearchBudgetExceeded) as exc:
        raise CommandError(str(exc), returncode=EXIT_VALIDATION) from exc
    except ExceptionalInput as exc:
        raise CommandError(str(exc), returncode=EXIT_EXCEPTIONAL) from exc
    except LedgerBreach as exc:
        raise CommandError(f"ledger breach: {exc}", returncode=EXIT_BREACH) from exc
    except (SurgeryError, DecompositionError) as exc:
        raise CommandError(f"internal error: {exc}", returncode=EXIT_BREACH) from exc
    except OSError as exc:
        raise CommandError(str(exc), returncode=EXIT_IO) from exc
    except json.JSONDecodeError as exc:
        raise CommandError(f"malformed JSON: {exc}", returncode=EXIT_VALIDATION) from exc


def read_ntg(path):
    return parse(Path(path).read_text())


def write_json(stdout, payload, pretty=False):
    stdout.write(json.dumps(payload, indent=2 if pretty else None, sort_keys=True))
