"""
Shared command plumbing: exit codes, run manifests and input parsing
"""
import logging
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click

from src.core.config import Config
from src.core.errors import (
    EnumerationCapError, FormatError, LatticeSpecError, NotComposableError, StabRbmError, SubsystemError,
)
from src.core.models import RunManifest, StabilizerGroup
from src.services.pauli.pauli_core import group_from_json
from src.utils.helpers import read_json, sha256_file, write_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NOT_COMPOSABLE = 3
EXIT_CAP = 4


class CommandFailed(click.ClickException):
    """Error printed to stderr with a chosen exit code."""

    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, NotComposableError):
        return EXIT_NOT_COMPOSABLE
    if isinstance(error, EnumerationCapError):
        return EXIT_CAP
    if isinstance(error, (FormatError, LatticeSpecError, SubsystemError, IndexError, KeyError, ValueError)):
        return EXIT_USAGE
    return EXIT_VERIFY_FAILED


def output_stem(path: str) -> str:
    p = Path(path)
    return str(p.with_suffix('')) if p.suffix else str(p)


def parse_indices(text: Optional[str]) -> List[int]:
    """'0,3, 4' -> [0, 3, 4]; empty text is an empty list."""
    if text is None or not text.strip():
        return []
    try:
        return [int(part) for part in text.replace(' ', '').split(',') if part]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}") from None


def parse_site(text: str):
    """'4,6' -> (4, 6); 'boundary' stays a string."""
    if text == 'boundary':
        return text
    values = parse_indices(text)
    if len(values) != 2:
        raise click.BadParameter(f"a lattice site looks like 4,6 or 'boundary', got {text!r}")
    return tuple(values)


class ManifestRun:
    """
    Context manager writing `<stem>.manifest.json` next to the primary
    output, whatever the outcome, and turning library errors into exit codes.
    """

    def __init__(self, command: str, arguments: Dict[str, Any], primary_output: str,
                 inputs: Sequence[str] = (), seed: Optional[int] = None):
        self.manifest_path = f"{output_stem(primary_output)}.manifest.json"
        self.manifest = RunManifest(
            command=command,
            arguments={k: v for k, v in arguments.items()},
            inputs={path: sha256_file(path) for path in inputs if path},
            seed=seed,
            tool_version=Config.TOOL_VERSION,
            started_at=datetime.now(timezone.utc).isoformat(),
        )
        self._start = 0.0

    def add_output(self, path: str) -> str:
        self.manifest.outputs.append(path)
        return path

    def __enter__(self) -> 'ManifestRun':
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb) -> bool:
        if exc is None:
            code = EXIT_OK
        elif isinstance(exc, click.exceptions.Exit):
            code = exc.exit_code
        elif isinstance(exc, click.ClickException):
            code = exc.exit_code
        else:
            code = exit_code_for(exc)
        self.manifest.exit_code = code
        self.manifest.wall_clock_seconds = time.perf_counter() - self._start
        self.manifest.outputs.append(self.manifest_path)
        write_json(self.manifest_path, self.manifest.to_dict())
        if isinstance(exc, (StabRbmError, IndexError, KeyError, ValueError)):
            logger.debug("%s failed", self.manifest.command, exc_info=exc)
            raise CommandFailed(str(exc), code) from exc
        return False


def load_group(path: str) -> StabilizerGroup:
    return group_from_json(read_json(path), source=path)
