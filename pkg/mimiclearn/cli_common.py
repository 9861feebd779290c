"""Console, exit codes and output helpers shared by the CLI commands."""

import functools
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import click
from rich.console import Console
from rich.markup import escape

logger = logging.getLogger(__name__)

console = Console()

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def configure_logging(verbose: bool, quiet: bool) -> None:
    if quiet:
        logging.basicConfig(level=logging.ERROR, force=True)
    elif verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(levelname)s: %(message)s", force=True)
    else:
        logging.basicConfig(level=logging.INFO, format="%(message)s", force=True)


def guarded(command):
    """Map exceptions of a command body onto exit codes 1 and 2."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (ValueError, FileNotFoundError) as e:
            console.print(f"[red]Error: {escape(str(e))}[/red]", highlight=False)
            sys.exit(EXIT_VALIDATION)
        except Exception as e:
            logger.debug("Command failed", exc_info=True)
            message = f"{type(e).__name__}: {escape(str(e))}"
            console.print(f"[red]Runtime error: {message}[/red]", highlight=False)
            sys.exit(EXIT_RUNTIME)

    return wrapper


def write_json(path: Path, payload: Any) -> Path:
    """Write ``payload`` with sorted keys so reruns are byte-identical."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_run_record(
    out_dir: Path, command: str, config: Dict[str, Any], inputs: Optional[Dict[str, Any]] = None
) -> Path:
    """``run.json``: the command and its fully resolved configuration."""
    record = {"command": command, "config": config, "inputs": inputs or {}}
    return write_json(out_dir / "run.json", record)


def is_quiet() -> bool:
    """Whether the root command was given ``--quiet``."""
    ctx = click.get_current_context()
    return bool((ctx.find_root().obj or {}).get("quiet"))
