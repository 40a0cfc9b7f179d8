"""Parameter sweeps.

A RunConfig bundles what a batch command needs: the command name, the symbol
descriptor, named parameter grids, tolerance, output format and thread count.
Values passed on the command line win over the configuration file, which wins
over registry defaults; PLANDET_THREADS is applied by the CLI option itself.

parallel_map() evaluates a pure function over parameter tuples on a thread pool.
Results come back in input order, so the output of a sweep does not depend on
the number of threads. NumPy and SciPy release the GIL inside LAPACK calls, which
is where sweeps spend their time.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TypeVar

from rich.progress import BarColumn, Progress, TaskProgressColumn, TextColumn

from ..constants import STATUS_SYMBOLS
from .config import Configuration
from .console import console
from .validation import validate_run_config

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class RunConfig:
    """Configuration of one batch command.

    Attributes:
        command: Command name.
        symbol: Symbol descriptor, if the command takes one.
        grids: Named parameter grids, e.g. {"n": [0, 1, 2], "s": [0.5]}.
        tol: Tolerance.
        output: 'json' or 'csv'.
        threads: Worker threads.
        settings: Typed configuration the run was resolved from.
    """

    command: str
    symbol: dict[str, Any] | None
    grids: dict[str, list[Any]]
    tol: float
    output: str
    threads: int
    settings: Configuration = field(repr=False, compare=False)

    @classmethod
    def from_config(
        cls,
        command: str,
        grids: dict[str, list[Any]],
        symbol: dict[str, Any] | None = None,
        tol: float | None = None,
        output: str | None = None,
        threads: int | None = None,
        config_path: Path | None = None,
    ) -> RunConfig:
        """Resolve a run configuration against the configuration file.

        Raises:
            typer.Exit: With code 2 if the resolved configuration is invalid.
        """
        settings = Configuration.from_config(config_path)

        return validate_run_config(
            cls(
                command=command,
                symbol=symbol,
                grids=grids,
                tol=settings.tol if tol is None else tol,
                output=settings.output if output is None else output,
                threads=settings.threads if threads is None else threads,
                settings=settings,
            )
        )

    def tuples(self, names: Sequence[str]) -> list[tuple[Any, ...]]:
        """Cartesian product of the named grids in the given order."""
        return list(itertools.product(*(self.grids[name] for name in names)))


def parallel_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    threads: int = 1,
    description: str | None = None,
    plain: bool = False,
) -> list[R]:
    """Apply fn to every item, preserving input order.

    Args:
        fn (Callable[[T], R]): Pure function.
        items (Iterable[T]): Inputs.
        threads (int, optional): Worker threads; 1 runs in the calling thread.
        description (str | None, optional): Progress bar label. No bar if None.
        plain (bool, optional): Suppress the progress bar.

    Returns:
        list[R]: Results in input order.
    """
    items = list(items)

    if description is None or plain or len(items) < 2:
        return _map(fn, items, threads)

    with Progress(
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        TextColumn("({task.completed}/{task.total})"),
        console=console,
        transient=True,
    ) as progress:
        task = progress.add_task(
            f"{STATUS_SYMBOLS['info']}  [bright_cyan]{description}[/bright_cyan]",
            total=len(items),
        )

        def tracked(item: T) -> R:
            result = fn(item)
            progress.advance(task)
            return result

        return _map(tracked, items, threads)


def _map(fn: Callable[[T], R], items: list[T], threads: int) -> list[R]:
    if threads <= 1:
        return [fn(item) for item in items]

    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(fn, items))
