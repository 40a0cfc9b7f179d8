import threading

import pytest
import typer

from plandet.utils.settings import apply_action
from plandet.utils.sweep import RunConfig, parallel_map


def test_run_config_defaults_from_registry():
    run_config = RunConfig.from_config("verify", {"n": [0, 1]})
    assert run_config.tol == 1e-8
    assert run_config.output == "json"
    assert run_config.threads == 1
    assert run_config.symbol is None


def test_run_config_file_and_flags(config_path):
    apply_action(config_path, "output", "set", ["csv"])
    apply_action(config_path, "threads", "set", ["3"])
    run_config = RunConfig.from_config(
        "plancherel", {"n": [0]}, threads=2, config_path=config_path
    )
    assert run_config.output == "csv"
    assert run_config.threads == 2


def test_run_config_rejects_invalid_flags():
    with pytest.raises(typer.Exit) as exc:
        RunConfig.from_config("verify", {"n": [0]}, tol=0.5)
    assert exc.value.exit_code == 2


def test_tuples_follow_name_order():
    run_config = RunConfig.from_config("verify", {"n": [0, 1], "s": [0.5, 0.25]})
    assert run_config.tuples(["s", "n"]) == [
        (0.5, 0),
        (0.5, 1),
        (0.25, 0),
        (0.25, 1),
    ]


@pytest.mark.parametrize("threads", [1, 4])
def test_parallel_map_preserves_order(threads):
    assert parallel_map(lambda x: x * x, range(20), threads) == [
        x * x for x in range(20)
    ]


def test_parallel_map_uses_worker_threads():
    names = parallel_map(
        lambda _: threading.current_thread().name, range(8), threads=2
    )
    assert all(name != threading.main_thread().name for name in names)


def test_parallel_map_with_progress():
    result = parallel_map(str, [1, 2, 3], threads=2, description="Testing")
    assert result == ["1", "2", "3"]
    assert parallel_map(str, [1, 2], description="Testing", plain=True) == ["1", "2"]
