import argparse
import json
import os.path
import re

from rich.console import Console
from rich.prompt import Confirm

from snowtrack.io import get_datafolder
from snowtrack.utils._import_utils import is_rich_available
from snowtrack.utils.logging import logger


if not is_rich_available():
    raise ImportError("Please install `rich` to run this command (`pip install rich`).")


RANK_FROM_LOG_FILENAME_REGEX = re.compile(r"logs/task_(\d{5})\.log")


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument(
        "path", type=str, nargs="?", help="Path to the logging folder. Defaults to current directory.",
        default=os.getcwd()
    )
    parser.add_argument("--no-pager", action="store_true", help="Print every log instead of paging through them.")


def incomplete_ranks(logging_dir) -> tuple[int, list[int]] | None:
    """(number of tasks, ranks without a completion marker), None when the folder has no executor.json"""
    if not logging_dir.isfile("executor.json"):
        return None
    with logging_dir.open("executor.json", "rt") as f:
        world_size = json.load(f).get("world_size", 0)
    completed = set(logging_dir.list_files("completions"))
    return world_size, [rank for rank in range(world_size) if f"completions/{rank:05d}" not in completed]


def run(args: argparse.Namespace) -> int:
    """Shows the log files of the experiment tasks that never wrote their completion marker."""
    console = Console()
    logger.remove()

    logging_dir = get_datafolder(args.path)
    found = incomplete_ranks(logging_dir)
    if found is None:
        console.log('Could not find "executor.json", is this an experiment logging folder?', style="red")
        return 1
    world_size, incomplete = found
    if not world_size:
        console.log("The executor did not record its number of tasks, please relaunch the experiment.", style="red")
        return 1
    console.log(f"{len(incomplete)}/{world_size} tasks are incomplete.")

    logs = [
        file
        for file in logging_dir.list_files("logs")
        if (match := RANK_FROM_LOG_FILENAME_REGEX.search(file)) and int(match.group(1)) in incomplete
    ]
    console.log(f"Found {len(logs)} log files for incomplete tasks.")
    for position, log in enumerate(logs):
        with logging_dir.open(log, "rt") as f:
            content = f.read()
        if args.no_pager:
            console.rule(log)
            console.print(content, markup=False)
            continue
        if position and not Confirm.ask(f"Show next log ([i]{log}[/i])?", default=True):
            break
        with console.pager():
            console.print(content, markup=False)
    return 0


def main():
    parser = argparse.ArgumentParser("Show the logs of failed experiment tasks.")
    add_arguments(parser)
    raise SystemExit(run(parser.parse_args()))


if __name__ == "__main__":
    main()
