import argparse
import json
import os.path

from tqdm import tqdm

from snowtrack.io import get_datafolder, open_file
from snowtrack.utils.logging import logger
from snowtrack.utils.stats import PipelineStats


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument(
        "path", type=str, nargs="?", help="Path to the per task stats folder. Defaults to current directory.",
        default=os.getcwd()
    )
    parser.add_argument(
        "--output", "-o", type=str, help="Save file location. Defaults to 'merged_stats.json'.",
        default="merged_stats.json"
    )


def merge_stats(path: str) -> PipelineStats:
    """Sums the stats of every task found in the folder `path`"""
    stats_folder = get_datafolder(path)
    merged = PipelineStats()
    for file in tqdm(stats_folder.list_files(glob_pattern="*.json"), desc="Merging stats"):
        with stats_folder.open(file, "rt") as f:
            merged += PipelineStats.from_json(json.load(f))
    return merged


def run(args: argparse.Namespace) -> int:
    merged = merge_stats(args.path)
    with open_file(args.output, mode="wt") as f:
        merged.save_to_disk(f)
    logger.info(f"Merged stats saved to {args.output}.")
    logger.info(merged)
    return 0


def main():
    parser = argparse.ArgumentParser("Combine the statistics of every experiment task into a single file.")
    add_arguments(parser)
    raise SystemExit(run(parser.parse_args()))


if __name__ == "__main__":
    main()
