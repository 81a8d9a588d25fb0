import argparse
import sys

from rich.console import Console

from snowtrack.certify import (
    CarriedSystem,
    DistanceCertificate,
    cert_heegaard_distance_lb,
    construct_calm_cds,
    gregarious_guide,
    replay_certificate,
    stream,
)
from snowtrack.geometry import DTCoordinates, PantsDecomposition, standard_decomposition
from snowtrack.io import dump_document, get_datafolder, read_document, write_document
from snowtrack.lab import ExperimentConfig, run_experiment, sample_pair
from snowtrack.mcg import apply_word, word_from_json, word_to_json
from snowtrack.tools import failed_logs, merge_stats
from snowtrack.tracks import (
    MODELS,
    Tower,
    TrainTrack,
    build_tower,
    dual_pair,
    random_positive_weights,
    standard_track,
)
from snowtrack.utils._import_utils import is_rich_available
from snowtrack.waves import CdsPair, snow_check


if not is_rich_available():
    raise ImportError("Please install `rich` to run this command (`pip install rich`).")


console = Console()


def add_frame_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--genus", "-g", type=int, default=2, help="Genus of the surface.")
    parser.add_argument("--decomposition", type=str, default="chain", help='Standard frame, "chain" or "theta".')
    parser.add_argument("--seed", type=int, default=0, help="Random seed.")


def frame(args) -> PantsDecomposition:
    return standard_decomposition(args.genus, args.decomposition)


def output(document: dict, path: str | None):
    if path:
        write_document(path, document)
        console.log(f"Saved to {path}")
    else:
        sys.stdout.write(dump_document(document).decode() + "\n")


def pair_to_dict(pair: CdsPair) -> dict:
    return {
        "frame": pair.frame.to_dict(),
        "word": word_to_json(pair.word),
        "placement": word_to_json(pair.placement),
        "d_in_e": [curve.to_dict() for curve in pair.d_in_e],
        "e_in_d": [curve.to_dict() for curve in pair.e_in_d],
    }


def pair_from_dict(data: dict) -> CdsPair:
    return CdsPair(
        frame=PantsDecomposition.from_dict(data["frame"]),
        d_in_e=tuple(DTCoordinates.from_dict(curve) for curve in data["d_in_e"]),
        e_in_d=tuple(DTCoordinates.from_dict(curve) for curve in data["e_in_d"]),
        word=word_from_json(data.get("word", [])),
        placement=word_from_json(data.get("placement", [])),
    )


def guide_to_dict(guide: dict[int, int]) -> dict:
    # weights exceed the 64-bit integers of orjson
    return {"weights": {str(branch): str(weight) for branch, weight in sorted(guide.items())}}


def guide_from_dict(data: dict) -> dict[int, int]:
    return {int(branch): int(weight) for branch, weight in data["weights"].items()}


def cmd_sample(args) -> int:
    config = ExperimentConfig(genus=args.genus, decomposition=args.decomposition, word_lengths=(args.word_length,),
                              seed=args.seed)
    output(pair_to_dict(sample_pair(config, args.word_length, args.index)), args.out)
    return 0


def cmd_check(args) -> int:
    verdict, witness = snow_check(pair_from_dict(read_document(args.pair)))
    if verdict:
        console.print("SNOW holds", style="green")
    else:
        console.print(f"No SNOW: {witness.direction} has a wave in pants {witness.pants} at boundary {witness.slot} "
                      f"({witness.loops} arcs)", style="yellow")
    return 0


def cmd_track(args) -> int:
    track = standard_track(frame(args), args.model)
    output(track.to_dict(), args.out)
    if args.guide_out:
        write_document(args.guide_out, guide_to_dict(random_positive_weights(track, stream(args.seed))))
        console.log(f"Saved a random guide to {args.guide_out}")
    return 0


def cmd_derive(args) -> int:
    """Derives from a saved track along a saved guide, or from a standard model along a random guide."""
    if args.track:
        track = TrainTrack.from_dict(read_document(args.track))
    else:
        track = standard_track(frame(args), args.model)
    if args.guide:
        guide = guide_from_dict(read_document(args.guide))
    else:
        guide = random_positive_weights(track, stream(args.seed))
    tower = build_tower(track, guide, args.n)
    console.log(f"Tower of height {tower.height}, {tower.top.n_branches} branches at the top")
    output(tower.to_dict(), args.out)
    return 0


def cmd_act(args) -> int:
    coords_data, word_data = read_document(args.coords), read_document(args.word)
    pd = PantsDecomposition.from_dict(coords_data["frame"]) if "frame" in coords_data else frame(args)
    word = word_from_json(word_data["word"] if isinstance(word_data, dict) else word_data)
    image = apply_word(pd, DTCoordinates.from_dict(coords_data), word)
    output({"frame": pd.to_dict(), **image.to_dict()}, args.out)
    return 0


def cmd_calm(args) -> int:
    """Builds calm systems on both standard models with their towers, ready for `snow certify`."""
    pd = frame(args)
    pair = dual_pair(pd)
    rng = stream(args.seed, 1)
    d = construct_calm_cds(pair.track, seed=args.seed)
    e = construct_calm_cds(pair.dual, seed=args.seed + 1)
    towers = {
        "d_tower": build_tower(pair.track, gregarious_guide(d.weights, pair.track, rng), args.n).to_dict(),
        "e_tower": build_tower(pair.dual, gregarious_guide(e.weights, pair.dual, rng), 2).to_dict(),
    }
    folder = get_datafolder(args.out)
    for name, document in (
        ("d.json", {"frame": pd.to_dict(), **d.to_dict()}),
        ("e.json", {"frame": pd.to_dict(), **e.to_dict()}),
        ("towers.json", towers),
    ):
        with folder.open(name, "wb") as f:
            f.write(dump_document(document))
    console.log(f"Saved d.json, e.json and towers.json to {args.out}")
    return 0


def cmd_certify(args) -> int:
    d_data, e_data = read_document(args.d), read_document(args.e)
    pd = PantsDecomposition.from_dict(d_data["frame"])
    towers = read_document(args.towers)
    certificate = cert_heegaard_distance_lb(
        CarriedSystem.from_dict(d_data, pd),
        Tower.from_dict(towers["d_tower"]),
        CarriedSystem.from_dict(e_data, pd),
        Tower.from_dict(towers["e_tower"]),
        dual_pair(pd),
    )
    console.print(f"Certified: distance >= {certificate.bound}", style="green")
    output(certificate.to_dict(), args.out)
    return 0


def cmd_replay(args) -> int:
    certificate = DistanceCertificate.from_dict(read_document(args.certificate))
    if replay_certificate(certificate):
        console.print(f"PASS: {certificate.kind} bound {certificate.bound} replays", style="green")
        return 0
    console.print("FAIL: the certificate does not replay", style="red")
    return 1


def cmd_experiment(args) -> int:
    config = ExperimentConfig(
        genus=args.genus,
        word_lengths=tuple(args.word_length),
        trials=args.trials,
        n=args.n,
        seed=args.seed,
        split_budget_factor=args.split_budget_factor,
        decomposition=args.decomposition,
        out=args.out,
    )
    report = run_experiment(config, tasks=args.tasks, workers=args.workers)
    console.print(f"Report saved to {args.out} (digest {report.digest()[:12]})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser("snow", description="Waves, train tracks and distance certificates.")
    commands = parser.add_subparsers(dest="command", required=True)

    sample = commands.add_parser("sample", help="Sample the pair of one experiment trial.")
    add_frame_arguments(sample)
    sample.add_argument("--word-length", "-L", type=int, default=10)
    sample.add_argument("--index", type=int, default=0, help="Trial index.")
    sample.add_argument("--out", "-o", type=str, help="Output file, stdout by default.")
    sample.set_defaults(run=cmd_sample)

    check = commands.add_parser("check", help="Check SNOW on a pair.")
    check.add_argument("pair", type=str, help="Pair json written by `snow sample`.")
    check.set_defaults(run=cmd_check)

    track = commands.add_parser("track", help="Write a standard train track, and optionally a random guide on it.")
    add_frame_arguments(track)
    track.add_argument("--model", choices=MODELS, default="tight")
    track.add_argument("--guide-out", type=str, help="Also write a random positive guide to this file.")
    track.add_argument("--out", "-o", type=str, help="Output file, stdout by default.")
    track.set_defaults(run=cmd_track)

    derive = commands.add_parser("derive", help="Build a tower of derived tracks along a random guide.")
    add_frame_arguments(derive)
    derive.add_argument("--model", choices=MODELS, default="tight")
    derive.add_argument("--track", type=str, help="Track json written by `snow track`, a standard model by default.")
    derive.add_argument("--guide", type=str, help="Guide json, a random positive guide by default.")
    derive.add_argument("--n", type=int, default=3, help="Tower height.")
    derive.add_argument("--out", "-o", type=str, help="Output file, stdout by default.")
    derive.set_defaults(run=cmd_derive)

    act = commands.add_parser("act", help="Apply a twist word to a multicurve.")
    add_frame_arguments(act)
    act.add_argument("--coords", required=True, help="Coordinates json with m and t, and optionally a frame.")
    act.add_argument("--word", required=True, help="Word json, a list of {\"gen\", \"sign\"} letters.")
    act.add_argument("--out", "-o", type=str, help="Output file, stdout by default.")
    act.set_defaults(run=cmd_act)

    calm = commands.add_parser("calm", help="Build calm systems and their towers on the standard models.")
    add_frame_arguments(calm)
    calm.add_argument("--n", type=int, default=3, help="Tower height of the first system.")
    calm.add_argument("--out", "-o", type=str, required=True, help="Output folder.")
    calm.set_defaults(run=cmd_calm)

    certify = commands.add_parser("certify", help="Certify a lower bound on the distance of a splitting.")
    certify.add_argument("--d", required=True, help="First system json.")
    certify.add_argument("--e", required=True, help="Second system json.")
    certify.add_argument("--towers", required=True, help="Towers json.")
    certify.add_argument("--out", "-o", type=str, help="Output file, stdout by default.")
    certify.set_defaults(run=cmd_certify)

    replay = commands.add_parser("replay", help="Replay a certificate.")
    replay.add_argument("certificate", type=str)
    replay.set_defaults(run=cmd_replay)

    experiment = commands.add_parser("experiment", help="Run a seeded genericity experiment.")
    add_frame_arguments(experiment)
    experiment.add_argument("--word-length", "-L", type=int, nargs="+", default=[10])
    experiment.add_argument("--trials", type=int, default=100, help="Trials per word length.")
    experiment.add_argument("--n", type=int, default=3, help="Tower height, the certified bound is n - 1.")
    experiment.add_argument("--split-budget-factor", type=int, default=16)
    experiment.add_argument("--tasks", type=int, default=1)
    experiment.add_argument("--workers", type=int, default=1)
    experiment.add_argument("--out", "-o", type=str, required=True, help="Output folder.")
    experiment.set_defaults(run=cmd_experiment)

    failed = commands.add_parser("failed-logs", help="Show the logs of failed experiment tasks.")
    failed_logs.add_arguments(failed)
    failed.set_defaults(run=failed_logs.run)

    merge = commands.add_parser("merge-stats", help="Combine the stats of every experiment task.")
    merge_stats.add_arguments(merge)
    merge.set_defaults(run=merge_stats.run)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (ValueError, OSError, KeyError) as e:
        console.print(f"Error: {e}", style="red")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
