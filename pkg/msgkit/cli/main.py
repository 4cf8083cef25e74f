"""
msgkit command line.

Usage:
    msgkit simulate --config sim.json --out runs/s0
    msgkit build-gt --scene runs/s0/scene.json --out runs/s0/gt.graph.json
    msgkit associate --scene runs/s0/detector.json --emb runs/s0/emb.msge \\
        --out-graph runs/s0/pred.graph.json --out-dets runs/s0/pred_dets.json
    msgkit evaluate --gt ... --pred ... --scene ... --pred-dets ... [--emb ...] --out report.json
    msgkit evaluate --dir runs --out summary.json
    msgkit export-dot --graph runs/s0/pred.graph.json --out pred.gv [--match report.json]
    msgkit probe train --config sim.json --out projector.json
    msgkit probe eval --config sim.json --projector projector.json

Exit codes: 0 success, 2 invalid input or configuration, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

from msgkit.cli import commands
from msgkit.errors import MSGError
from msgkit.version import VERSION

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_IO = 3

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--settings", help="JSON settings file (flags override it)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="msgkit", description="Multiview scene graph toolkit")
    parser.add_argument("--version", action="version", version=VERSION)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Generate synthetic scenes with ground truth and embeddings")
    p.add_argument("--config", help="Simulator config JSON (defaults when omitted)")
    p.add_argument("--out", required=True, help="Output directory")
    p.add_argument("--seed", type=int, help="Override the config seed")
    p.add_argument("--count", type=int, default=1, help="Number of scenes (one subdirectory each when > 1)")
    p.add_argument("--force", action="store_true", help="Replace an existing output directory")
    p.set_defaults(func=commands.cmd_simulate)

    p = sub.add_parser("build-gt", help="Build the ground-truth graph of a scene")
    _add_common(p)
    p.add_argument("--scene", required=True)
    p.add_argument("--trans-thresh", type=float, help="Translation threshold in meters (default 1.0)")
    p.add_argument("--rot-thresh", type=float, help="Rotation threshold in radians (default 1.0)")
    p.add_argument(
        "--derive-detections",
        action="store_true",
        help="Recompute 2D boxes by projecting objects3d (uses min_box_area, near_plane, min_visible_corners)",
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=commands.cmd_build_gt)

    p = sub.add_parser("associate", help="Predict a graph from embeddings")
    _add_common(p)
    p.add_argument("--scene", required=True, help="Scene whose detections the embeddings describe")
    p.add_argument("--emb", required=True, help="Embedding file (.msge)")
    p.add_argument("--tau-place", type=float, help="Place cosine threshold (default 0.3)")
    p.add_argument("--tau-object", type=float, help="Object cosine threshold (default 0.2)")
    p.add_argument("--bank-update", choices=("running_mean", "replace"))
    p.add_argument("--projector", help="Apply a trained projector to the embeddings first")
    p.add_argument("--out-graph", required=True)
    p.add_argument("--out-dets", required=True)
    p.set_defaults(func=commands.cmd_associate)

    p = sub.add_parser("evaluate", help="Score predicted graphs against ground truth")
    _add_common(p)
    p.add_argument("--gt")
    p.add_argument("--pred")
    p.add_argument("--scene", help="Ground-truth scene (detections with true ids)")
    p.add_argument("--pred-dets")
    p.add_argument("--emb", help="Embeddings for Recall@1 (omit to skip recall)")
    p.add_argument("--dir", help="Evaluate every scene subdirectory and add a mean row")
    p.add_argument("--workers", type=int, help="Parallel scenes in --dir mode (env MSG_NUM_WORKERS)")
    p.add_argument("--out", required=True, help="Report JSON")
    p.set_defaults(func=commands.cmd_evaluate)

    p = sub.add_parser("export-dot", help="Export a graph as Graphviz DOT")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--match", help="Report whose matching colors the objects")
    p.add_argument("--side", choices=("pred", "gt"), default="pred", help="Matching side of the graph's objects")
    p.set_defaults(func=commands.cmd_export_dot)

    probe = sub.add_parser("probe", help="Train or evaluate a linear probe on simulated scenes")
    probe_sub = probe.add_subparsers(dest="probe_command", required=True)

    p = probe_sub.add_parser("train")
    _add_common(p)
    p.add_argument("--config", help="Simulator config JSON for the training scenes")
    p.add_argument("--scenes", type=int, default=8)
    p.add_argument("--out-dim", type=int, help="Projector output dim (default: embedding dim)")
    p.add_argument("--epochs", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="Projector JSON")
    p.set_defaults(func=commands.cmd_probe_train)

    p = probe_sub.add_parser("eval")
    _add_common(p)
    p.add_argument("--config", help="Simulator config JSON for the evaluation scenes")
    p.add_argument("--projector", required=True)
    p.add_argument("--scenes", type=int, default=10)
    p.add_argument("--tau-place", type=float)
    p.add_argument("--tau-object", type=float)
    p.add_argument("--out", help="Raw and probed mean reports JSON")
    p.set_defaults(func=commands.cmd_probe_eval)

    p = sub.add_parser("settings", help="Print the effective settings")
    _add_common(p)
    p.set_defaults(func=commands.dump_settings)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)

    try:
        return args.func(args)
    except (MSGError, ValueError) as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
