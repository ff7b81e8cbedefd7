"""Command-line entry point: ``ifeagent {passive,active,compare,profile}``.

Exit status is 0 on success, 1 on a configuration error and 2 on an I/O error.
"""

import argparse
import os
import sys

from ifeagent.harness import experiments
from ifeagent.harness.config import KEYS, ConfigError, build_config, load_config_file
from ifeagent.harness.output import (
    render_heatmap,
    write_kl_csv,
    write_profile_csv,
    write_trace_csv,
)

EXIT_CONFIG = 1
EXIT_IO = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="ifeagent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "passive": "trace of an agent with no positional preference",
        "active": "trace of an agent seeking its target cell",
        "compare": "approximate vs exact inference over a random walk",
        "profile": "location profiles over many runs",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="flat key = value config file")
        for key in KEYS:
            p.add_argument(f"--{key}", dest=key, metavar="VALUE", default=None)
    return parser


def _write_trace_outputs(trace, out):
    write_trace_csv(trace, os.path.join(out, "trace.csv"))
    render_heatmap([r.belief for r in trace.records], os.path.join(out, "belief.pgm"))
    render_heatmap([r.exact for r in trace.records], os.path.join(out, "exact.pgm"))
    return ["trace.csv", "belief.pgm", "exact.pgm"]


def run_command(command, cfg):
    """Run one experiment and write its outputs; returns the written file names."""
    out = cfg.out
    try:
        os.makedirs(out, exist_ok=True)
    except OSError as e:
        raise OSError(f"cannot create output directory {out}: {e.strerror or e}") from e
    if command == "passive":
        return _write_trace_outputs(experiments.run_passive(cfg), out)
    if command == "active":
        return _write_trace_outputs(experiments.run_active(cfg), out)
    if command == "compare":
        cmp = experiments.run_comparison(cfg)
        written = []
        for k, tr in cmp.traces.items():
            write_trace_csv(tr, os.path.join(out, f"trace_{k}.csv"))
            render_heatmap(cmp.beliefs[k], os.path.join(out, f"belief_{k}.pgm"))
            written += [f"trace_{k}.csv", f"belief_{k}.pgm"]
        render_heatmap(cmp.exact, os.path.join(out, "exact.pgm"))
        write_kl_csv(cmp, os.path.join(out, "kl.csv"))
        return written + ["exact.pgm", "kl.csv"]
    if command == "profile":
        profiles = experiments.run_profile(cfg)
        write_profile_csv(profiles, os.path.join(out, "profile.csv"))
        return ["profile.csv"]
    raise ConfigError(f"unknown command {command!r}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        raw = load_config_file(args.config) if args.config else {}
        raw.update({k: v for k, v in vars(args).items() if k in KEYS and v is not None})
        cfg = build_config(raw)
    except ConfigError as e:
        print(f"ifeagent: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        written = run_command(args.command, cfg)
    except OSError as e:
        print(f"ifeagent: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    for name in written:
        print(os.path.join(cfg.out, name))
    return 0


if __name__ == "__main__":
    sys.exit(main())
