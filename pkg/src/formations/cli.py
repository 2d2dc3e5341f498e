"""Batch command line front end.

    formations run --input match.csv --meta match.json --every 5m --epsilon 0.1 --out results/
    formations validate-templates [templates.csv]

Exit codes: 0 success, 1 input error, 2 configuration error.
"""

import argparse
import csv
from dataclasses import asdict, dataclass
import io
import json
import math
from pathlib import Path
import sys

from . import __version__
from .ingest import IngestError, MetadataError, load_meta, normalize_orientation, parse
from .matcher import ConfigurationError, MatchResult
from .pipeline import detect
from .render import RenderSpec, render_match
from .segmentation import SegmentationError, parse_policy
from .templates import TemplateError, bounds, check_document, default_registry, load_registry

EXIT_OK, EXIT_INPUT, EXIT_CONFIG = 0, 1, 2

TIMELINE_COLUMNS = (
    "match", "segment", "team_id", "phase", "period", "start_frame", "end_frame", "frame_count",
    "players", "candidate_formation", "candidate_cost", "incumbent_cost", "adopted_formation",
    "adopted_cost", "changed",
)
LABEL_COLUMNS = ("match", "segment", "team_id", "phase", "period", "start_frame", "end_frame", "player_id", "label")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    inputs: list
    meta: str
    out: str
    templates: str | None = None
    formations: list | None = None
    every: str = "5m"
    substitutions: str = "drop"
    change_threshold: float = 0.0
    change_after_possession: bool = False
    scaling: bool = True
    scale_to: str = "template"
    render: bool = False
    threads: int = 1
    split_phase: bool = True

    def validate(self):
        parse_policy(self.every)
        if self.substitutions != "drop":
            raise ConfigurationError(f"unsupported substitutions mode {self.substitutions!r}; only 'drop'")
        if not (isinstance(self.change_threshold, (int, float)) and self.change_threshold >= 0):
            raise ConfigurationError("--epsilon must be a number >= 0")
        if self.scale_to not in ("template", "registry"):
            raise ConfigurationError("--scale-to must be 'template' or 'registry'")
        if self.threads < 1:
            raise ConfigurationError("--threads must be >= 1")
        if not self.inputs:
            raise ConfigurationError("at least one --input is required")


def _num(v):
    return "" if v is None or (isinstance(v, float) and math.isnan(v)) else repr(float(v))


def _csv(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def build_outputs(config: RunConfig):
    """Run the pipeline and return ``{relative path: text}`` without touching disk."""
    config.validate()
    try:
        registry = load_registry(config.templates) if config.templates else default_registry()
    except OSError as e:
        raise InputError(f"cannot read templates: {e}") from e
    except TemplateError as e:
        raise InputError(f"invalid template file: {e}") from e
    try:
        meta = load_meta(config.meta)
    except OSError as e:
        raise InputError(f"cannot read metadata: {e}") from e

    timeline_rows, label_rows = [], []
    files = {}
    for path in config.inputs:
        name = Path(path).stem
        try:
            records = parse(Path(path), meta)
        except OSError as e:
            raise InputError(f"cannot read {path}: {e}") from e
        except IngestError as e:
            raise InputError(f"{path}: {e}") from e
        records = normalize_orientation(records, meta)
        detection = detect(
            records,
            registry,
            every=config.every,
            formations=config.formations,
            substitutions=config.substitutions,
            change_threshold=config.change_threshold,
            change_after_possession=config.change_after_possession,
            scaling=config.scaling,
            scale_to=config.scale_to,
            split_phase=config.split_phase,
            pitch=(meta.pitch_length, meta.pitch_width),
            threads=config.threads,
        )
        for i, e in enumerate(detection.entries()):
            s = e.segment
            seg_cols = [name, i, s.team_id, s.phase or "", s.period, s.start_frame, s.end_frame]
            timeline_rows.append(
                seg_cols
                + [s.frame_count, len(s.mean_positions), e.candidate_formation, _num(e.candidate_cost),
                   _num(e.incumbent_cost), e.adopted_formation, _num(e.adopted_cost), int(e.changed)]
            )
            for pid in sorted(e.adopted_labels):
                label_rows.append(seg_cols + [pid, e.adopted_labels[pid]])
            if config.render:
                result = MatchResult(e.adopted_formation, e.adopted_labels, e.adopted_cost, config.scaling)
                target = registry.bounds() if config.scale_to == "registry" else None
                files[f"renders/{name}_{i:04d}_{s.team_id}_{s.phase or 'all'}.svg"] = render_match(
                    s,
                    result,
                    RenderSpec(pitch_length=meta.pitch_length, pitch_width=meta.pitch_width),
                    template=registry[e.adopted_formation],
                    target=target,
                )

    files["timeline.csv"] = _csv(timeline_rows, TIMELINE_COLUMNS)
    files["labels.csv"] = _csv(label_rows, LABEL_COLUMNS)
    resolved = asdict(config)
    # outputs must not depend on scheduling or destination
    resolved.pop("threads")
    resolved.pop("out")
    resolved["version"] = __version__
    files["config.json"] = json.dumps(resolved, indent=2, sort_keys=True) + "\n"
    return files


def write_outputs(files, out_dir):
    out = Path(out_dir)
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for rel in sorted(files):
            p = out / rel
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_text(files[rel], encoding="utf-8")
            written.append(p)
    except OSError:
        for p in written:
            p.unlink(missing_ok=True)
        raise


def run(config: RunConfig):
    """Execute a run; returns an exit code and reports errors on stderr."""
    try:
        files = build_outputs(config)
        write_outputs(files, config.out)
    except (ConfigurationError, SegmentationError, MetadataError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except IngestError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def validate_templates(path=None, stream=None):
    """Print a validation report for a template file; returns an exit code."""
    stream = sys.stdout if stream is None else stream
    try:
        if path is None:
            from importlib import resources

            source = resources.files("formations").joinpath("data/templates.csv").read_text(encoding="utf-8")
        else:
            source = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    records, taxonomy, _, violations = check_document(source)
    for name, slots in records:
        print(f"{name}\t{len(slots)} slots", file=stream)
    print(f"templates: {len(records)}", file=stream)
    if violations:
        print(f"violations: {len(violations)}", file=stream)
        for v in violations:
            print(f"  {v}", file=stream)
        return EXIT_INPUT
    b = bounds(load_registry(source))
    print(f"bounds: x [{b.min_x!r}, {b.max_x!r}] y [{b.min_y!r}, {b.max_y!r}]", file=stream)
    print("violations: 0", file=stream)
    return EXIT_OK


def _parser():
    p = argparse.ArgumentParser(prog="formations", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="detect formations and position labels")
    r.add_argument("--input", action="append", required=True, help="tracking CSV (repeatable)")
    r.add_argument("--meta", required=True, help="match metadata JSON")
    r.add_argument("--templates", help="template CSV (default: bundled 65 templates)")
    r.add_argument("--formations", help="comma separated subset of template names")
    r.add_argument("--every", default="5m", help="frame, possession, period, <n>s or <n>m (default 5m)")
    r.add_argument("--substitutions", default="drop")
    r.add_argument("--epsilon", default="0", help="stability threshold, >= 0 (default 0)")
    r.add_argument("--change-after-possession", action="store_true",
                   help="re-select the formation freely after each possession change")
    r.add_argument("--no-scaling", action="store_true", help="match raw positions")
    r.add_argument("--scale-to", default="template", help="scaling target: template (default) or registry")
    r.add_argument("--no-phase-split", action="store_true", help="do not split segments by possession phase")
    r.add_argument("--render", action="store_true", help="write an SVG per segment")
    r.add_argument("--threads", type=int, default=1)
    r.add_argument("--out", required=True, help="output directory")

    v = sub.add_parser("validate-templates", help="check a template file")
    v.add_argument("path", nargs="?")
    return p


def main(argv=None):
    args = _parser().parse_args(argv)
    if args.command == "validate-templates":
        return validate_templates(args.path)
    try:
        epsilon = float(args.epsilon)
    except ValueError:
        print(f"configuration error: --epsilon must be a number, got {args.epsilon!r}", file=sys.stderr)
        return EXIT_CONFIG
    config = RunConfig(
        inputs=args.input,
        meta=args.meta,
        out=args.out,
        templates=args.templates,
        formations=[f.strip() for f in args.formations.split(",") if f.strip()] if args.formations else None,
        every=args.every,
        substitutions=args.substitutions,
        change_threshold=epsilon,
        change_after_possession=args.change_after_possession,
        scaling=not args.no_scaling,
        scale_to=args.scale_to,
        render=args.render,
        threads=args.threads,
        split_phase=not args.no_phase_split,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
