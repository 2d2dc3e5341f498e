"""End-to-end detection: segments -> best templates -> stabilized timelines."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging

import numpy as np

from .matcher import NoTemplateError, TeamObservation, match, match_restricted
from .segmentation import MAX_OUTFIELD, segment
from .stability import stabilize
from .templates import OUTFIELD_COUNTS, TEMPLATE_FRAME, default_registry

log = logging.getLogger(__name__)


@dataclass
class Detection:
    timelines: dict  # (team_id, phase) -> list of TimelineEntry, in first-appearance order
    skipped: list = field(default_factory=list)  # (segment, reason)

    def entries(self):
        """All timeline entries ordered by period, window and team/phase key order."""
        keys = list(self.timelines)
        rows = [(e.segment.period, e.segment.window, keys.index(k), e) for k in keys for e in self.timelines[k]]
        rows.sort(key=lambda r: r[:3])
        return [r[3] for r in rows]


def to_template_frame(obs, pitch_length, pitch_width):
    """Shift center-origin pitch meters into the template frame (used when scaling is off)."""
    xy = obs.positions
    fx = TEMPLATE_FRAME[0] / pitch_length
    fy = TEMPLATE_FRAME[1] / pitch_width
    out = np.column_stack(((xy[:, 0] + pitch_length / 2) * fx, (xy[:, 1] + pitch_width / 2) * fy))
    return TeamObservation(obs.player_ids, out)


def detect(
    records,
    registry=None,
    every="5m",
    formations=None,
    substitutions="drop",
    change_threshold=0.0,
    change_after_possession=False,
    scaling=True,
    scale_to="template",
    split_phase=True,
    pitch=(105.0, 68.0),
    threads=1,
):
    """Detect formations for both teams over the chosen segments.

    ``records`` must already attack left to right (see ``ingest.normalize_orientation``).
    Segments with fewer than eight outfield players, or without a candidate
    template of their size, are skipped and reported in ``Detection.skipped``.
    """
    registry = default_registry() if registry is None else registry
    segments = segment(records, every, split_phase=split_phase, limit=MAX_OUTFIELD, substitutions=substitutions)

    groups = {}
    for seg in segments:
        groups.setdefault((seg.team_id, seg.phase), []).append(seg)

    def observe(seg):
        obs = TeamObservation.from_mapping(seg.mean_positions)
        return obs if scaling else to_template_frame(obs, *pitch)

    def run_group(segs):
        results, skipped = [], []
        for seg in segs:
            n = len(seg.mean_positions)
            if n not in OUTFIELD_COUNTS:
                skipped.append((seg, f"{n} outfield players"))
                continue
            obs = observe(seg)
            try:
                if formations is None:
                    best = match(obs, registry, scaling=scaling, scale_to=scale_to)
                else:
                    best = match_restricted(obs, registry, formations, scaling=scaling, scale_to=scale_to)
            except NoTemplateError as e:
                skipped.append((seg, str(e)))
                continue
            results.append((seg, best))
        timeline = stabilize(
            results,
            registry,
            epsilon=change_threshold,
            reset_on_possession_change=change_after_possession,
            scaling=scaling,
            scale_to=scale_to,
            observe=observe,
        )
        return timeline, skipped

    keys = list(groups)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outs = list(pool.map(run_group, [groups[k] for k in keys]))
    else:
        outs = [run_group(groups[k]) for k in keys]

    detection = Detection(timelines={})
    for key, (timeline, skipped) in zip(keys, outs):
        detection.timelines[key] = timeline
        detection.skipped.extend(skipped)
    for seg, reason in detection.skipped:
        log.warning("skipped %s/%s segment at frame %s: %s", seg.team_id, seg.phase, seg.start_frame, reason)
    return detection
