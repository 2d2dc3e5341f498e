"""Split tracking frames into per-team segments and average player positions.

A segmentation *policy* chooses the windows: every frame, every possession
spell, every period, or fixed-length time windows anchored at period start.
With phase splitting on, each window yields an attacking segment (frames where
the team has the ball) and a defending segment (frames where the opponent has
it); frames without a team in possession are left out.
"""

from dataclasses import dataclass, field
import math
import re

import numpy as np

ATTACKING = "attacking"
DEFENDING = "defending"
MAX_OUTFIELD = 10

_DURATION = re.compile(r"^(\d+)([sm])$")


class SegmentationError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class FrameRecord:
    period: int
    frame_id: int
    timestamp: float  # seconds since period start
    team_id: str
    player_id: str
    x: float
    y: float
    possession_team_id: str | None = None


@dataclass(frozen=True)
class Policy:
    kind: str  # "frame" | "possession" | "period" | "duration"
    seconds: float | None = None

    def __str__(self):
        if self.kind != "duration":
            return self.kind
        s = int(self.seconds)
        return f"{s // 60}m" if s % 60 == 0 else f"{s}s"


def parse_policy(every) -> Policy:
    """Parse ``frame``, ``possession``, ``period`` or a duration like ``10s`` / ``5m``."""
    if isinstance(every, Policy):
        return every
    if isinstance(every, (int, float)) and not isinstance(every, bool):
        if every <= 0:
            raise SegmentationError("duration must be positive")
        return Policy("duration", float(every))
    text = str(every).strip().lower()
    if text in ("frame", "possession", "period"):
        return Policy(text)
    m = _DURATION.match(text)
    if not m or int(m.group(1)) == 0:
        raise SegmentationError(f"invalid segment policy {every!r}; use frame, possession, period, <n>s or <n>m")
    n = int(m.group(1))
    return Policy("duration", float(n * 60 if m.group(2) == "m" else n))


@dataclass
class Segment:
    team_id: str
    phase: str | None
    period: int
    frame_range: tuple  # (first frame_id, last frame_id)
    frame_count: int
    mean_positions: dict  # player_id -> (x, y)
    player_frames: dict = field(default_factory=dict)  # player_id -> frames present, before dropping
    dropped: tuple = ()
    possession_index: int = 0  # possession spell containing the first frame
    window: int = 0

    @property
    def start_frame(self):
        return self.frame_range[0]

    @property
    def end_frame(self):
        return self.frame_range[1]

    @property
    def undermanned(self):
        return len(self.mean_positions) < MAX_OUTFIELD


def mean_position(frames):
    """Arithmetic mean (x, y) over a player's frames."""
    if len(frames) == 0:
        raise SegmentationError("cannot average an empty list of frames")
    xy = np.array([(f.x, f.y) for f in frames], dtype=float)
    m = xy.mean(axis=0)
    return float(m[0]), float(m[1])


def _id_key(pid):
    s = str(pid)
    return (0, int(s), s) if s.isdigit() else (1, 0, s)


def resolve_substitutions(player_frames, limit=MAX_OUTFIELD, mode="drop"):
    """Keep the ``limit`` players seen in the most frames.

    Ties go to the lower player id (numeric ids compare numerically). With
    fewer than ``limit`` players everyone is kept.
    """
    if mode != "drop":
        raise SegmentationError(f"unsupported substitution mode {mode!r}")
    ranked = sorted(player_frames, key=lambda pid: (-player_frames[pid], _id_key(pid)))
    return set(ranked[:limit])


def _frames(records):
    """Group sorted records into frames: list of (period, frame_id, timestamp, possession, records)."""
    out = []
    for r in records:
        if out and out[-1][0] == r.period and out[-1][1] == r.frame_id:
            out[-1][4].append(r)
        else:
            out.append((r.period, r.frame_id, r.timestamp, r.possession_team_id, [r]))
    return out


def segment(records, policy="period", split_phase=True, limit=MAX_OUTFIELD, substitutions="drop"):
    """Partition ``records`` into ordered per-team segments with mean positions."""
    policy = parse_policy(policy)
    records = sorted(records, key=lambda r: (r.period, r.frame_id))
    frames = _frames(records)
    needs_possession = policy.kind == "possession" or split_phase
    if needs_possession and frames and all(f[3] is None for f in frames):
        raise SegmentationError("possession data is required for possession segments and phase splitting")

    teams = sorted({r.team_id for r in records}, key=_id_key)

    # window key and possession spell per frame
    windows = []  # list of (key, [frame indices])
    spell = -1
    prev = object()
    prev_period = None
    for idx, (period, frame_id, ts, poss, _) in enumerate(frames):
        if period != prev_period or poss != prev:
            spell += 1
        prev, prev_period = poss, period
        if policy.kind == "frame":
            key = (period, frame_id)
        elif policy.kind == "period":
            key = (period,)
        elif policy.kind == "possession":
            key = (period, spell)
        else:
            key = (period, math.floor(ts / policy.seconds))
        if not windows or windows[-1][0] != key:
            windows.append((key, [], []))
        windows[-1][1].append(idx)
        windows[-1][2].append(spell)

    segments = []
    for w, (key, idxs, spells) in enumerate(windows):
        for team in teams:
            if split_phase:
                groups = [
                    (ATTACKING, lambda p, t=team: p == t),
                    (DEFENDING, lambda p, t=team: p is not None and p != t),
                ]
            else:
                groups = [(None, lambda p: True)]
            for phase, keep in groups:
                sel = [(i, s) for i, s in zip(idxs, spells) if keep(frames[i][3])]
                per_player = {}
                frame_ids = []
                for i, _ in sel:
                    rows = [r for r in frames[i][4] if r.team_id == team]
                    if not rows:
                        continue
                    frame_ids.append(frames[i][1])
                    for r in rows:
                        per_player.setdefault(r.player_id, []).append(r)
                if not frame_ids:
                    continue
                counts = {pid: len(v) for pid, v in per_player.items()}
                kept = resolve_substitutions(counts, limit, substitutions)
                first_spell = next(s for i, s in sel if any(r.team_id == team for r in frames[i][4]))
                segments.append(
                    Segment(
                        team_id=team,
                        phase=phase,
                        period=key[0],
                        frame_range=(frame_ids[0], frame_ids[-1]),
                        frame_count=len(frame_ids),
                        mean_positions={
                            pid: mean_position(per_player[pid])
                            for pid in sorted(kept, key=_id_key)
                        },
                        player_frames=counts,
                        dropped=tuple(sorted(set(counts) - kept, key=_id_key)),
                        possession_index=first_spell,
                        window=w,
                    )
                )
    return segments
