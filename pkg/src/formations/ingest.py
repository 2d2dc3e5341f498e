"""Read provider-neutral tracking files.

Tracking file: UTF-8 CSV with a header row and one row per player per frame::

    period,frame_id,timestamp,team_id,player_id,x,y,possession_team_id

Coordinates are meters with the origin at the pitch center and x pointing to
the right-hand goal. ``possession_team_id`` may be empty (dead ball).

Metadata document (JSON)::

    {
      "pitch_length": 105, "pitch_width": 68,
      "teams": ["home", "away"],
      "goalkeepers": {"home": ["1"], "away": ["31"]},
      "attack_direction": {"home": {"1": "right", "2": "left"},
                           "away": {"1": "left", "2": "right"}}
    }

``attack_direction`` names the goal a team attacks in each period: ``right``
means toward +x (left to right), ``left`` means toward -x.
"""

from dataclasses import dataclass, field, replace
import csv
import io
import json
from pathlib import Path

from .segmentation import FrameRecord

COLUMNS = ("period", "frame_id", "timestamp", "team_id", "player_id", "x", "y", "possession_team_id")
DIRECTIONS = ("left", "right")


class IngestError(ValueError):
    pass


class MetadataError(ValueError):
    pass


@dataclass
class MatchMeta:
    pitch_length: float
    pitch_width: float
    team_ids: tuple
    period_attack_direction: dict  # (team_id, period) -> "left" | "right"
    goalkeeper_ids: dict = field(default_factory=dict)  # team_id -> set of player ids

    def __post_init__(self):
        if self.pitch_length <= 0 or self.pitch_width <= 0:
            raise MetadataError("pitch dimensions must be positive")
        if len(self.team_ids) != 2 or self.team_ids[0] == self.team_ids[1]:
            raise MetadataError("metadata must name exactly two distinct teams")
        periods = {}
        for (team, period), d in self.period_attack_direction.items():
            if team not in self.team_ids:
                raise MetadataError(f"attack direction given for unknown team {team!r}")
            if d not in DIRECTIONS:
                raise MetadataError(f"attack direction must be 'left' or 'right', got {d!r}")
            periods.setdefault(period, {})[team] = d
        for period, dirs in periods.items():
            if len(dirs) == 2 and len(set(dirs.values())) != 2:
                raise MetadataError(f"both teams attack the same way in period {period}")

    @classmethod
    def from_dict(cls, doc):
        try:
            teams = tuple(str(t) for t in doc["teams"])
            directions = {
                (str(team), int(period)): d
                for team, per in doc.get("attack_direction", {}).items()
                for period, d in per.items()
            }
            gks = {str(team): {str(p) for p in ids} for team, ids in doc.get("goalkeepers", {}).items()}
            return cls(
                pitch_length=float(doc.get("pitch_length", 105.0)),
                pitch_width=float(doc.get("pitch_width", 68.0)),
                team_ids=teams,
                period_attack_direction=directions,
                goalkeeper_ids=gks,
            )
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, MetadataError):
                raise
            raise MetadataError(f"malformed metadata: {e}") from e

    def to_dict(self):
        attack = {}
        for (team, period), d in sorted(self.period_attack_direction.items()):
            attack.setdefault(team, {})[str(period)] = d
        return {
            "pitch_length": self.pitch_length,
            "pitch_width": self.pitch_width,
            "teams": list(self.team_ids),
            "goalkeepers": {t: sorted(ids) for t, ids in sorted(self.goalkeeper_ids.items())},
            "attack_direction": attack,
        }


def load_meta(path):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise MetadataError(f"{path}: invalid JSON: {e}") from e
    return MatchMeta.from_dict(doc)


def _open_text(source):
    if hasattr(source, "read"):
        return source
    if isinstance(source, Path) or (source and "\n" not in source and "," not in source):
        return open(source, encoding="utf-8", newline="")
    return io.StringIO(source)


def parse(source, meta: MatchMeta):
    """Read tracking rows into FrameRecords, dropping goalkeepers.

    Records come back sorted by (period, frame_id, team_id, player_id).
    """
    goalkeepers = {(t, p) for t, ids in meta.goalkeeper_ids.items() for p in ids}
    f = _open_text(source)
    try:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None:
            return []
        header = [h.strip() for h in header]
        if tuple(header) != COLUMNS:
            raise IngestError(f"line 1: expected header {','.join(COLUMNS)}")
        records = []
        for row in reader:
            lineno = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(COLUMNS):
                raise IngestError(f"line {lineno}: expected {len(COLUMNS)} fields, got {len(row)}")
            try:
                period, frame_id = int(row[0]), int(row[1])
                timestamp, x, y = float(row[2]), float(row[5]), float(row[6])
            except ValueError as e:
                raise IngestError(f"line {lineno}: {e}") from e
            team, player = row[3].strip(), row[4].strip()
            poss = row[7].strip() or None
            if team not in meta.team_ids:
                raise IngestError(f"line {lineno}: unknown team_id {team!r}")
            if poss is not None and poss not in meta.team_ids:
                raise IngestError(f"line {lineno}: unknown possession_team_id {poss!r}")
            if period < 1:
                raise IngestError(f"line {lineno}: period must be >= 1")
            if (team, player) in goalkeepers:
                continue
            records.append(FrameRecord(period, frame_id, timestamp, team, player, x, y, poss))
    finally:
        if f is not source:
            f.close()
    records.sort(key=lambda r: (r.period, r.frame_id, r.team_id, r.player_id))
    seen = set()
    for r in records:
        key = (r.period, r.frame_id, r.team_id, r.player_id)
        if key in seen:
            raise IngestError(f"duplicate row for player {r.player_id} in frame {r.frame_id}")
        seen.add(key)
    return records


def serialize(records):
    """Write records in the tracking file format."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow([r.period, r.frame_id, repr(r.timestamp), r.team_id, r.player_id,
                    repr(r.x), repr(r.y), r.possession_team_id or ""])
    return out.getvalue()


def normalize_orientation(records, meta: MatchMeta):
    """Rotate team-periods that attack toward -x by 180 degrees so all attack left to right."""
    out = []
    for r in records:
        try:
            direction = meta.period_attack_direction[(r.team_id, r.period)]
        except KeyError:
            raise MetadataError(f"no attack direction for team {r.team_id!r} in period {r.period}") from None
        if direction == "left":
            r = replace(r, x=-r.x, y=-r.y)
        out.append(r)
    return out
