"""Synthetic tracking data with known formations, for demos and tests.

Each team holds one template while defending and another while attacking. The
block of players is placed on the pitch according to the phase, jittered every
frame, and written in absolute pitch coordinates (teams attacking toward -x are
rotated accordingly), so the whole ingest path gets exercised.
"""

from dataclasses import dataclass, field

import numpy as np

from .ingest import MatchMeta, serialize
from .segmentation import FrameRecord
from .templates import TEMPLATE_FRAME, default_registry


@dataclass
class TeamPlan:
    team_id: str
    goalkeeper: str
    defending: str  # template name while out of possession
    attacking: str  # template name while in possession
    player_ids: list = field(default_factory=list)
    substitution: tuple | None = None  # (period, seconds, player_out, player_in)


def default_plans():
    return [
        TeamPlan("home", "1", "4411", "3241", [str(i) for i in range(2, 12)], (2, 400.0, "11", "12")),
        TeamPlan("away", "31", "433", "4231", [str(i) for i in range(32, 42)], None),
    ]


def default_meta():
    return MatchMeta(
        pitch_length=105.0,
        pitch_width=68.0,
        team_ids=("home", "away"),
        period_attack_direction={
            ("home", 1): "right", ("away", 1): "left",
            ("home", 2): "left", ("away", 2): "right",
        },
        goalkeeper_ids={"home": {"1"}, "away": {"31"}},
    )


def _block(template, phase, pitch_length, pitch_width):
    """Template slots placed as a compact block, attacking toward +x, center-origin meters."""
    pts = template.positions
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    unit = (pts - lo) / np.where(hi - lo == 0, 1, hi - lo)
    # block depth/width and rear-line position in pitch meters
    depth, width, rear = (32.0, 40.0, -38.0) if phase == "defending" else (45.0, 52.0, -20.0)
    scale = pitch_length / TEMPLATE_FRAME[0]
    x = rear * scale + unit[:, 0] * depth * scale
    y = (unit[:, 1] - 0.5) * width * pitch_width / TEMPLATE_FRAME[1]
    return np.column_stack((x, y))


def possession_spells(n_frames, fps, rng, teams, dead_ball=0.05):
    """Possession owner per frame: alternating spells of 5-40 s with occasional dead balls."""
    owner = []
    current = int(rng.integers(2))
    while len(owner) < n_frames:
        length = int(rng.uniform(5, 40) * fps)
        owner.extend([teams[current]] * length)
        if rng.random() < dead_ball:
            owner.extend([None] * int(2 * fps))
        current = 1 - current
    return owner[:n_frames]


def generate_match(period_seconds=600.0, fps=1.0, periods=2, noise=1.0, seed=7, plans=None, meta=None):
    """Return ``(records, meta)`` for a synthetic match, goalkeepers included."""
    rng = np.random.default_rng(seed)
    plans = default_plans() if plans is None else plans
    meta = default_meta() if meta is None else meta
    registry = default_registry()
    L, W = meta.pitch_length, meta.pitch_width
    teams = list(meta.team_ids)
    records = []
    frame_id = 0
    for period in range(1, periods + 1):
        n = int(round(period_seconds * fps))
        owner = possession_spells(n, fps, rng, teams)
        for k in range(n):
            ts = k / fps
            for plan in plans:
                ids = list(plan.player_ids)
                if plan.substitution and period == plan.substitution[0] and ts >= plan.substitution[1]:
                    ids[ids.index(plan.substitution[2])] = plan.substitution[3]
                phase = "attacking" if owner[k] == plan.team_id else "defending"
                name = plan.attacking if phase == "attacking" else plan.defending
                xy = _block(registry[name], phase, L, W) + rng.normal(0.0, noise, (len(ids), 2))
                gk = np.array([[-0.45 * L, 0.0]]) + rng.normal(0.0, noise, (1, 2))
                pts = np.vstack((xy, gk))
                if meta.period_attack_direction[(plan.team_id, period)] == "left":
                    pts = -pts
                for pid, (x, y) in zip(ids + [plan.goalkeeper], pts):
                    records.append(FrameRecord(period, frame_id, round(ts, 3), plan.team_id, pid,
                                               round(float(x), 2), round(float(y), 2), owner[k]))
            frame_id += 1
    return records, meta


def write_match(path_csv, path_meta, **kwargs):
    import json
    from pathlib import Path

    records, meta = generate_match(**kwargs)
    Path(path_csv).write_text(serialize(records), encoding="utf-8")
    Path(path_meta).write_text(json.dumps(meta.to_dict(), indent=2) + "\n", encoding="utf-8")
    return records, meta


def noise_recovery_rates(registry=None, trials=100, sigma_fraction=0.02, seed=20251018, **match_kwargs):
    """Share of noisy copies of each template that are matched back to it.

    Noise is isotropic Gaussian with standard deviation ``sigma_fraction`` times
    the template's width (its extent across the pitch). Each template draws from
    its own seeded stream, so rates are reproducible one template at a time.
    """
    from .matcher import TeamObservation, match

    registry = default_registry() if registry is None else registry
    rates = {}
    for k, template in enumerate(registry):
        rng = np.random.default_rng([seed, k])
        pts = template.positions
        sigma = sigma_fraction * float(pts[:, 1].max() - pts[:, 1].min())
        hits = 0
        for _ in range(trials):
            obs = TeamObservation(template.labels, pts + rng.normal(0.0, sigma, pts.shape))
            hits += match(obs, registry, **match_kwargs).formation_name == template.name
        rates[template.name] = hits / trials
    return rates
