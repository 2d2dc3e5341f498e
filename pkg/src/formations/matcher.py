"""Formation matching: pick the cheapest template and label every player.

Each candidate template is fitted by solving a linear sum assignment on the
Euclidean distances between (optionally scaled) player positions and the
template slots. The template with the lowest total cost wins; ties go to the
template that comes first in the registry.
"""

from dataclasses import dataclass, field

import numpy as np

from . import lsa
from .templates import FormationTemplate, TemplateBounds, bounds, filter_by_count

SCALE_TARGETS = ("template", "registry")


class InvalidObservation(ValueError):
    pass


class NoTemplateError(LookupError):
    pass


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class TeamObservation:
    """Outfield positions of one team, attacking left to right."""

    player_ids: tuple
    positions: np.ndarray  # (n, 2)

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float).reshape(-1, 2)
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "player_ids", tuple(self.player_ids))
        if len(self.player_ids) != len(pos):
            raise InvalidObservation("player_ids and positions differ in length")
        if len(set(self.player_ids)) != len(self.player_ids):
            raise InvalidObservation("player_ids must be unique")

    @classmethod
    def from_mapping(cls, positions):
        """Build from ``{player_id: (x, y)}``; players are ordered by id."""
        ids = sorted(positions)
        return cls(tuple(ids), np.array([positions[i] for i in ids], dtype=float))

    def __len__(self):
        return len(self.player_ids)


@dataclass(frozen=True)
class MatchResult:
    formation_name: str
    labels: dict  # player_id -> slot label
    cost: float
    scaled: bool
    slot_index: tuple = field(default=(), repr=False)  # slot assigned to each player, in observation order


def scale_positions(obs, target: TemplateBounds) -> TeamObservation:
    """Map the observation's bounding box onto ``target``, axis by axis.

    An axis on which all players coincide is sent to the target midpoint.
    """
    if len(obs) < 2:
        raise InvalidObservation("scaling needs at least two players")
    pos = obs.positions
    lo = pos.min(axis=0)
    hi = pos.max(axis=0)
    t_lo = np.array([target.min_x, target.min_y])
    t_hi = np.array([target.max_x, target.max_y])
    out = np.empty_like(pos)
    for axis in range(2):
        span = hi[axis] - lo[axis]
        if span == 0:
            out[:, axis] = (t_lo[axis] + t_hi[axis]) / 2
        else:
            frac = (pos[:, axis] - lo[axis]) / span
            # lerp form hits both target edges exactly
            out[:, axis] = t_lo[axis] * (1 - frac) + t_hi[axis] * frac
    np.clip(out, t_lo, t_hi, out=out)
    return TeamObservation(obs.player_ids, out)


def build_cost_matrix(obs, template: FormationTemplate):
    """Euclidean distance between every player (rows) and template slot (columns)."""
    if len(obs) != template.outfielder_count:
        raise InvalidObservation(
            f"{len(obs)} players cannot be matched to {template.outfielder_count}-slot template {template.name}"
        )
    diff = obs.positions[:, None, :] - template.positions[None, :, :]
    return np.sqrt((diff**2).sum(axis=-1))


def fit_template(obs, template, scaling=True, target=None) -> MatchResult:
    """Assign players to the slots of one template.

    With scaling on, positions are mapped onto ``target`` first; by default the
    target is the template's own bounding box.
    """
    if scaling:
        placed = scale_positions(obs, target if target is not None else bounds(template))
    else:
        placed = obs
    assignment = lsa.solve(build_cost_matrix(placed, template))
    labels = {pid: template.labels[j] for pid, j in zip(obs.player_ids, assignment.mapping)}
    return MatchResult(
        formation_name=template.name,
        labels=labels,
        cost=assignment.total_cost,
        scaled=bool(scaling),
        slot_index=assignment.mapping,
    )


def match(obs, registry, scaling=True, scale_to="template") -> MatchResult:
    """Best-fitting template among those with as many slots as there are players.

    ``scale_to="registry"`` scales positions onto the bounding box of the whole
    registry instead of each candidate's own box.
    """
    return _best_fit(obs, registry, list(registry), scaling, scale_to)


def match_restricted(obs, registry, allowed, scaling=True, scale_to="template") -> MatchResult:
    """As :func:`match`, with the candidate set limited to ``allowed`` names.

    Scaling targets still refer to the full registry, so restricting to every
    name reproduces :func:`match` exactly.
    """
    unknown = [name for name in allowed if name not in registry]
    if unknown:
        raise ConfigurationError(f"unknown formation(s): {', '.join(unknown)}")
    allowed = set(allowed)
    return _best_fit(obs, registry, [t for t in registry if t.name in allowed], scaling, scale_to)


def _best_fit(obs, registry, templates, scaling, scale_to):
    if scale_to not in SCALE_TARGETS:
        raise ConfigurationError(f"scale_to must be one of {SCALE_TARGETS}, got {scale_to!r}")
    n = len(obs)
    candidates = filter_by_count(templates, n)
    if not candidates:
        raise NoTemplateError(f"no candidate template with {n} outfield slots")
    target = None
    if scale_to == "registry":
        target = registry.bounds() if hasattr(registry, "bounds") else bounds(registry)
    best = None
    for template in candidates:
        result = fit_template(obs, template, scaling=scaling, target=target)
        if best is None or result.cost < best.cost:
            best = result
    return best
