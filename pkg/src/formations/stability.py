"""Damp formation flicker across consecutive segments.

A new best-fitting formation replaces the incumbent only when it is cheaper by
more than a relative margin ``epsilon``:

    (incumbent_cost - candidate_cost) / candidate_cost > epsilon

Both costs are measured on the current segment: the incumbent template is
re-fitted to the current positions, so the two numbers are comparable.
"""

from dataclasses import dataclass
import math

from .matcher import ConfigurationError, MatchResult, TeamObservation, fit_template


@dataclass(frozen=True)
class TimelineEntry:
    segment: object
    adopted_formation: str
    adopted_labels: dict
    adopted_cost: float
    candidate_formation: str
    candidate_cost: float
    incumbent_cost: float  # nan when there was no incumbent to compare against
    changed: bool
    reset: bool


def should_switch(incumbent_cost, candidate_cost, epsilon):
    """Relative-improvement test with a strict inequality."""
    gain = incumbent_cost - candidate_cost
    if candidate_cost == 0:
        return gain > 0
    return gain / candidate_cost > epsilon


def observation(segment):
    return TeamObservation.from_mapping(segment.mean_positions)


def stabilize(
    results,
    registry,
    epsilon=0.0,
    reset_on_possession_change=False,
    scaling=True,
    scale_to="template",
    observe=observation,
):
    """Fold ``(segment, best MatchResult)`` pairs into a timeline of adopted formations.

    The first segment adopts its candidate. So does any segment after a
    possession change (when ``reset_on_possession_change``) or whose player
    count no longer fits the incumbent template. ``observe`` turns a segment
    into the observation the candidates were fitted on.
    """
    if epsilon is None or not epsilon >= 0:
        raise ConfigurationError(f"epsilon must be >= 0, got {epsilon!r}")
    target = registry.bounds() if scale_to == "registry" else None

    timeline = []
    incumbent = None
    last = None
    for seg, best in results:
        reset = (
            reset_on_possession_change
            and last is not None
            and getattr(seg, "possession_index", None) != getattr(last, "possession_index", None)
        )
        template = registry[incumbent] if incumbent is not None and incumbent in registry else None
        usable = template is not None and template.outfielder_count == len(best.labels) and not reset
        if not usable:
            entry = _adopt(seg, best, math.nan, changed=incumbent is not None and best.formation_name != incumbent, reset=reset)
        elif best.formation_name == incumbent:
            entry = _adopt(seg, best, best.cost, changed=False, reset=False)
        else:
            refit = fit_template(observe(seg), template, scaling=scaling, target=target)
            if should_switch(refit.cost, best.cost, epsilon):
                entry = _adopt(seg, best, refit.cost, changed=True, reset=False)
            else:
                entry = TimelineEntry(
                    segment=seg,
                    adopted_formation=refit.formation_name,
                    adopted_labels=refit.labels,
                    adopted_cost=refit.cost,
                    candidate_formation=best.formation_name,
                    candidate_cost=best.cost,
                    incumbent_cost=refit.cost,
                    changed=False,
                    reset=False,
                )
        timeline.append(entry)
        incumbent = entry.adopted_formation
        last = seg
    return timeline


def _adopt(seg, best: MatchResult, incumbent_cost, changed, reset):
    return TimelineEntry(
        segment=seg,
        adopted_formation=best.formation_name,
        adopted_labels=best.labels,
        adopted_cost=best.cost,
        candidate_formation=best.formation_name,
        candidate_cost=best.cost,
        incumbent_cost=incumbent_cost,
        changed=changed,
        reset=reset,
    )


def count_changes(timeline):
    return sum(
        1 for prev, cur in zip(timeline, timeline[1:]) if prev.adopted_formation != cur.adopted_formation
    )
