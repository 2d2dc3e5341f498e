"""Detect formations over a whole (synthetic) match.

The generator plants one shape per team and phase: the home side defends in
4-4-1-1 and attacks in 3-2-4-1, the away side defends in 4-3-3 and attacks in
4-2-3-1. Positions are jittered every frame and written in absolute pitch
coordinates, so orientation handling and goalkeeper removal are exercised too.
Note the home substitution in the second half: the player coming on takes
over the slot of the one leaving.
"""

from collections import Counter

from formations.ingest import normalize_orientation
from formations.pipeline import detect
from formations.synthetic import generate_match

# heavy jitter (6 m per frame) so short windows are noisy enough to flicker
records, meta = generate_match(period_seconds=900, fps=1, noise=6.0, seed=11)
outfield = [r for r in records if r.player_id not in ("1", "31")]
records = normalize_orientation(outfield, meta)

# short windows flicker between neighbouring shapes; a stability threshold or
# longer windows settle them
for every, eps in (("30s", 0.0), ("30s", 0.1), ("30s", 0.3), ("5m", 0.0)):
    detection = detect(records, every=every, change_threshold=eps)
    print(f"every {every}, epsilon {eps}")
    for (team, phase), timeline in detection.timelines.items():
        adopted = Counter(e.adopted_formation for e in timeline)
        changes = sum(e.changed for e in timeline)
        top = ", ".join(f"{name} x{n}" for name, n in adopted.most_common(3))
        print(f"  {team:>4} {phase:<9} {len(adopted):>2} shapes (top: {top})  changes: {changes}")
    if detection.skipped:
        print(f"  skipped {len(detection.skipped)} segments")
    print()

# who played where in the last defending window of the home side
last = detection.timelines[("home", "defending")][-1]
print(f"home, defending, frames {last.segment.start_frame}-{last.segment.end_frame}: {last.adopted_formation}")
for pid in sorted(last.adopted_labels, key=int):
    print(f"  #{pid:>2} {last.adopted_labels[pid]}")
