"""Match one team's average positions against the template set.

A 4-4-1-1 shape is squeezed into a compact block, as a team defending deep
would be. Matched on raw coordinates the block looks like a different system
entirely; once positions are scaled onto the template box the true shape and
its position labels come back.
"""

from pathlib import Path

import numpy as np

from formations import TeamObservation, default_registry, match
from formations.pipeline import to_template_frame
from formations.render import RenderSpec, render_match
from formations.segmentation import Segment

registry = default_registry()
true_shape = registry["4411"]

# compress toward the block's center, then move it into our own half (center-origin meters)
pts = true_shape.positions
center = pts.mean(axis=0)
block = center + (pts - center) * [0.4, 0.5] - [62.5, 34.0]
ids = [f"p{i}" for i in range(len(pts))]
obs = TeamObservation(ids, block)

raw = match(to_template_frame(obs, 105.0, 68.0), registry, scaling=False)
scaled = match(obs, registry)
print(f"raw positions:    {raw.formation_name:>6}  cost {raw.cost:7.2f}")
print(f"scaled positions: {scaled.formation_name:>6}  cost {scaled.cost:7.2f}")
print()
print("player  true   raw    scaled")
for pid, lab in zip(ids, true_shape.labels):
    print(f"{pid:>6}  {lab:<5}  {raw.labels[pid]:<5}  {scaled.labels[pid]}")

out = Path(__file__).with_name("snapshot.svg")
seg = Segment("demo", "defending", 1, (0, 0), 1, dict(zip(ids, map(tuple, block))))
render_match(seg, scaled, RenderSpec(output_path=str(out)), template=registry[scaled.formation_name])
print(f"\nwrote {out}")
