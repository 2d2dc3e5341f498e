"""Noise recovery experiment: how often does a jittered template match itself?

Every template in the bundled set is perturbed with Gaussian noise (sigma = 2%
of the template's width), 100 times each, and matched against the full set.
The per-template recovery rates are written to docs/noise_baseline.json, which
the acceptance suite compares against.
"""

import json
from pathlib import Path

import numpy as np

from formations.synthetic import noise_recovery_rates

TRIALS = 100
SIGMA_FRACTION = 0.02
SEED = 20251018

rates = noise_recovery_rates(trials=TRIALS, sigma_fraction=SIGMA_FRACTION, seed=SEED)
mean = float(np.mean(list(rates.values())))
print(f"mean recovery over {len(rates)} templates: {mean:.4f}")
for name, rate in rates.items():
    if rate < 1:
        print(f"  {name:>9}: {rate:.2f}")

# same experiment with positions scaled onto the bounding box of the whole set
registry_rates = noise_recovery_rates(trials=TRIALS, sigma_fraction=SIGMA_FRACTION, seed=SEED, scale_to="registry")
print(f"registry-box scaling, mean recovery: {np.mean(list(registry_rates.values())):.4f}")

out = Path(__file__).resolve().parents[1] / "docs" / "noise_baseline.json"
out.write_text(json.dumps({
    "trials": TRIALS,
    "sigma_fraction": SIGMA_FRACTION,
    "seed": SEED,
    "scale_to": "template",
    "mean": mean,
    "rates": rates,
    "registry_scaling_mean": float(np.mean(list(registry_rates.values()))),
}, indent=1) + "\n")
print(f"wrote {out}")
