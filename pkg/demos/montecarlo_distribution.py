"""Final-leakage distribution over many channel draws.

Runs a reduced Monte-Carlo experiment (40 realizations, 100 iterations each)
through the harness, then prints the aggregate summary and distribution
deciles per algorithm. The CSV/JSON artifacts land in demo_out/ and are the
same files the plotting component consumes.
"""

import json

from mpia import ExperimentConfig, run_montecarlo

config = ExperimentConfig(
    num_realizations=40,
    max_outer_iters=100,
    leakage_tol=0.0,
    seed=0,
    output_dir="demo_out",
)
result = run_montecarlo(config)

print(f"{config.num_realizations} realizations x {config.max_outer_iters} iterations, "
      f"K={config.K}, N={config.N}, M={config.M}, d={config.d}")
print()
for alg, agg in result.aggregates.items():
    print(f"{alg}:")
    print(f"  geometric mean final leakage  {agg['geometric_mean_final_leakage']:.4e}")
    print(f"  median final leakage          {agg['median_final_leakage']:.4e}")
    finals = agg["ecdf"]["final_leakage"]
    n = len(finals)
    deciles = [finals[int(q * (n - 1))] for q in (0.1, 0.25, 0.5, 0.75, 0.9)]
    print("  deciles (10/25/50/75/90):     "
          + "  ".join(f"{v:.2e}" for v in deciles))
print()

gm_ratio = (result.aggregates["mpia"]["geometric_mean_final_leakage"]
            / result.aggregates["ilm"]["geometric_mean_final_leakage"])
print(f"geometric-mean ratio (message passing / baseline): {gm_ratio:.3f}")
for label, path in result.files.items():
    print(f"wrote {label}: {path}")

with open(result.files["aggregate"], encoding="utf-8") as fh:
    assert json.load(fh).keys() == {"mpia", "ilm"}
