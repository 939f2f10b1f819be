"""Cut and project a spectrum of hexagon x interval and audit the construction.

Run with ``python3 tutorials/03_product_pipeline.py``.
"""

from spectra_kit import product as Pr

job = Pr.hexagon_interval_job(radius=8, K=10, shifts="random", n_samples=6, seed=5)
print("window measure", job.w_measure(), "; 1/|A| =", 1 / job.a_measure())

for s in Pr.extract_factor_spectrum(job):
    x = tuple(round(float(c), 3) for c in s.x)
    print(f"x={x}: {len(s.cut.gamma)} points, injective={s.cut.injective}, "
          f"orthogonal={s.orthogonality.ok}, tiles={s.tiling.ok}")

report = Pr.theorem4_audit(job)
for step in report.steps:
    print(f"step {step.step}: {step.name:36s} {step.passed}")
