# Relative sign/verify cost against plain Schnorr and a one-level
# certificate chain. Absolute numbers depend on the machine; ratios should not.
from e2ibs import bench

reports = bench.bench_all(iters=1000, seed=0)
print(bench.emit_table(reports, "text"))
by = {r.scheme: r for r in reports}
print(f"verify e2ibs / hier2:         {bench.verify_ratio(reports):.2f}")
print(f"sign   e2ibs / schnorr-plain: {by['e2ibs'].sign_ns / by['schnorr-plain'].sign_ns:.2f}")
print(f"key extraction:               {by['e2ibs'].extract_per_sec:,.0f} keys/s")
