"""Exact mean age of probabilistic and cyclic open-loop schedulers.

Walks through the moment algebra on a small two-source system: pattern
moments, gap moments for both scheduler types, and the resulting per-source
and weighted system ages.
"""

from aoisched import (
    Pattern,
    ProbVector,
    SourceSpec,
    SystemSpec,
    cgaw_aoi,
    cgaw_gap_moments,
    pattern_moments,
    pgaw_aoi,
    pgaw_gap_moments,
    subpatterns,
)

# Two exponential sources: a fast important one and a slow background one.
sys = SystemSpec(
    [
        SourceSpec.from_scv(weight=0.8, mean=5.0, scv=1.0),
        SourceSpec.from_scv(weight=0.2, mean=15.0, scv=1.0),
    ]
)

print("== pattern moments ==")
for entries in ([1, 2], [1, 2, 2], [1, 1, 2]):
    pm = pattern_moments(Pattern(entries), sys)
    print(f"  {entries}: mean={pm.mean:.1f}  var={pm.variance:.1f}  q={pm.second_moment:.1f}")

print("\n== cyclic scheduling ==")
pattern = Pattern([1, 2, 1, 2, 2])
for source in (1, 2):
    parts = subpatterns(pattern, source).parts
    gap = cgaw_gap_moments(pattern, sys, source)
    print(f"  source {source}: gaps {parts} -> gap mean {gap.mean:.2f}, q {gap.second_moment:.2f}")
report = cgaw_aoi(pattern, sys)
for s in report.per_source:
    print(f"  age of source {s.source}: {s.mean_aoi:.4f}")
print(f"  weighted system age: {report.system_aoi:.4f}")

print("\n== probabilistic scheduling ==")
probs = ProbVector([0.7, 0.3])
for source in (1, 2):
    gap = pgaw_gap_moments(probs, sys, source)
    print(f"  source {source}: gap mean {gap.mean:.2f}, q {gap.second_moment:.2f}")
report = pgaw_aoi(probs, sys)
print(f"  weighted system age: {report.system_aoi:.4f}")

print("\nCyclic service removes the scheduling randomness, so with the same")
print("long-run service shares it delivers a lower weighted age.")
