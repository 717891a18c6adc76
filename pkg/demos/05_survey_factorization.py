"""Low ND rank factorization of a mental-health survey tensor.

A 5 x 7 x 2 tensor (age group, year, gender) of the share of respondents
reporting fair or poor mental health.  Ages are ordered by reported
prevalence, years reflect the pandemic-era deterioration, and the gender
mode only carries nonnegativity.  A rank-two fit explains most of the
structure; the second term isolates the female-specific deviation.
"""

import numpy as np

from ndrank import FitConfig, datasets, hals

T, posets = datasets.fixture("cchs")
tss = float((T ** 2).sum())
print("tensor shape:", T.shape, " total sum of squares:", round(tss, 2))

for r in (1, 2):
    fact, report = hals(T, posets, FitConfig(rank=r, restarts=10, seed=0))
    rss = report.objective_trace[-1]
    print(f"rank {r}: residual sum of squares {rss:6.2f}  "
          f"(explains {100 * (1 - rss / tss):.2f}% of the total)")

# display gauge: gender factors sum to one, year factors sum to the number
# of years, age factors absorb the scale
fact, _ = hals(T, posets, FitConfig(rank=2, restarts=10, seed=0))
shown = fact.rescaled({2: 1.0, 1: 7.0}, absorb=0)
age, year, gender = shown.factors
labels = datasets.CCHS_AGE_GROUPS
print("\nage-group factors (scale absorbed):")
for row, lab in enumerate(labels):
    print(f"  {lab:>6}: " + "  ".join(f"{age[i][row]:6.2f}" for i in range(2)))
print("year factors:")
for row, lab in enumerate(datasets.CCHS_YEARS):
    print(f"  {lab:>6}: " + "  ".join(f"{year[i][row]:6.2f}" for i in range(2)))
print("gender factors:")
for row, lab in enumerate(datasets.CCHS_GENDERS):
    print(f"  {lab:>6}: " + "  ".join(f"{gender[i][row]:6.2f}" for i in range(2)))
