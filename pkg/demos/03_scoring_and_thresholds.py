# Exact scores, knife-edge thresholds, and threshold derivation
#
# A claim's correctness score is the fraction of its questions answered
# correctly. The score is held as an exact rational, because the interesting
# thresholds sit exactly on the knife edge of popular fractions.

from fractions import Fraction

from clozecheck import Label, Objective, Threshold, assign_label, derive_threshold, pr_curve

# 3/4 = 0.75 sits just below 0.76, and 2/3 = 0.666... just below 0.67.
# With float arithmetic these comparisons would be one rounding error away
# from flipping; with rationals they are unambiguous.
for score, phi in ((Fraction(3, 4), "0.76"), (Fraction(2, 3), "0.67"), (Fraction(1), "0.76")):
    label = assign_label(score, Threshold.preset(phi))
    print(f"  s = {score!s:>4}  vs  phi = {phi}:  {label.value}")

# Users who want "at least 3 of 4" semantics can say so directly with a
# fractional threshold: 3/4 >= 3/4 passes.
print("  s = 3/4  vs  phi = 3/4 :", assign_label(Fraction(3, 4), Threshold.preset("3/4")).value)
print()

# Single-question claims have all-or-nothing scores: 1/1 passes any preset,
# 0/1 passes none.
assert assign_label(Fraction(1, 1), Threshold.preset("0.76")) is Label.SUPPORTS
assert assign_label(Fraction(0, 1), Threshold.preset("0.67")) is Label.MANUAL_REVIEW

# The threshold itself can be derived from scored claims with gold labels.
# Candidates are every achievable score; each gets exact precision/recall.
scored = [
    (Fraction(1), True), (Fraction(1), True), (Fraction(1), False),
    (Fraction(3, 4), True), (Fraction(2, 3), True), (Fraction(2, 3), False),
    (Fraction(1, 2), False), (Fraction(1, 4), False), (Fraction(0), False),
    (Fraction(0), True),
]
print("PR curve over", len(scored), "scored claims:")
for point in pr_curve(scored):
    print(
        f"  phi >= {str(point.phi_candidate):>5}: precision {float(point.precision):.3f}"
        f" recall {float(point.recall):.3f} f1 {float(point.f1):.3f}"
        f" (labels {point.supports_count} claims SUPPORTS)"
    )

threshold, _ = derive_threshold(scored, Objective.parse("max_f1"))
print(f"\nmax-F1 threshold: phi = {threshold.display} ({threshold.origin.value})")
threshold, _ = derive_threshold(scored, Objective.parse("precision_at_least:0.66"))
print(f"precision >= 0.66 threshold: phi = {threshold.display}")
