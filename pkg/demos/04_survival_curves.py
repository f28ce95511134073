"""
Balanced survival
=================

b(n) is the best min(i, j) over split states at level n.  Growth near n/2
goes with a balanced shuffle; a flat tail would suggest none exists.  This is
finite evidence only.
"""

import sys

from shuffleword import catalog
from shuffleword.shuffle import survival_curve
from shuffleword.words import shift

N = int(sys.argv[1]) if len(sys.argv) > 1 else 4000

for name in ("g-fix", "hall", "ternary-sf"):
    s = catalog.word(name)
    curve = survival_curve(s, s, s, N)
    print(f"{name:<11}", [curve[n] for n in (N // 8, N // 4, N // 2, N)], "plateau", curve.plateau())

# shifts of the Hall word behave like the word itself
hall = catalog.word("hall")
for k in (1, 5, 10):
    s = shift(hall, k)
    print(f"hall@{k:<6}", survival_curve(s, s, s, N)[N])

# write a CSV for plotting elsewhere
with open("hall_survival.csv", "w") as fh:
    fh.write(survival_curve(hall, hall, hall, N).to_csv())
