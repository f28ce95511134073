"""
A self-shuffling word
=====================

The fixed point of g splits into two copies of itself.  Check the explicit
block factorization and look at the balanced frontier.
"""

from shuffleword import catalog
from shuffleword.shuffle import (
    g_u_closed_form,
    self_shuffle_witness_g,
    survival_curve,
    verify_block_factorization,
)
from shuffleword.words import to_str

w = catalog.word("g-fix")
schedule = self_shuffle_witness_g()
print(schedule.dumps(8))

report = verify_block_factorization(w, w, w, schedule, 10_000)
print(report.to_dict())

# the U product has a closed form
same = schedule.u_product().prefix(10_000) == g_u_closed_form().prefix(10_000)
print("prod U closed form holds to 10000:", same)

# both sources stay consumed at about the same rate
curve = survival_curve(w, w, w, 2000)
for n in (10, 100, 1000, 2000):
    print(n, curve[n])
print(to_str(schedule.uv_product().prefix(30)))
