"""
Building a shuffle from recurrence
==================================

Grow U and V blocks by jumping to the next occurrence of the block product
built so far.  The covered prefix grows geometrically, so the search limit
runs out after a handful of rounds.
"""

from shuffleword import catalog
from shuffleword.errors import RecurrenceBudgetExceeded
from shuffleword.shuffle import build_recurrent_shuffle, verify_block_factorization

hall = catalog.word("hall")
for rounds in range(1, 8):
    try:
        res = build_recurrent_shuffle(hall, rounds, 1_000_000)
    except RecurrenceBudgetExceeded as exc:
        print(rounds, "budget exceeded:", exc)
        break
    sched = res.schedule
    rep = verify_block_factorization(hall, sched.u_product(), sched.v_product(), sched, res.depth)
    print(rounds, "covered", res.covered, "positions", res.positions, "ok", rep.ok)

print(build_recurrent_shuffle(hall, 3, 10_000).schedule.dumps(2))

# a letter that never comes back stops the construction at once
try:
    build_recurrent_shuffle(catalog.word("hall-3"), 1, 1_000_000, u0="3")
except RecurrenceBudgetExceeded as exc:
    print("hall-3:", exc)
