"""
Shuffling the Hall word
=======================

The Hall word is a shuffle of two words from its own orbit closure.
"""

from shuffleword import catalog
from shuffleword.shuffle import hall_shuffle_witness, verify_block_factorization
from shuffleword.words import compose, factors, to_str

h, hp = catalog.morphism("h"), catalog.morphism("h'")
for name, m in (("h'h", compose(hp, h)), ("hh'", compose(h, hp)), ("hh", h.power(2)), ("h'h'", hp.power(2))):
    print(name, [to_str(im) for im in m.images])

hall, u, v = catalog.word("hall"), catalog.word("hall-u"), catalog.word("hall-v")
print("hall", to_str(hall.prefix(24)))
print("u   ", to_str(u.prefix(24)))
print("v   ", to_str(v.prefix(24)))

schedule = hall_shuffle_witness()
print(schedule.dumps(6))
print(verify_block_factorization(hall, u, v, schedule, 10_000).to_dict())

# u and v only use factors of the Hall word
hay = hall.prefix(100_000)
short = {f for w in (u.prefix(2000), v.prefix(2000)) for n in range(1, 21) for f in factors(w, n)}
print(len(short), "short factors, all found:", all(f in hay for f in short))
