"""
Square-free words from a morphism
=================================

Iterate g from 0, scan the prefix for squares and for the pattern 3u1u3,
then push it to three letters with f.
"""

from shuffleword import catalog, find_pattern_3u1u3, find_square, max_exponent
from shuffleword.words import to_str

g = catalog.morphism("g")
print(g.dumps())

# the fixed point starts with g(0) and keeps growing from there
w = catalog.word("g-fix")
print(to_str(w.prefix(40)))

prefix = w.prefix(20_000)
print("squares:", find_square(prefix).to_dict())
print("3u1u3:  ", find_pattern_3u1u3(prefix).to_dict())
print("max exponent:", max_exponent(prefix[:5000]).to_dict())

# f maps four letters to three and keeps square-freeness
t = catalog.word("ternary-sf")
print(to_str(t.prefix(36)))
print("ternary squares:", find_square(t.prefix(50_000)).to_dict())

# a word that is not square-free, for contrast
print("blocks:", find_square(catalog.word("blocks").prefix(10)).to_dict())
