"""
Constraint tables
=================

A constraint over three symbols is a list of allowed triples.  It can drive
a decoder only when each slot is a function of the other two.
"""

from stochdec import NotAFunction, SatisfactionTable, project, to_trellis, validate_table

# The four-symbol table used throughout: slot C is fixed by (A, B), and so on.
rows = [(0, 0, 0), (0, 1, 1), (1, 3, 2), (1, 2, 3), (2, 2, 0), (2, 3, 1), (3, 1, 2), (3, 0, 3)]
table = SatisfactionTable((4, 4, 4), rows)
print("valid:", validate_table(table))

# Lookup tables give the output for every input pair, -1 where the pair is not allowed.
print(table.lookup("C"))

# Which (B, C) pairs go with A = 2?
print(sorted(project(table, "A", 2)))

# The same table read as a trellis section: state in, bit, state out.
print(to_trellis(table))

# Parity and equality tables come ready-made.
print(SatisfactionTable.parity().array)
print(SatisfactionTable.equality(2, 3).array)

# A table where C is not determined by (A, B) can be built, but not validated.
bad = SatisfactionTable((2, 2, 2), [(0, 0, 0), (0, 0, 1)])
try:
    validate_table(bad)
except NotAFunction as exc:
    print("rejected:", exc)
