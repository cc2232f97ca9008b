"""Computational companion for Diophantine tuples over finite fields and integers.

Subpackages are organised by task: field arithmetic, character sums,
polynomial certificates, clique search, product-set decompositions,
sieve constants and the integer-tuple search.  The ``dtlab`` console
script wires them together.
"""

__version__ = "0.1.0"
