"""Exact arithmetic for cyclic and iterated algebras over number fields.

Number-field towers, associative and nonassociative cyclic algebras, twisted
polynomial rings and Petit algebras, iterated algebras with division
certification, and space-time block codebooks built from them.
"""

__version__ = "0.1.0"
