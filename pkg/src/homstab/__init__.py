"""Exact stable-homology generating series and their point-counting checks.

The package computes, in exact rational arithmetic, the plethystic
generating series for the stable twisted homology of braid groups and
hyperelliptic mapping class groups, and independently verifies the
arithmetic predictions those series make (stable traces, L-function
moments) by brute-force enumeration of hyperelliptic curves over small
finite fields.
"""

__version__ = "0.1.0"
