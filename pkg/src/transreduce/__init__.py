"""Finite transducers, defense systems and finite substitutions.

A desk-scale laboratory for the reduction chain
PCP -> unary rational-relation inclusion -> Z-transducer inclusion ->
defense-system unreliability -> finite-substitution equivalence on b{0,1}*c,
with exact decision procedures and brute-force oracles for concrete instances.
"""

__version__ = "0.1.0"
