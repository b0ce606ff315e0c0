"""Subordination calculus for negative Bernstein functions.

Builds the convolution semigroups attached to a Bernstein function,
applies them to matrix generators, and runs the numerical holomorphy
criteria on the result.
"""

__version__ = "0.1.0"
