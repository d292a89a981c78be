"""Verified laboratory for two-parameter geometry of numbers on points (1, xi, xi^2).

Subpackages:

* ``fibword``  -- exact combinatorics of the Fibonacci word and the level sets V_l
* ``psystem``  -- the piecewise-linear model map P on the sector q1 >= 0, q2 <= q1
* ``extremal`` -- integer matrix recurrences, the number xi, approximation points x(v)
* ``minima``   -- certified successive minima of the weighted parallelepipeds
* ``exponents``-- weighted approximation exponents read off the model map
* ``cli``      -- the ``pgn`` command line front end
"""

__version__ = "0.1.0"
