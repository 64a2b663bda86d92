"""Exact zero spectra of Goss polynomials for F_q-lattices.

Subpackages:

* :mod:`gosszeros.digits`   -- base-p/base-q digit calculus, heights
* :mod:`gosszeros.sheats`   -- Sheats compositions, weights, power sums
* :mod:`gosszeros.spectrum` -- per-k profiles, approximation numbers,
  vanishing orders, predicted Newton polygons
* :mod:`gosszeros.algebra`  -- exact F_q, F_q[T] and fraction-field arithmetic
* :mod:`gosszeros.goss`     -- finite-lattice exponentials, the Goss
  recursion, Newton extraction, and the prediction-vs-oracle check
* :mod:`gosszeros.cli`      -- the ``gosszeros`` command line
"""

from .digits import Config

__all__ = ["Config"]
__version__ = "0.1.0"
