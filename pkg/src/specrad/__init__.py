"""specrad: a numerical laboratory for spectral-radius statistics of large
i.i.d. random matrices.

Subpackages cover: matrix ensembles and flows (ensembles), hermitization and
resolvents (hermitization), the scalar Dyson equation (mde), Girko-identity
quadrature (girko), exact Ginibre formulas (ginibre), singular-value Dyson
Brownian motion (dbm), lower-tail statistics (tails), and a reproducible
Monte Carlo harness (cli).
"""

__version__ = "0.1.0"
