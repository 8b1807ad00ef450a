"""Shock-capturing scheme laboratory for the 1-D Saint-Venant system.

Central-upwind (CU), Rusanov-Burstein-Mirin (RBM) and A-WENO schemes, the
RBM-CU / RBM-A-WENO combined schemes, and experimental convergence rates
measured on three imbedded grids.
"""

__version__ = "0.1.0"
