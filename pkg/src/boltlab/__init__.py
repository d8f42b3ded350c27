"""Numerical laboratory for the linear instability of the Taub-Bolt metric
under Ricci flow.

The package verifies, at desk scale, that the Taub-Bolt gravitational
instanton is linearly unstable for the Ricci flow and demonstrates the
ancient-solution mechanism g(t) ~ g0 + e^{lambda t} h by direct simulation
of the Ricci-de Turck flow in the cohomogeneity-one ansatz.

Modules
-------
profile        closed-form metric profile (a, b, c) and Christoffel symbols
curvature      Riemann/sectional/Ricci tables and the profile certificate
grid           geodesic-coordinate radial grids shared by solver and flow
fields         diagonal radial symmetric 2-tensor fields
calculus       covariant gradients, the quadratic form a, Lichnerowicz
quadrature     adaptive quadrature with analytic exponential tail bounds
certificate    the explicit instability certificate (cutoff witness field)
spectral       variational eigensolver for the unstable mode, frequency fn
flow           Ricci-de Turck flow integrator and the ancient-family overlay
frame_geometry generic Koszul-formula geometry used as an independent oracle
cli            command-line front end and serialization
"""

from .profile import BoltProfile
from .curvature import CurvatureTable, curvature, certify_profile_bounds
from .fields import DiagonalTensorField, witness_field
from .records import Certificate

__all__ = [
    "BoltProfile",
    "CurvatureTable",
    "curvature",
    "certify_profile_bounds",
    "DiagonalTensorField",
    "witness_field",
    "Certificate",
]

__version__ = "0.1.0"
