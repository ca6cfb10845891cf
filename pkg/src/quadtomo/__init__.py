"""Homodyne quadrature tomography workbench.

Subpackages:

- ``oscalg``     exact normal-ordered operator algebra and identity checks
- ``fock``       truncated Fock-space states, operators and quadrature pdfs
- ``sampler``    reproducible Monte Carlo homodyne data generation
- ``estimators`` estimator kernels, averaging engine, noise unbiasing
- ``frames``     vectorization calculus and frame-operator numerics
- ``spintomo``   finite-dimensional swap-expansion cross-check for spin
- ``cli``        config-driven command line runner
"""

__version__ = "0.1.0"

from . import oscalg  # noqa: F401

__all__ = ["oscalg", "__version__"]
