"""Physics of the open two-qubit system: model, dissipation, propagation, correlations."""

from . import appendix, correlations, dissipator, model, oracle, propagator
