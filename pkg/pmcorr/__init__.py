"""Post-Markovian dynamics of entanglement and quantum discord in an open two-qubit system."""
