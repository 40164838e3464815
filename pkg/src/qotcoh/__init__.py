"""Quantum optimal transport cost and coherence quantifiers."""
