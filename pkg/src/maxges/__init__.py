"""Maximal genuinely entangled subspaces from generator matrices."""
