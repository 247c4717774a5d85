"""Numerical services: sharp constants, refinements, verification campaigns and job dispatch."""
