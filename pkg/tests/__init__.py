"""Tests for the Jacobi-Weierstrass forms package."""
