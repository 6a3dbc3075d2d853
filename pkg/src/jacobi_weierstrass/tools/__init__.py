"""
Jacobi-Weierstrass MCP Tools
============================

This module exposes the period, Eichler and mock-form computations as MCP tools.
"""

from .compute_tools import (
    handle_period_lattice,
    period_lattice_tool,
    handle_eichler_vector,
    eichler_vector_tool,
    handle_evaluate_form,
    evaluate_form_tool,
    handle_invariance_check,
    invariance_check_tool,
    handle_shadow_check,
    shadow_check_tool,
    handle_q_expansion,
    q_expansion_tool,
)

__all__ = [
    "handle_period_lattice",
    "period_lattice_tool",
    "handle_eichler_vector",
    "eichler_vector_tool",
    "handle_evaluate_form",
    "evaluate_form_tool",
    "handle_invariance_check",
    "invariance_check_tool",
    "handle_shadow_check",
    "shadow_check_tool",
    "handle_q_expansion",
    "q_expansion_tool",
]
