"""
Jacobi-Weierstrass forms: periods, Eichler integrals and the completed zeta function.
"""

import anyio


def main():
    """Entry point of the MCP server."""
    from . import server

    anyio.run(server.main)


__all__ = ["main"]
