"""
Direct execution of the jacobi_weierstrass package starts the MCP server.
"""

from . import main

if __name__ == "__main__":
    main()
