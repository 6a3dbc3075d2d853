"""
Jacobi-Weierstrass MCP Server
=============================

This module serves the period lattice, Eichler integral and mock-form
computations over the MCP stdio transport.
"""

import logging
import mcp.types as types
from typing import Dict, Any, List
from mcp.server import Server
from mcp.server.models import InitializationOptions
from mcp.server import NotificationOptions
from mcp.server.stdio import stdio_server
from .config import Settings
from .tools import (
    handle_period_lattice,
    handle_eichler_vector,
    handle_evaluate_form,
    handle_invariance_check,
    handle_shadow_check,
    handle_q_expansion,
)
from .tools import (
    period_lattice_tool,
    eichler_vector_tool,
    evaluate_form_tool,
    invariance_check_tool,
    shadow_check_tool,
    q_expansion_tool,
)

settings = Settings()
logger = logging.getLogger("jacobi-weierstrass-server")
logger.setLevel(settings.LOG_LEVEL.upper())
server = Server(settings.APP_NAME)

HANDLERS = {
    "period_lattice": handle_period_lattice,
    "eichler_vector": handle_eichler_vector,
    "evaluate_form": handle_evaluate_form,
    "invariance_check": handle_invariance_check,
    "shadow_check": handle_shadow_check,
    "q_expansion": handle_q_expansion,
}


@server.list_tools()
async def list_tools() -> List[types.Tool]:
    """List available computation tools."""
    return [
        period_lattice_tool,
        eichler_vector_tool,
        evaluate_form_tool,
        invariance_check_tool,
        shadow_check_tool,
        q_expansion_tool,
    ]


@server.call_tool()
async def call_tool(name: str, arguments: Dict[str, Any]) -> List[types.TextContent]:
    """Dispatch a tool call to its handler."""
    logger.debug("Calling tool %s with arguments %s", name, arguments)
    try:
        handler = HANDLERS.get(name)
        if handler is None:
            return [types.TextContent(type="text", text=f"Error: Unknown tool {name}")]
        return await handler(arguments or {})
    except Exception as e:
        logger.error("Tool error: %s", str(e))
        return [types.TextContent(type="text", text=f"Error: {str(e)}")]


async def main():
    """Run the server async context."""
    logger.info("Starting %s at %d digits", settings.APP_NAME, settings.WORKING_DIGITS)
    async with stdio_server() as streams:
        await server.run(
            streams[0],
            streams[1],
            InitializationOptions(
                server_name=settings.APP_NAME,
                server_version=settings.APP_VERSION,
                capabilities=server.get_capabilities(
                    notification_options=NotificationOptions(),
                    experimental_capabilities={},
                ),
            ),
        )
