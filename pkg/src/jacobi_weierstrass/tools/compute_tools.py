"""MCP tools running the Jacobi-Weierstrass computations in worker threads."""

import logging
from typing import Any, Callable, Dict, List

import anyio
import mcp.types as types
from mpmath import mp

from ..config import Settings
from ..errors import PoleError
from ..mockform import (
    MockFormContext,
    f_value,
    holomorphic_part_q,
    rho_invariance_check,
    shadow_check,
)
from ..numeric import PrecisionContext, complex_to_pair, parse_complex
from ..periods import eichler_vector, period_lattice
from ..qforms import load_form
from ..records import (
    EichlerRecord,
    FValueRecord,
    InvarianceRecord,
    PeriodLatticeRecord,
    QExpansionRecord,
    ShadowRecord,
)
from ..symrep import IDENTITY, SL2Z

logger = logging.getLogger(__name__)
settings = Settings()

_FORM = {
    "type": "string",
    "description": "Built-in form ('delta', 'eta3p8', 'eta2x11') or a JSON/text file path",
    "default": "delta",
}
_DIGITS = {
    "type": "integer",
    "description": "Significant digits (default: JWF_DIGITS)",
    "minimum": 15,
}
_TAU = {"type": "string", "description": "Point in the upper half-plane as 're,im'"}
_MATRIX = {
    "type": "string",
    "description": "SL2(Z) matrix as 'a,b,c,d' (default: identity)",
    "default": "1,0,0,1",
}

period_lattice_tool = types.Tool(
    name="period_lattice",
    description="Recover the period lattice of a cusp form from its period polynomials. Returns a Gauss-reduced basis (omega1, omega2), the residual and the generating period values.",
    inputSchema={
        "type": "object",
        "properties": {"form": _FORM, "digits": _DIGITS},
    },
)

eichler_vector_tool = types.Tool(
    name="eichler_vector",
    description="Eichler integrals E_l(tau) = int_tau^{i infinity} f(t) t^l dt for l = 0..k-2, expressed in the basis M(e1, e2).",
    inputSchema={
        "type": "object",
        "properties": {
            "form": _FORM,
            "digits": _DIGITS,
            "tau": _TAU,
            "matrix": _MATRIX,
        },
        "required": ["tau"],
    },
)

evaluate_form_tool = types.Tool(
    name="evaluate_form",
    description="Evaluate the vector-valued Jacobi-Weierstrass form F(tau, M) in the standard basis. Components at poles are flagged.",
    inputSchema={
        "type": "object",
        "properties": {
            "form": _FORM,
            "digits": _DIGITS,
            "tau": _TAU,
            "matrix": _MATRIX,
        },
        "required": ["tau"],
    },
)

invariance_check_tool = types.Tool(
    name="invariance_check",
    description="Compare F(gamma tau, M) with N(gamma) F(tau, gamma^-1 M) and report the largest deviation.",
    inputSchema={
        "type": "object",
        "properties": {
            "form": _FORM,
            "digits": _DIGITS,
            "tau": _TAU,
            "gamma": {"type": "string", "description": "Group element as 'a,b,c,d'"},
            "matrix": _MATRIX,
        },
        "required": ["tau", "gamma"],
    },
)

shadow_check_tool = types.Tool(
    name="shadow_check",
    description="Finite-difference xi_0 F against (2 pi i / Vol) f(tau) (tau e1 + e2)^(k-2) up to the measured sign.",
    inputSchema={
        "type": "object",
        "properties": {
            "form": _FORM,
            "digits": _DIGITS,
            "tau": _TAU,
            "matrix": _MATRIX,
            "h": {"type": "string", "description": "Finite-difference step"},
            "tol": {
                "type": "string",
                "description": "Relative tolerance (default: 1e-6)",
                "default": "1e-6",
            },
        },
        "required": ["tau"],
    },
)

q_expansion_tool = types.Tool(
    name="q_expansion",
    description="q-expansion of the holomorphic part of the l = 0 component, from q^-1 up to q^terms.",
    inputSchema={
        "type": "object",
        "properties": {
            "form": _FORM,
            "digits": _DIGITS,
            "terms": {"type": "integer", "default": 10, "minimum": 1},
            "scale": {
                "type": "string",
                "description": "Constant in front of the substituted series, 're,im' (default: i/(2 pi))",
            },
            "divide_by_n": {"type": "boolean", "default": True},
        },
    },
)


def _context(arguments: Dict[str, Any]) -> PrecisionContext:
    digits = arguments.get("digits")
    return settings.precision(int(digits) if digits is not None else settings.DIGITS)


def _matrix(text: str | None) -> SL2Z:
    return SL2Z.parse(text) if text else IDENTITY


def _mock_context(form_name: str, ctx: PrecisionContext) -> MockFormContext:
    return MockFormContext.build(
        load_form(form_name), ctx, settings.DENOMINATOR_BOUND, settings.MAX_WORKERS
    )


def _period_lattice(arguments: Dict[str, Any]) -> str:
    ctx = _context(arguments)
    name = arguments.get("form", "delta")
    lattice = period_lattice(
        load_form(name), ctx, settings.DENOMINATOR_BOUND, settings.MAX_WORKERS
    )
    return PeriodLatticeRecord.build(name, lattice, ctx.digits).to_json()


def _eichler_vector(arguments: Dict[str, Any]) -> str:
    ctx = _context(arguments)
    name = arguments.get("form", "delta")
    with ctx.work():
        tau = parse_complex(arguments["tau"])
        value = eichler_vector(load_form(name), tau, _matrix(arguments.get("matrix")), ctx)
        return EichlerRecord.build(name, tau, value, ctx.digits).to_json()


def _evaluate_form(arguments: Dict[str, Any]) -> str:
    ctx = _context(arguments)
    name = arguments.get("form", "delta")
    with ctx.work():
        ctxm = _mock_context(name, ctx)
        value = f_value(ctxm, parse_complex(arguments["tau"]), _matrix(arguments.get("matrix")))
        return FValueRecord.build(name, value, ctx.digits).to_json()


def _invariance_check(arguments: Dict[str, Any]) -> str:
    ctx = _context(arguments)
    name = arguments.get("form", "delta")
    with ctx.work():
        ctxm = _mock_context(name, ctx)
        tau = parse_complex(arguments["tau"])
        gamma = SL2Z.parse(arguments["gamma"])
        M = _matrix(arguments.get("matrix"))
        deviation = rho_invariance_check(ctxm, gamma, tau, M)
        return InvarianceRecord(
            form=name,
            digits=ctx.digits,
            tau=complex_to_pair(tau, ctx.digits),
            gamma=list(gamma.as_tuple()),
            matrix=list(M.as_tuple()),
            deviation=mp.nstr(deviation, 5),
            tolerance=mp.nstr(ctx.check_tol, 5),
            passed=bool(deviation < ctx.check_tol),
        ).to_json()


def _shadow_check(arguments: Dict[str, Any]) -> str:
    ctx = _context(arguments)
    name = arguments.get("form", "delta")
    with ctx.work():
        ctxm = _mock_context(name, ctx)
        tau = parse_complex(arguments["tau"])
        M = _matrix(arguments.get("matrix"))
        h = arguments.get("h")
        result = shadow_check(ctxm, tau, M, mp.mpf(h) if h else None)
        tol = mp.mpf(arguments.get("tol", "1e-6"))
        return ShadowRecord.build(name, tau, M, result, ctx.digits, tol).to_json()


def _q_expansion(arguments: Dict[str, Any]) -> str:
    ctx = _context(arguments)
    name = arguments.get("form", "delta")
    with ctx.work():
        ctxm = _mock_context(name, ctx)
        scale = arguments.get("scale")
        expansion = holomorphic_part_q(
            ctxm,
            0,
            int(arguments.get("terms", 10)),
            scale=parse_complex(scale) if scale else None,
            divide_by_n=bool(arguments.get("divide_by_n", True)),
        )
        return QExpansionRecord.build(name, expansion, ctx.digits).to_json()


async def _run(
    tool_name: str, compute: Callable[[Dict[str, Any]], str], arguments: Dict[str, Any]
) -> List[types.TextContent]:
    """Run a blocking computation off the event loop and wrap the JSON result."""
    try:
        text = await anyio.to_thread.run_sync(compute, arguments)
        return [types.TextContent(type="text", text=text)]
    except PoleError as e:
        logger.error("Pole during %s: %s", tool_name, e)
        return [types.TextContent(type="text", text=f"Pole: {str(e)}")]
    except KeyError as e:
        logger.error("Missing argument for %s: %s", tool_name, e)
        return [types.TextContent(type="text", text=f"Error: missing argument {e}")]
    except Exception as e:
        logger.error("Error during %s: %s", tool_name, e)
        return [types.TextContent(type="text", text=f"Error: {str(e)}")]


async def handle_period_lattice(arguments: Dict[str, Any]) -> List[types.TextContent]:
    """Handle period lattice requests."""
    return await _run("period_lattice", _period_lattice, arguments)


async def handle_eichler_vector(arguments: Dict[str, Any]) -> List[types.TextContent]:
    """Handle Eichler vector requests."""
    return await _run("eichler_vector", _eichler_vector, arguments)


async def handle_evaluate_form(arguments: Dict[str, Any]) -> List[types.TextContent]:
    """Handle F(tau, M) evaluation requests."""
    return await _run("evaluate_form", _evaluate_form, arguments)


async def handle_invariance_check(arguments: Dict[str, Any]) -> List[types.TextContent]:
    """Handle rho-action invariance requests."""
    return await _run("invariance_check", _invariance_check, arguments)


async def handle_shadow_check(arguments: Dict[str, Any]) -> List[types.TextContent]:
    """Handle shadow check requests."""
    return await _run("shadow_check", _shadow_check, arguments)


async def handle_q_expansion(arguments: Dict[str, Any]) -> List[types.TextContent]:
    """Handle holomorphic-part q-expansion requests."""
    return await _run("q_expansion", _q_expansion, arguments)
