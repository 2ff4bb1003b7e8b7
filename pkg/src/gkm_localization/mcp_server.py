"""
MCP server exposing the GKM computations as read-only tools.
"""

import asyncio
import logging
from typing import Annotated, Any, Callable, List, Optional

from mcp.server.fastmcp import Context, FastMCP
from mcp.types import ToolAnnotations
from pydantic import Field

from gkm_localization.calabi_yau import (
    LocalModelSpec,
    Specialization,
    bps_genus_zero,
    gw_local_closed_form,
)
from gkm_localization.curve_classes import curve_class_lattice
from gkm_localization.exceptions import GKMError
from gkm_localization.formatting import format_curve_classes, format_graph_info, format_row
from gkm_localization.graph_io import build_class, build_graph
from gkm_localization.localization import Insertion, gromov_witten
from gkm_localization.settings import ComputeSettings, ToolSettings
from gkm_localization.validators import parse_insertion, parse_psi

logger = logging.getLogger(__name__)

GRAPH_SPEC_DESCRIPTION = (
    "The graph: 'pn:N', 'grassmannian:K:N', 'flag:N', 'local:A1:A2', "
    "'fixture:NAME' (g2b, twisted-flag, cycle8, p1-hirzebruch2) or a path to a graph JSON file."
)

READ_ONLY = ToolAnnotations(
    readOnlyHint=True,
    destructiveHint=False,
    idempotentHint=True,
    openWorldHint=False,
)


async def run_blocking(compute: Callable[[], str]) -> str:
    """Run a synchronous computation in the default executor of the running loop."""
    loop = asyncio.get_running_loop()
    return await loop.run_in_executor(None, compute)


class GKMMCPServer(FastMCP):
    """
    An MCP server for equivariant Gromov-Witten computations on GKM graphs.
    """

    def __init__(
        self,
        tool_settings: ToolSettings,
        compute_settings: ComputeSettings,
        name: str = "gkm-localization",
        instructions: str | None = None,
        **settings: Any,
    ):
        self.tool_settings = tool_settings
        self.compute_settings = compute_settings
        super().__init__(name=name, instructions=instructions, **settings)
        self.setup_tools()

    def setup_tools(self):
        """Register the tools in the server."""

        async def gkm_graph_info(
            ctx: Context,
            graph: Annotated[str, Field(description=GRAPH_SPEC_DESCRIPTION)],
        ) -> str:
            """
            Describe a graph and its axial function.

            :param ctx: The context for the request.
            :param graph: The graph specification.
            :return: One header line and one line per edge.
            """
            await ctx.debug(f"Graph info for {graph}")
            try:
                return await run_blocking(
                    lambda: "\n".join(format_graph_info(build_graph(graph)))
                )
            except (GKMError, ValueError, OSError) as e:
                logger.error(f"gkm_graph_info failed for {graph}: {e}")
                return f"Error: {e}"

        async def gkm_betti_numbers(
            ctx: Context,
            graph: Annotated[str, Field(description=GRAPH_SPEC_DESCRIPTION)],
        ) -> str:
            await ctx.debug(f"Betti numbers of {graph}")
            bound = self.compute_settings.betti_search_bound
            try:
                return await run_blocking(
                    lambda: format_row(build_graph(graph).combinatorial_betti(bound))
                )
            except (GKMError, ValueError, OSError) as e:
                logger.error(f"gkm_betti_numbers failed for {graph}: {e}")
                return f"Error: {e}"

        async def gkm_curve_classes(
            ctx: Context,
            graph: Annotated[str, Field(description=GRAPH_SPEC_DESCRIPTION)],
        ) -> str:
            await ctx.debug(f"Curve classes of {graph}")
            try:
                return await run_blocking(
                    lambda: "\n".join(format_curve_classes(curve_class_lattice(build_graph(graph))))
                )
            except (GKMError, ValueError, OSError) as e:
                logger.error(f"gkm_curve_classes failed for {graph}: {e}")
                return f"Error: {e}"

        async def gkm_gromov_witten(
            ctx: Context,
            graph: Annotated[str, Field(description=GRAPH_SPEC_DESCRIPTION)],
            beta: Annotated[
                List[int],
                Field(
                    description="Coordinates of the curve class in the basis printed by gkm_curve_classes."
                ),
            ],
            markings: Annotated[
                int, Field(default=0, ge=0, description="Number of marked points n.")
            ] = 0,
            insertions: Annotated[
                Optional[List[str]],
                Field(
                    default=None,
                    description="Evaluation insertions 'SLOT:pt@VERTEX', 'SLOT:pd@FILE', 'SLOT:c1' or 'SLOT:one'; slots start at 1.",
                ),
            ] = None,
            psi: Annotated[
                Optional[List[str]],
                Field(default=None, description="Psi-class powers 'SLOT:POWER'."),
            ] = None,
        ) -> str:
            """
            Compute GW_{0,n}^beta of the given insertions.

            :param ctx: The context for the request.
            :param graph: The graph specification.
            :param beta: Curve class coordinates.
            :param markings: Number of marked points.
            :param insertions: Evaluation insertions.
            :param psi: Psi-class insertions.
            :return: The invariant as a rational function in t1, t2, ...
            """
            await ctx.debug(f"Gromov-Witten invariant of {graph} in class {beta} with {markings} marking(s)")

            def compute() -> str:
                target = build_graph(graph)
                lattice = curve_class_lattice(target)
                chosen = []
                for text in insertions or []:
                    slot, kind, argument = parse_insertion(text)
                    chosen.append(Insertion(slot, build_class(target, (kind, argument))))
                for text in psi or []:
                    slot, power = parse_psi(text)
                    chosen.append(Insertion(slot, None, power))
                value = gromov_witten(
                    target,
                    lattice.from_coordinates(beta),
                    markings,
                    chosen,
                    lattice=lattice,
                    mode=self.compute_settings.h_factor_mode,
                    threads=self.compute_settings.threads,
                )
                return str(value)

            try:
                return await run_blocking(compute)
            except (GKMError, ValueError, OSError) as e:
                logger.error(f"gkm_gromov_witten failed for {graph}: {e}")
                return f"Error: {e}"

        async def gkm_local_closed_form(
            ctx: Context,
            k: Annotated[int, Field(ge=0, description="The local model X_k, k >= 0.")],
            d: Annotated[int, Field(ge=1, description="Degree d >= 1.")],
            specialization: Annotated[
                str,
                Field(
                    default=Specialization.EQUIVARIANT_CY.value,
                    description="One of 'equivariantly-cy', 'twisted', 'k1-family', 'none'.",
                ),
            ] = Specialization.EQUIVARIANT_CY.value,
            y: Annotated[
                Optional[int],
                Field(default=None, description="The nonzero integer y of the k1-family."),
            ] = None,
        ) -> str:
            await ctx.debug(f"Closed form for X_{k}, d = {d}, {specialization}")
            try:
                spec = LocalModelSpec(k=k, specialization=specialization, y=y)
                return str(gw_local_closed_form(spec, d))
            except (GKMError, ValueError) as e:
                logger.error(f"gkm_local_closed_form failed: {e}")
                return f"Error: {e}"

        async def gkm_bps_row(
            ctx: Context,
            k: Annotated[int, Field(ge=0, description="The local model X_k, k >= 0.")],
            dmax: Annotated[int, Field(ge=1, description="Largest degree.")],
        ) -> str:
            await ctx.debug(f"BPS numbers of X_{k} up to degree {dmax}")
            try:
                return await run_blocking(lambda: format_row(bps_genus_zero(k, dmax)))
            except (GKMError, ValueError) as e:
                logger.error(f"gkm_bps_row failed: {e}")
                return f"Error: {e}"

        self.tool(
            description=self.tool_settings.tool_graph_info_description,
            annotations=READ_ONLY,
        )(gkm_graph_info)
        self.tool(
            description=self.tool_settings.tool_betti_description,
            annotations=READ_ONLY,
        )(gkm_betti_numbers)
        self.tool(
            description=self.tool_settings.tool_curve_classes_description,
            annotations=READ_ONLY,
        )(gkm_curve_classes)
        self.tool(
            description=self.tool_settings.tool_gw_description,
            annotations=READ_ONLY,
        )(gkm_gromov_witten)
        self.tool(
            description=self.tool_settings.tool_local_closed_form_description,
            annotations=READ_ONLY,
        )(gkm_local_closed_form)
        self.tool(
            description=self.tool_settings.tool_bps_description,
            annotations=READ_ONLY,
        )(gkm_bps_row)
