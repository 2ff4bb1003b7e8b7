import logging
from typing import Literal, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings

HFactorMode = Literal["connection-free", "via-connection"]

DEFAULT_TOOL_GRAPH_INFO_DESCRIPTION = (
    "Describe a GKM graph: number of vertices, valency and the axial function on every edge. "
    "Graphs are given as 'pn:N', 'grassmannian:K:N', 'flag:N', 'local:A1:A2' or 'fixture:NAME'."
)
DEFAULT_TOOL_BETTI_DESCRIPTION = (
    "Compute the combinatorial Betti numbers (b0, b2, ...) of a compact GKM graph."
)
DEFAULT_TOOL_CURVE_CLASSES_DESCRIPTION = (
    "List the curve class and the Chern number of every edge of a compact GKM graph."
)
DEFAULT_TOOL_GW_DESCRIPTION = (
    "Compute a genus-zero equivariant Gromov-Witten invariant by torus localization. "
    "Use this tool when you need to: \n"
    " - Count rational curves through point classes \n"
    " - Evaluate invariants of local Calabi-Yau models \n"
    " - Check polynomiality of an invariant of an abstract GKM graph"
)
DEFAULT_TOOL_LOCAL_CLOSED_FORM_DESCRIPTION = (
    "Evaluate the closed form of the degree-d invariant of the local model X_k "
    "under one of the constant specializations."
)
DEFAULT_TOOL_BPS_DESCRIPTION = (
    "Compute genus-zero BPS numbers of the local model X_k for degrees 1..dmax."
)


class ToolSettings(BaseSettings):
    """
    Configuration for all the tools.
    """

    tool_graph_info_description: str = Field(
        default=DEFAULT_TOOL_GRAPH_INFO_DESCRIPTION,
        validation_alias="TOOL_GRAPH_INFO_DESCRIPTION",
    )
    tool_betti_description: str = Field(
        default=DEFAULT_TOOL_BETTI_DESCRIPTION,
        validation_alias="TOOL_BETTI_DESCRIPTION",
    )
    tool_curve_classes_description: str = Field(
        default=DEFAULT_TOOL_CURVE_CLASSES_DESCRIPTION,
        validation_alias="TOOL_CURVE_CLASSES_DESCRIPTION",
    )
    tool_gw_description: str = Field(
        default=DEFAULT_TOOL_GW_DESCRIPTION,
        validation_alias="TOOL_GW_DESCRIPTION",
    )
    tool_local_closed_form_description: str = Field(
        default=DEFAULT_TOOL_LOCAL_CLOSED_FORM_DESCRIPTION,
        validation_alias="TOOL_LOCAL_CLOSED_FORM_DESCRIPTION",
    )
    tool_bps_description: str = Field(
        default=DEFAULT_TOOL_BPS_DESCRIPTION,
        validation_alias="TOOL_BPS_DESCRIPTION",
    )


class ComputeSettings(BaseSettings):
    """
    Configuration for the computational kernels.
    """

    threads: int = Field(default=1, ge=1, validation_alias="GKM_THREADS")
    betti_search_bound: int = Field(
        default=64, ge=1, validation_alias="GKM_BETTI_SEARCH_BOUND"
    )
    h_factor_mode: HFactorMode = Field(
        default="connection-free", validation_alias="GKM_H_FACTOR_MODE"
    )
    log_level: str = Field(default="WARNING", validation_alias="GKM_LOG_LEVEL")

    @field_validator("log_level")
    @classmethod
    def check_log_level(cls, value: str) -> str:
        level = value.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"Unknown log level: {value}")
        return level

    def effective_threads(self, cli_value: Optional[int] = None) -> int:
        """The thread cap: an explicit command-line value wins over GKM_THREADS."""
        if cli_value is not None:
            if cli_value < 1:
                raise ValueError(f"Thread count must be at least 1, got {cli_value}")
            return cli_value
        return self.threads
