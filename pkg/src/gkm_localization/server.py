import sys

from gkm_localization.mcp_server import GKMMCPServer
from gkm_localization.settings import ComputeSettings, ToolSettings

try:
    mcp = GKMMCPServer(
        tool_settings=ToolSettings(),
        compute_settings=ComputeSettings(),
    )
except Exception:
    import traceback

    traceback.print_exc(file=sys.stderr)
    raise
