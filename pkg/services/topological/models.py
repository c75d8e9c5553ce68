from typing import Literal, Optional

from pydantic import BaseModel, Field

from config import settings
from ..bvi.models import BviConfig
from ..mathprog.models import LocalSolveConfig
from ..si.models import SiConfig


class TopoConfig(BaseModel):
    """Configuration of SCC-by-SCC solving."""

    sub_solver: Literal["bvi", "si", "hop-local", "qp-local"] = Field(
        default="bvi",
        description="Solver applied to every non-trivial SCC"
    )
    epsilon: float = Field(
        default_factory=lambda: settings.bvi_epsilon,
        gt=0,
        description="Precision requested from each sub-solve"
    )
    tighten: bool = Field(
        default=False,
        description="Divide the per-SCC precision by the chain depth so the global bound stays below epsilon"
    )
    bvi: BviConfig = Field(default_factory=BviConfig)
    si: SiConfig = Field(default_factory=SiConfig)
    local: LocalSolveConfig = Field(default_factory=LocalSolveConfig)
    pair_budget: Optional[int] = Field(default=None, ge=1, description="MEC strategy-pair budget for program sub-solvers")
