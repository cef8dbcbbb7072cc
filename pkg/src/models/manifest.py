"""
Run manifest
Everything needed to reproduce one CLI command.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class RunManifest(BaseModel):
    """
    Reproduction record of a CLI command
    - config holds every resolved value, defaults included
    - no timestamps, so identical runs give identical manifests
    """

    model_config = ConfigDict(frozen=True)

    command: str = Field(..., description="simulate / analyze / ida")
    config: Dict[str, Any] = Field(default_factory=dict, description="Fully resolved configuration")
    seed: Optional[int] = Field(None, description="Seed of every random draw, if any")
    input_digests: Dict[str, str] = Field(default_factory=dict, description="sha256 per input file")
    outputs: List[str] = Field(default_factory=list, description="Output file names, relative to the manifest")
    output_digests: Dict[str, str] = Field(default_factory=dict, description="sha256 per output file")
    tool_version: str
    status: str = Field("success", description="success / partial / error")
    failures: List[Dict[str, Any]] = Field(default_factory=list)
