"""
Command reports: text for people, JSON ("schema": 1) for machines, DOT for graphs
"""
import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = 1


class Report(BaseModel):
    """
    Outcome of one command

    Attributes:
        command: Subcommand name
        ok: Success, or a positive verdict
        summary: One line for the terminal
        data: Command-specific payload, JSON-serializable
        witnesses: Counterexamples or failing probes behind a negative verdict
        dot: Graph text for --out dot, when the command draws one
    """
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    command: str
    ok: bool
    summary: str
    data: Dict[str, Any] = Field(default_factory=dict)
    witnesses: List[str] = Field(default_factory=list)
    dot: Optional[str] = Field(None, exclude=True)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(by_alias=True), indent=2, sort_keys=True, default=str)

    def to_text(self) -> str:
        lines = [self.summary]
        for key, value in self.data.items():
            lines.extend(_text_lines(key, value))
        if self.witnesses:
            lines.append("witnesses:")
            lines.extend(f"  {w}" for w in self.witnesses)
        return "\n".join(lines)

    def render(self, out: str) -> str:
        if out == "json":
            return self.to_json()
        if out == "dot":
            if self.dot is None:
                raise ValueError(f"{self.command} has no graph output")
            return self.dot
        return self.to_text()


def _text_lines(key: str, value: Any) -> List[str]:
    if isinstance(value, dict):
        out = [f"{key}:"]
        out.extend(f"  {k}: {v}" for k, v in value.items())
        return out
    if isinstance(value, list) and value and isinstance(value[0], (list, dict)):
        return [f"{key}:"] + [f"  {v}" for v in value]
    if isinstance(value, str) and "\n" in value:
        return [f"{key}:"] + [f"  {line}" for line in value.splitlines()]
    return [f"{key}: {value}"]
