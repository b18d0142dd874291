"""Shared response models used by the CLI."""

from __future__ import annotations

from pydantic import BaseModel


class ErrorResponse(BaseModel):
    """Machine-readable error line: {"error": "message", "kind": "..."}."""

    error: str
    kind: str  # "usage" | "config" | "numerical" | "io"
