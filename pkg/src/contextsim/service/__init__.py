"""Service layer: FastAPI application and its pydantic schemas."""

from .app import app

__all__ = ["app"]
