"""HTTP service layer: pydantic wire models, handlers, FastAPI app."""

from . import api, models
from .app import app

__all__ = ["api", "app", "models"]
