from . import models
from .app import app

__all__ = ["app", "models"]
