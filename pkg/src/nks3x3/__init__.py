"""Nearly Kahler geometry of S3 x S3 and its almost complex surfaces."""

from __future__ import annotations

__version__ = "0.1.0"
