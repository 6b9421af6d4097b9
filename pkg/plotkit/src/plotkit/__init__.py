"""plotkit: renders pipir CSV maps into figures."""

from .mapfile import MapFile, SchemaError, TransitionsFile, load_map, load_transitions
from .render import render_jointspace, render_transitions, render_workspace

__version__ = "0.1.0"
