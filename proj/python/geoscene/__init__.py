"""3D urban scene figure documents from open geodata."""

import warnings as _warnings

try:
    from . import _geoscene as _core  # installed wheel layout
except ImportError:  # pragma: no cover - in-tree builds put the module on sys.path
    import _geoscene as _core

DomainError = _core.DomainError
ParseError = _core.ParseError
mercator_forward = _core.mercator_forward
mercator_inverse = _core.mercator_inverse
__version__ = _core.__version__

__all__ = [
    "DomainError",
    "ParseError",
    "generate",
    "mercator_forward",
    "mercator_inverse",
]


def generate(
    dem,
    roads="",
    power="",
    buildings="",
    heights="",
    *,
    spacing=10.0,
    road_offset=1.0,
    power_offset=2.0,
    default_height=8.0,
    resolution=0.0,
    title="",
):
    """Build a plotly figure document from local files.

    Returns the serialized ``{"data": [...], "layout": {...}}`` JSON string;
    skipped input features (open building ways, footprints without elevation
    coverage, ...) surface as Python warnings.
    """
    body, notes = _core.generate(
        dem,
        roads,
        power,
        buildings,
        heights,
        spacing,
        road_offset,
        power_offset,
        default_height,
        resolution,
        title,
    )
    for note in notes:
        _warnings.warn(note, stacklevel=2)
    return body
