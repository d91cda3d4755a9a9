"""Granular-rectangle image graphs."""

from ._core import (  # noqa: F401
    BadMagicError,
    ChecksumError,
    CountMismatchError,
    Error,
    FormatError,
    GranularRect,
    ImageGraph,
    InvalidArgumentError,
    InvariantError,
    IoError,
    SearchParams,
    ThresholdSchedule,
    TruncatedError,
    UnsupportedVersionError,
    __version__,
    build_edges,
    build_graph,
    downsample,
    extract_subgraph,
    flip_horizontal,
    flip_vertical,
    gaussian_smooth,
    gradient_magnitude,
    partition,
    read_grig,
    rect_overlap,
    region_purity,
    rotate,
    upsample,
    verify_partition,
    write_grig,
)
