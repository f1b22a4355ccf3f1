"""Geometry of the positive cone: distances, convex submanifolds, projections and decompositions."""

from ._spdcone import *  # noqa: F401,F403
