"""contactgeo: verification toolkit for almost contact metric structures.

Declarative manifest (frame field over a coordinate chart, frame metric,
structure endomorphism, Reeb field) in; mechanically computed Levi-Civita
connection, curvature, structure checks, and soliton fits out.
"""

__version__ = "0.1.0"
