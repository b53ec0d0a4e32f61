"""Centro-affine curves on the circle: monodromy spectra, Backlund-type
transformations, conserved forms, and KdV-type flows."""

__version__ = "0.1.0"
