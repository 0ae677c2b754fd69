"""
shapetensor core package.

Surface tensors and harmonic intrinsic volumes of convex bodies in R^2 and
R^3, and reconstruction of a body's shape from them.
"""

__version__ = "0.1.0"
