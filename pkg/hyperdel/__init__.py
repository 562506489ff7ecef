"""
Hyperdel - Hyperplane deletion, insertion and insdel codes for d-dimensional arrays.
"""
__version__ = "1.0.0"
