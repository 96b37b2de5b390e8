"""
brouwerlab - numerical laboratory for Brouwer's Laplacian eigenvalue conjecture
"""

__version__ = "0.1.0"
