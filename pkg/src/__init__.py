"""
Exact dg categories: linear algebra, dg categories, 3-term h-complexes and exact structures
"""
__version__ = "1.0.0"
