"""3-term homotopy complexes, squares and searches"""
