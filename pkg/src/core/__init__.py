"""Exact linear algebra, complexes and simplicial sets"""
