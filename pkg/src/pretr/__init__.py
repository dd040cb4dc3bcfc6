"""Pretriangulated hull via one-sided twisted complexes"""
