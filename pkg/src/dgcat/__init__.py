"""Dg categories and their transforms"""
