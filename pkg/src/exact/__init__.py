"""Exact dg structures"""
