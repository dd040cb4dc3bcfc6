"""Config module initialization"""
