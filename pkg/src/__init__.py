"""
Ramanscope - Raman coupled model simulator
Source package
"""

__version__ = "0.1.0"
