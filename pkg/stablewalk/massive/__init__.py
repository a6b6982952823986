# -*- coding: utf-8 -*-

"""Package for stablewalk.massive."""

__author__ = """Silvio Tomatis"""
__email__ = "silviot@gmail.com"
__version__ = "0.1.0"


import pluggy


hookimpl = pluggy.HookimplMarker("stablewalk.massive")
"""Marker to be imported and used in plugins (and for own implementations)"""
