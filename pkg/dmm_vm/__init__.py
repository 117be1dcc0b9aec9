# -*- coding: utf-8 -*-

"""Top-level package for the dataflow matrix machine VM."""

__author__ = """dmm_vm developers"""

__version__ = '0.1.0'
