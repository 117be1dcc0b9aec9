# -*- coding: utf-8 -*-

"""Unit test package for dmm_vm."""
