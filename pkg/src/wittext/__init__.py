"""Ext^1 between simple modules of the restricted Witt algebra W(1;1)."""
