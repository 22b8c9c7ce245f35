"""Dolbeault cohomology rings of configuration spaces of C^n and complex tori."""
