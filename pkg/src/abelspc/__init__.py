"""Balmer spectra of compact genuine A-spectra for finite abelian A, made effective."""
