"""
Services package for StarDev.
Contains the computations: spaces, measures, audits, envelopes and duality.
"""
