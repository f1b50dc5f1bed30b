"""Synthetic DWI acceleration testbed.

Simulates multi-average diffusion-weighted acquisitions of labeled
phantoms, reconstructs guidance/noisy/reference image triples, trains a
guided residual denoising CNN on them, and quantifies denoising quality
and ADC-map agreement.
"""

__version__ = "0.1.0"
