"""
Numerical engine.

- model.py: flux, ignition, Rankine-Hugoniot and scaling algebra
- bvp.py: collocation boundary value solver
- profile.py: traveling-wave profiles, continuation and validation
- spectral.py: Evans coefficient matrices and the high-frequency bound
- winding.py: contours and adaptive winding numbers
- evans.py: Kato frames, polar-coordinate integration, stability verdicts
- oracle.py: finite-difference spectrum of the linearized operator
- archive.py: profile, contour and record files
- sweep.py: parameter grid driver
"""
