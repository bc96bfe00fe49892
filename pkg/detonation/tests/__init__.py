"""
Detonation App Tests Package

Organized test structure:
- test_model.py: Flux, ignition, end states, classification and scaling
- test_bvp.py: Collocation solver, interpolation and mesh checks
- test_profile.py: Traveling-wave system, boundary conditions, continuation and tails
- test_spectral.py: Eigenvalue-problem coefficients, limiting matrices, high-frequency bound
- test_utils.py: ParamsFactory, ProfileFactory, RecordFactory and temporary_dir
- test_winding.py: Contour geometry and winding numbers
- test_evans.py: Polar integration, Kato frames, Evans function and stability verdicts
- test_oracle.py: Finite-difference spectrum cross-check
- test_sweep.py: Continuation tree, grid runs, exit codes, success table
- test_archive.py: Record lines, stored profiles and report files
- test_serializers.py: Configuration and record serializers
- test_commands.py: profile, evans, sweep and report commands

Fast tests: python manage.py test detonation --exclude-tag slow
All tests can be run with: python manage.py test detonation
"""
