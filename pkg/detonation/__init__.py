"""
Weak detonation profiles of the scaled Majda model and their Evans-function
stability certification.
"""
