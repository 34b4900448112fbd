"""
Run profiles for vcstream
Named sketch-sizing and Monte-Carlo presets layered over the YAML defaults
"""

import os


class Profile:
    """Base profile"""

    NAME = 'default'
    ALPHA = 1.0
    TRIALS = 300
    STREAM_LENGTH = 600
    CHURN = 0.3
    AUDIT = False


class DefaultProfile(Profile):
    """Full-size sketches, full Monte-Carlo sweeps"""


class DeskProfile(Profile):
    """Same sizing, fewer trials for quick interactive sweeps"""
    NAME = 'desk'
    TRIALS = 30
    STREAM_LENGTH = 200


class TestingProfile(Profile):
    """Undersized sketches for failure probing, with invariant auditing on"""
    NAME = 'testing'
    ALPHA = 0.05
    TRIALS = 20
    STREAM_LENGTH = 120
    AUDIT = True


# Profile mapping
profile_map = {
    'default': DefaultProfile,
    'desk': DeskProfile,
    'testing': TestingProfile,
}


def get_profile(name: str = None):
    """Get profile class by name, falling back to VCSTREAM_PROFILE then default"""
    name = name or os.environ.get('VCSTREAM_PROFILE', 'default')
    return profile_map.get(name, profile_map['default'])
