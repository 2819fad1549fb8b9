"""Shared fixtures: the reference operating configuration."""

import math

import pytest

from levi import (
    CavitySpec,
    DriveTone,
    ModeFrequencies,
    ParticlePose,
    ParticleSpec,
    to_angular,
    validate_setup,
)

KHZ = to_angular(1e3)

# Conditional-scheme operating point (angular units).
OP_G = 50.0 * KHZ
OP_DELTA = 200.0 * KHZ
OP_KAPPA = 75.2 * KHZ


@pytest.fixture(scope="session")
def ref_particle():
    return ParticleSpec(
        density=3500.0,
        semi_axis_long=50e-9,
        semi_axis_short=25e-9,
        rel_permittivity=5.7,
    )


@pytest.fixture(scope="session")
def ref_cavity():
    return CavitySpec(length=10e-3, wavelength=1540e-9, finesse=1e5)


@pytest.fixture(scope="session")
def ref_pose(ref_cavity):
    return ParticlePose(
        x=0.0,
        y=math.pi / (4.0 * ref_cavity.wavenumber),
        z=0.0,
        phi=math.radians(45.0),
    )


@pytest.fixture(scope="session")
def ref_freqs(ref_cavity):
    return ModeFrequencies(
        omega_cav=to_angular(299792458.0 / ref_cavity.wavelength),
        omega_m=to_angular(247.7e3),
        omega_phi=to_angular(2.6e6),
    )


@pytest.fixture(scope="session")
def ref_setup(ref_particle, ref_cavity, ref_pose, ref_freqs):
    return validate_setup(ref_particle, ref_cavity, ref_pose, ref_freqs)


@pytest.fixture(scope="session")
def ref_drives():
    return (
        DriveTone(rabi=to_angular(2.66e9), detuning=to_angular(-47.7e3)),
        DriveTone(rabi=to_angular(5.0e10), detuning=to_angular(-2.4e6)),
    )
