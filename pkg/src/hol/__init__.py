"""hecke-orbit-lab: q-expansion algebra, Hecke orbits, regularized pairings,
third-kind differentials and integer-relation experiments at desk scale."""

__version__ = "0.1.0"
