"""Conjugacy of quasi-free finite-group actions on Cuntz algebras, decided
exactly through associatedness of ``1 - [pi]`` in the representation ring."""

from .chartab import CharacterTable, compute_table, load_table, table_to_document, validate_table
from .cyclo import Cyclotomic, parse, zeta
from .decider import (
    Conjugate,
    DecideConfig,
    InvalidInput,
    NotConjugate,
    Unknown,
    decide,
    enumerate_units,
    recheck_obstruction,
    trivial_units,
    verify_witness,
)
from .permgrp import PermGroup, Permutation
from .repring import (
    Representation,
    VirtualCharacter,
    equivariant_k_groups,
    fock_coverage,
    is_faithful,
    is_unit,
    one_minus,
)

__version__ = "0.1.0"
