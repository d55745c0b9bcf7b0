"""Overgroup intervals of permutation groups: enumeration, Boolean certificates and totients."""

from .bounds import (AuditFailure, BoundReport, atom_bound_value, group_complemented_value,
                     is_group_complemented, structural_lemma_audit, verify_theorem_bound)
from .groups import (GroupHandle, IndexCapExceeded, alternating_group, build_group, contains, even_part,
                     intersect, is_subgroup, join, symmetric_group)
from .lattice import (BooleanCertificate, IntervalLattice, NotBoolean, boolean_certificate,
                      constructed_interval, enumerate_interval, is_maximal, maximal_chain_lengths, moebius)
from .perm import Permutation, compose, induced_pair_action, parity
from .totients import (TotientReport, coset_generation_count, dual_euler_totient, euler_totient,
                       reduced_euler_characteristic, totient_report)

__version__ = "0.1.0"
