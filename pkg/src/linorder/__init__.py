"""Decision calculus, codings, and epimorphism search for countable linear orders."""

from .cnf import CNF, CNF_ZERO, CNF_ONE, CNF_OMEGA, from_nat, omega_power
from .terms import (
    Fin, Omega, Eta, Rev, Sum, Prod, ZetaPow, OMEGA, ETA,
    OrderTerm, Classification, Verdict,
    classify, ordinal_value, cnf_to_term, rev_push, sts_verdict,
    reduce_map, format_term, term_size,
)

__all__ = [
    "CNF", "CNF_ZERO", "CNF_ONE", "CNF_OMEGA", "from_nat", "omega_power",
    "Fin", "Omega", "Eta", "Rev", "Sum", "Prod", "ZetaPow", "OMEGA", "ETA",
    "OrderTerm", "Classification", "Verdict",
    "classify", "ordinal_value", "cnf_to_term", "rev_push", "sts_verdict",
    "reduce_map", "format_term", "term_size",
]

__version__ = "0.1.0"
