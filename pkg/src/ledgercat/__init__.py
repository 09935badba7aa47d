"""Resource theories, the ownership construction and a coin ledger built on it."""

from ._backend import BACKEND
from .diagram import Diagram, Node, diagram_to_term, to_diagram
from .enumerate import enumerate_morphisms
from .errors import (
    LedgerError,
    LedgercatError,
    NotParallelError,
    ParseError,
    ResourceLimitError,
    TheoryError,
    TypingError,
)
from .iso import diagram_equal
from .ownership import (
    Gamma,
    Lifted,
    OId,
    OPar,
    OSeq,
    OSym,
    OwnedAtom,
    OwnedTheory,
    Owner,
    PhiPair,
    PhiUnit,
    PsiPair,
    PsiUnit,
    build_ownership_theory,
    canonical_regroup,
    canonical_split,
    forget,
    lift,
    normalize_owned,
    owned_equal,
    owned_typecheck,
)
from .parsing import parse_owned_term, parse_owned_theory, parse_source, parse_term, parse_theory
from .rewrite import EqResult, equal_modulo
from .terms import Gen, Id, Par, Seq, Sym
from .theory import Equation, GeneratorDecl, Theory, typecheck

__version__ = "0.1.0"
