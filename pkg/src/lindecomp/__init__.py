"""Linear decomposition attacks on key exchange schemes built from two-sided
multiplications in matrix groups over GF(p)."""
from .attacks import AttackFailure, AttackPlan, AttackStep, attack, attack_harley, attack_kolee, attack_wang, execute_plan
from .decompose import apply_operator, apply_right_operator, derive_operator, derive_right_operator
from .linalg import IncrementalSpan, NotInSpan, SingularMatrix, mat_inv, mat_mul
from .platform import GeneratorSet, ProtocolFixture, SandwichMap, make_block_fixture, make_polynomial_fixture, random_word
from .protocols import HonestResult, Transcript, run_generic, run_harley, run_kolee, run_wang
from .span import orbit_closure, span_closure

__version__ = "0.1.0"
