from proofs.report import CheckReport, Violation
from proofs.resolution import (
    InputWeakening, ResolutionProof, ResStep, Resolvent, StepWeakening, check_resolution, height,
    parse_proof, proof_to_text, rename_proof, restrict_proof, step_heights,
)
