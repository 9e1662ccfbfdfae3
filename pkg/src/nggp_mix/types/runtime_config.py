"""Runtime configuration for nggp-mix."""

import os
from dataclasses import dataclass

VERIFY_LEVELS = ("quick", "default")


@dataclass
class RuntimeSettings:
    """Sampler runtime limits and output defaults."""

    output_dir: str = "nggp-mix-output"
    max_atoms: int = 1_000_000
    atom_floor: float = 1e-8
    prior_max_atoms: int = 10_000_000
    neglected_mass: float = 1e-6
    verify_level: str = "quick"

    @classmethod
    def from_env(cls) -> "RuntimeSettings":
        """Read the NGGP_MIX_* variables.

        Raises:
            ValueError: If a numeric variable is not a number
        """
        return cls(
            output_dir=os.getenv("NGGP_MIX_OUTPUT_DIR", cls.output_dir),
            max_atoms=int(os.getenv("NGGP_MIX_MAX_ATOMS", str(cls.max_atoms))),
            atom_floor=float(os.getenv("NGGP_MIX_ATOM_FLOOR", str(cls.atom_floor))),
            prior_max_atoms=int(
                os.getenv("NGGP_MIX_PRIOR_MAX_ATOMS", str(cls.prior_max_atoms))
            ),
            neglected_mass=float(
                os.getenv("NGGP_MIX_NEGLECTED_MASS", str(cls.neglected_mass))
            ),
            verify_level=os.getenv("NGGP_MIX_VERIFY_LEVEL", cls.verify_level),
        )

    def is_valid(self) -> bool:
        """Check that limits are usable."""
        return (
            self.max_atoms >= 1
            and self.atom_floor > 0
            and self.prior_max_atoms >= 1
            and 0 < self.neglected_mass < 1
            and self.verify_level in VERIFY_LEVELS
        )
