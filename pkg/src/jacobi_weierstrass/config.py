"""Configuration settings for the Jacobi-Weierstrass form toolkit."""

import sys
from pydantic_settings import BaseSettings, SettingsConfigDict
import logging

from .numeric import PrecisionContext

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """Toolkit configuration settings.

    Every field can be overridden by an environment variable carrying the
    ``JWF_`` prefix, e.g. ``JWF_DIGITS=60``.
    """

    APP_NAME: str = "jacobi-weierstrass-forms"
    APP_VERSION: str = "0.1.0"
    DIGITS: int = 128
    GUARD: int = 15
    SERIES_TAIL_TOL: float | None = None
    FD_STEP: float | None = None
    DENOMINATOR_BOUND: int = 10_000
    MAX_WORKERS: int = 4
    LOG_LEVEL: str = "INFO"

    model_config = SettingsConfigDict(
        env_prefix="JWF_", env_file=".env", extra="allow"
    )

    def _get_digits_from_args(self) -> int | None:
        """Extract the working precision from command line arguments.

        Returns:
            int | None: The value following ``--digits`` if present, None otherwise.
        """
        args = sys.argv[1:]

        if len(args) < 2:
            return None

        try:
            digits_index = args.index("--digits")
        except ValueError:
            return None

        if digits_index + 1 >= len(args):
            return None

        try:
            return int(args[digits_index + 1])
        except (TypeError, ValueError) as e:
            logger.warning(f"Invalid digits value: {e}")

        return None

    @property
    def WORKING_DIGITS(self) -> int:
        """Get the working precision, command line first, then env, then default."""

        digits = self._get_digits_from_args()
        logger.debug(f"Digits from args: {digits if digits else 'Not found'}")

        if digits is None:
            digits = self.DIGITS

        if digits < 15:
            logger.error("Requested %s digits, below the supported minimum", digits)
            raise ValueError(
                f"At least 15 significant digits are required, got {digits}."
            )
        return digits

    def precision(self, digits: int | None = None) -> PrecisionContext:
        """Build the immutable precision context described by these settings.

        Args:
            digits: Explicit precision overriding the configured one.

        Returns:
            PrecisionContext: The context used by every computation.
        """
        return PrecisionContext(
            digits=digits if digits is not None else self.WORKING_DIGITS,
            guard=self.GUARD,
            series_tail_tol=self.SERIES_TAIL_TOL,
        )
