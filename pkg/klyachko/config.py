# klyachko/config.py
"""
Configuration management for the toolkit
Loads environment variables and provides defaults
"""
import logging
import os
from dotenv import load_dotenv

# Load .env file if it exists (for local development)
load_dotenv()

logger = logging.getLogger(__name__)


class Settings:
    """Toolkit settings loaded from environment variables"""

    # Command defaults
    default_p: int = 1
    default_l_max: int = 5
    default_p_max: int = 3
    default_degree_bound: int = 3
    default_budget: int = 2000

    # Environment
    ENVIRONMENT: str = os.getenv("KLY_ENVIRONMENT", "production")

    @property
    def sym_budget(self) -> int:
        """Cap on dim Sym^{pl} E; KLY_BUDGET overrides the default"""
        raw = os.getenv("KLY_BUDGET")
        if not raw:
            return self.default_budget
        try:
            return int(raw)
        except ValueError:
            logger.warning("⚠️ KLY_BUDGET=%r is not an integer, using %d", raw, self.default_budget)
            return self.default_budget

    @property
    def log_level(self) -> str:
        if self.is_development:
            return "DEBUG"
        return os.getenv("KLY_LOG_LEVEL", "WARNING").upper()

    @property
    def is_development(self) -> bool:
        """Check if running in development mode"""
        return self.ENVIRONMENT == "development"


# Create a single instance
settings = Settings()
