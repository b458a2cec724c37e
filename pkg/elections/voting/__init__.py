"""Pure tabulation and analysis code. Nothing here reads Django settings."""
