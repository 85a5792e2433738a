import logging
import os

from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int, min_val: int, max_val: int) -> int:
    try:
        v = int(os.getenv(name, str(default)))
        return max(min_val, min(max_val, v))
    except (ValueError, TypeError):
        return default


# Лимит базисных кортежей бар-комплекса на одну степень (1–10^7)
ORACLE_BUDGET = _int_env("HOCHSCHILD_ORACLE_BUDGET", 200_000, 1, 10_000_000)
# Максимальная степень, до которой φ и η строятся рекурсией через гомотопии
RECURSION_CAP = _int_env("HOCHSCHILD_RECURSION_CAP", 4, 1, 8)
LOG_LEVEL = os.getenv("HOCHSCHILD_LOG_LEVEL", "INFO").strip().upper() or "INFO"


def ensure_config() -> None:
    """
    Simple runtime check to make sure the settings are usable.
    """
    bad = []
    if not isinstance(logging.getLevelName(LOG_LEVEL), int):
        bad.append("HOCHSCHILD_LOG_LEVEL")

    if bad:
        joined = ", ".join(bad)
        raise RuntimeError(
            f"Invalid environment variables: {joined}. "
            "Проверьте файл .env (уровни логирования: DEBUG, INFO, WARNING, ERROR)."
        )
