import json
import logging
from datetime import datetime, timezone

_RESERVED = frozenset(
    vars(logging.LogRecord("", 0, "", 0, "", (), None)).keys()
) | {"message", "asctime"}


class JsonFormatter(logging.Formatter):
    """One JSON object per log record, for LOG_FORMAT=json."""

    def format(self, record):
        entry = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }
        if record.exc_info:
            entry["exception"] = self.formatException(record.exc_info)

        # Anything passed through ``extra=``.
        for key, value in record.__dict__.items():
            if key not in _RESERVED:
                entry[key] = value

        return json.dumps(entry, default=str, ensure_ascii=False)
