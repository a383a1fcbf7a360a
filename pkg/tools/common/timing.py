from datetime import datetime, timezone


def get_timestamp():
    """Current UTC time in ISO-8601 form, used in provenance strings."""
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
