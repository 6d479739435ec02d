"""
Shared helpers: settings lookup with library defaults, deterministic JSON output
with fixed 17-significant-digit floats.
"""

import json
import math
from pathlib import Path
from typing import Any, Union

from django.conf import settings
from django.core.serializers.json import DjangoJSONEncoder

from .constants import SETTING_DEFAULTS


def get_setting(name: str) -> Any:
    """
    Read a TORUS_* setting, falling back to the library default

    Args:
        name: Setting name, e.g. "TORUS_OBSTRUCTION_TOL"

    Returns:
        The configured value, or the default from constants.py when
        Django settings are not configured (plain library use).
    """
    default = SETTING_DEFAULTS[name]
    if not settings.configured:
        return default
    return getattr(settings, name, default)


def format_float(value: float) -> str:
    """17 significant digits, -0.0 folded into 0.0, always with a '.' or exponent."""
    text = f"{value + 0.0:.17g}"
    if not any(char in text for char in ".e"):
        text += ".0"
    return text


class FixedPrecisionEncoder(DjangoJSONEncoder):
    """DjangoJSONEncoder writing every float through format_float."""

    def iterencode(self, o, _one_shot=False):
        markers = {} if self.check_circular else None
        encode_str = json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring

        def floatstr(value):
            if math.isfinite(value):
                return format_float(value)
            if not self.allow_nan:
                raise ValueError(f"Out of range float value: {value!r}")
            return "NaN" if math.isnan(value) else ("Infinity" if value > 0 else "-Infinity")

        return json.encoder._make_iterencode(
            markers,
            self.default,
            encode_str,
            self.indent,
            floatstr,
            self.key_separator,
            self.item_separator,
            self.sort_keys,
            self.skipkeys,
            _one_shot,
        )(o, 0)


def dumps(payload: Any) -> str:
    """Byte-stable JSON: key order as given, indent 2, 17-digit floats, trailing newline."""
    return json.dumps(payload, cls=FixedPrecisionEncoder, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Union[str, Path], payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(payload), encoding="utf-8")
    return path


def read_json(path: Union[str, Path]) -> Any:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)
