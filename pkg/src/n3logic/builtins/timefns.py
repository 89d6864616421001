"""time: field extraction from ISO-8601 date-times, and clock readings.

Extracted fields are zero-padded decimal strings taken in the subject's own
offset (a bare date reads as midnight); dayOfWeek counts from 0 = Sunday. gmTime and localTime read the
context clock when the subject is the empty string, or convert a subject
holding seconds since the epoch.
"""

from __future__ import annotations

import re
from datetime import datetime, timezone

from ..model import TIME, Literal
from . import CHECK, COMPUTE_OBJECT, Call, Defer, builtin
from .arith import numeric_value

_DATETIME = re.compile(r"\d{4}-\d{2}-\d{2}(T\d{2}:\d{2}(:\d{2}(\.\d+)?)?)?(Z|[+-]\d{2}:\d{2})?")


def parse_datetime(text: str) -> datetime:
    text = text.strip()
    if not _DATETIME.fullmatch(text):
        raise Defer(f"{text!r} is not an ISO-8601 date-time")
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    try:
        return datetime.fromisoformat(text)
    except ValueError:
        raise Defer(f"{text!r} is not a valid date-time") from None


def _extractor(name: str, fn):
    @builtin(TIME[name], [COMPUTE_OBJECT, CHECK])
    def extract(call: Call):
        s = call.subject
        if not isinstance(s, Literal):
            raise Defer(f"time:{name} needs a date-time string")
        return call.bind(call.object, Literal(fn(parse_datetime(s.lexical))))

    return extract


_extractor("year", lambda d: f"{d.year:04d}")
_extractor("month", lambda d: f"{d.month:02d}")
_extractor("day", lambda d: f"{d.day:02d}")
_extractor("hour", lambda d: f"{d.hour:02d}")
_extractor("minute", lambda d: f"{d.minute:02d}")
_extractor("second", lambda d: f"{d.second:02d}")
_extractor("dayOfWeek", lambda d: str((d.weekday() + 1) % 7))


def _instant(call: Call) -> float:
    s = call.subject
    if not isinstance(s, Literal):
        raise Defer("clock builtins need a string or number subject")
    if s.lexical.strip() == "":
        return call.ctx.clock()
    return float(numeric_value(s))


@builtin(TIME.gmTime, [COMPUTE_OBJECT, CHECK], pure=False)
def _gm_time(call: Call):
    when = datetime.fromtimestamp(_instant(call), timezone.utc)
    return call.bind(call.object, Literal(when.strftime("%Y-%m-%dT%H:%M:%SZ")))


@builtin(TIME.localTime, [COMPUTE_OBJECT, CHECK], pure=False)
def _local_time(call: Call):
    tz = call.ctx.local_tz
    when = datetime.fromtimestamp(_instant(call), timezone.utc).astimezone(tz)
    return call.bind(call.object, Literal(when.replace(microsecond=0).isoformat()))
