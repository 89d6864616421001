"""crypto: message digests of a literal's UTF-8 bytes."""

import hashlib

from ..model import CRYPTO, Literal
from . import CHECK, COMPUTE_OBJECT, Call, Defer, builtin


def _digest(algorithm: str):
    @builtin(CRYPTO[algorithm], [COMPUTE_OBJECT, CHECK])
    def digest(call: Call):
        s = call.subject
        if not isinstance(s, Literal):
            raise Defer(f"crypto:{algorithm} needs a string subject")
        value = hashlib.new(algorithm, s.lexical.encode("utf-8")).hexdigest()
        return call.bind(call.object, Literal(value))

    return digest


_digest("md5")
_digest("sha1")
