"""Bearer-token auth with two roles. Tokens are HMAC-signed, not stored."""

from __future__ import annotations

import hashlib
import hmac
from dataclasses import dataclass

TEACHER = "teacher"
STUDENT = "student"


@dataclass(frozen=True)
class Identity:
    user_id: str
    role: str


def _signature(user_id: str, role: str, secret: str) -> str:
    msg = f"{user_id}:{role}".encode()
    return hmac.new(secret.encode(), msg, hashlib.sha256).hexdigest()


def issue_token(user_id: str, role: str, secret: str) -> str:
    if role not in (TEACHER, STUDENT):
        raise ValueError(f"unknown role {role!r}")
    if ":" in user_id or not user_id:
        raise ValueError("user ids must be nonempty and colon-free")
    return f"{user_id}:{role}:{_signature(user_id, role, secret)}"


def verify_token(token: str, secret: str) -> Identity | None:
    parts = token.split(":")
    if len(parts) != 3:
        return None
    user_id, role, sig = parts
    if role not in (TEACHER, STUDENT):
        return None
    if not hmac.compare_digest(sig, _signature(user_id, role, secret)):
        return None
    return Identity(user_id=user_id, role=role)
