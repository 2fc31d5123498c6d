"""Explicit mpmath precision contexts (never the global one)."""

import os

from mpmath import MPContext

DEFAULT_DIGITS = 50
ENV_DIGITS = "FT_LAB_DIGITS"


def make_context(digits=None):
    ctx = MPContext()
    ctx.dps = int(digits) if digits is not None else DEFAULT_DIGITS
    return ctx


def context_from_env():
    value = os.environ.get(ENV_DIGITS)
    return make_context(int(value) if value else None)


def resolve(ctx):
    return make_context() if ctx is None else ctx
