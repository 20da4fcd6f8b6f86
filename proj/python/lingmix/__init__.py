"""Bilingual-document detection and corpus analytics toolkit."""

from ._core import (
    LangIdModel,
    bundled_model,
    classify,
    gen_lang_class,
    p_at_1,
    profile,
    segment,
    synth_corpus,
)

__all__ = [
    "LangIdModel",
    "bundled_model",
    "classify",
    "gen_lang_class",
    "p_at_1",
    "profile",
    "segment",
    "synth_corpus",
]
