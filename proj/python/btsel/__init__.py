"""Data selection for multi-system backtranslated corpora.

Thin Python surface over the C++ core: corpus loading, the FDA selection
strategies, the BLEU/TER/chrF3 quality metrics, the TTR/Yule's I/MTLD
diversity metrics and the phi rescoring factor.
"""

from ._core import (
    BtselConfigError,
    BtselDataError,
    Pool,
    Sentence,
    __version__,
    bleu,
    chrf3,
    compute_phi,
    fda_score,
    load_corpus,
    load_pool,
    mtld,
    select_each_from_all,
    select_each_from_all_x4,
    select_from_all,
    ter,
    ttr,
    yules_i,
)

__all__ = [
    "BtselConfigError",
    "BtselDataError",
    "Pool",
    "Sentence",
    "__version__",
    "bleu",
    "chrf3",
    "compute_phi",
    "fda_score",
    "load_corpus",
    "load_pool",
    "mtld",
    "select_each_from_all",
    "select_each_from_all_x4",
    "select_from_all",
    "ter",
    "ttr",
    "yules_i",
]
