"""bioident: extract and analyze identity phrases from profile bios."""

__version__ = "0.1.0"

from .annotation import (
    AnnotationItem,
    merge_annotations,
    probabilistic_sample,
    stratified_sample,
)
from .cocluster import CoClusterConfig, CoClusterResult, spectral_cocluster
from .corpus import (
    FilterReport,
    UserRecord,
    filter_account,
    load_corpus,
    parse_user_record,
)
from .extractor import (
    PhraseRecord,
    clean_phrase,
    extract_identifiers,
    filter_phrases,
    split_bio,
)
from .indexing import (
    BipartiteMatrix,
    IdentifierIndex,
    IdentifierStats,
    build_index,
    build_matrix,
)
from .lexicon import Lexicon, load_lexicon, meaning_comparison, overlap_curve
from .rules import RuleSet, default_rules, load_rules
from .stats import (
    BinomialEstimate,
    CategoryContrast,
    ReliabilityTable,
    agresti_coull_interval,
    bootstrap_mean_ci,
    continuous_mean_ranking,
    count_correlation,
    friend_follower_ratio,
    krippendorff_alpha,
    normalized_log_odds,
    rank_by_category,
    raw_log_odds,
)
