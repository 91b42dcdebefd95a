"""lodprobe: streaming RDF dataset quality assessment.

Computes four Linked Data quality metrics (dereferenceability, links to
external data providers, extensional conciseness, and the clustering
coefficient of the resource network), each both exactly and through a
probabilistic approximation (reservoir sampling, a stable Bloom filter,
or random-walk estimation), and reports estimate-vs-exact deviation and
runtime.
"""

__version__ = "0.1.0"

from .deref import (
    CachedResolver,
    LiveResolver,
    MockResolver,
    Resolution,
    Verdict,
    VerdictKind,
    classify,
    pld_alive,
)
from .extsort import SortSummary, sort_by_subject, verify_subject_contiguous
from .graph import (
    ResourceGraph,
    WalkAccumulators,
    WalkConfig,
    estimate_cc,
    exact_global_cc,
    exact_local_cc,
    mixing_time,
    random_walk,
)
from .metrics import (
    BaseUriNotFound,
    MetricResult,
    SortOrderViolation,
    cc_metric,
    deref_estimate,
    deref_exact,
    detect_base_uri,
    ext_links_estimate,
    ext_links_exact,
    extcon_estimate,
    extcon_exact,
)
from .murmur3 import murmur3_x64_128
from .ntriples import (
    DatasetReadError,
    NTriplesParseError,
    NTriplesReader,
    ParseFailure,
    StreamSummary,
    parse_line,
    serialize_term,
    serialize_triple,
)
from .pld import NoPldError, pld, registrable_domain, try_pld
from .rng import SeededRng, derive_seed
from .sketches import (
    AddOutcome,
    ReservoirSampler,
    StableBloomFilter,
    derive_num_filters,
    hash_bit_index,
)
from .terms import Term, TermKind, Triple, blank, iri, literal

__all__ = [
    "AddOutcome",
    "BaseUriNotFound",
    "CachedResolver",
    "DatasetReadError",
    "LiveResolver",
    "MetricResult",
    "MockResolver",
    "NTriplesParseError",
    "NTriplesReader",
    "NoPldError",
    "ParseFailure",
    "Resolution",
    "ResourceGraph",
    "ReservoirSampler",
    "SeededRng",
    "SortOrderViolation",
    "SortSummary",
    "StableBloomFilter",
    "StreamSummary",
    "Term",
    "TermKind",
    "Triple",
    "Verdict",
    "VerdictKind",
    "WalkAccumulators",
    "WalkConfig",
    "blank",
    "cc_metric",
    "classify",
    "deref_estimate",
    "deref_exact",
    "derive_num_filters",
    "derive_seed",
    "detect_base_uri",
    "estimate_cc",
    "exact_global_cc",
    "exact_local_cc",
    "ext_links_estimate",
    "ext_links_exact",
    "extcon_estimate",
    "extcon_exact",
    "hash_bit_index",
    "iri",
    "literal",
    "mixing_time",
    "murmur3_x64_128",
    "parse_line",
    "pld",
    "pld_alive",
    "random_walk",
    "registrable_domain",
    "serialize_term",
    "serialize_triple",
    "sort_by_subject",
    "try_pld",
    "verify_subject_contiguous",
]
