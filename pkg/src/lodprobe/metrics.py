"""The four quality metrics, each as a streaming processor in two variants.

Every metric is a processor with `consume(triple)` / `finalize()`, so one
pass over a dataset can feed any number of them. The functional wrappers
at the bottom (`ext_links_estimate`, `extcon_exact`, ...) run a whole
stream through one processor and time it.

Value conventions on empty input: conciseness 1 (vacuous uniqueness),
dereferenceability 0, external links 0, clustering metric 1: each the
conservative end of its quality dimension, flagged with a warning counter.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Protocol

from .deref import CachedResolver, Resolver, classify, pld_alive
from .graph import (
    ResourceGraph,
    WalkConfig,
    estimate_cc,
    exact_global_cc,
    mixing_time,
    random_walk,
)
from .murmur3 import murmur3_x64_128
from .ntriples import serialize_term
from .pld import try_pld
from .rng import derive_seed, SeededRng
from .sketches import ReservoirSampler, StableBloomFilter
from .terms import TermKind, Triple

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
VOID_DATASET = "http://rdfs.org/ns/void#Dataset"
OWL_ONTOLOGY = "http://www.w3.org/2002/07/owl#Ontology"


@dataclass(frozen=True)
class MetricResult:
    """One metric's outcome: value plus everything needed to reproduce it."""

    metric: str
    value: float
    estimated: bool
    parameters: dict
    counters: dict
    elapsed_seconds: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"metric value {self.value} outside [0, 1]")

    def as_dict(self) -> dict:
        return {
            "metric": self.metric,
            "value": self.value,
            "estimated": self.estimated,
            "parameters": self.parameters,
            "counters": self.counters,
            "elapsed_seconds": self.elapsed_seconds,
            "seed": self.seed,
        }

    def with_elapsed(self, elapsed: float) -> "MetricResult":
        return MetricResult(
            self.metric, self.value, self.estimated, self.parameters,
            self.counters, elapsed, self.seed,
        )


class MetricProcessor(Protocol):
    name: str

    def consume(self, triple: Triple) -> None: ...

    def finalize(self) -> MetricResult: ...


class SortOrderViolation(RuntimeError):
    """Conciseness input was not subject-sorted; carries the triple ordinal."""

    def __init__(self, subject: str, triple_number: int):
        super().__init__(
            f"subject {subject} reappeared at triple {triple_number}; "
            f"input must be sorted by subject (run the sort command first)"
        )
        self.subject = subject
        self.triple_number = triple_number


class BaseUriTracker:
    """Streaming base-PLD detection.

    Heuristic 1 (wins, first match sticks): a triple typing the dataset as
    void:Dataset or owl:Ontology donates its subject's PLD. Heuristic 2:
    the most frequent subject PLD, ties broken lexicographically.
    """

    def __init__(self):
        self.declared: str | None = None
        self.frequency: dict[str, int] = {}

    def offer(self, t: Triple) -> None:
        subject_pld = try_pld(t.subject.lexical) if t.subject.kind is TermKind.IRI else None
        if (
            self.declared is None
            and subject_pld is not None
            and t.predicate.lexical == RDF_TYPE
            and t.object.kind is TermKind.IRI
            and t.object.lexical in (VOID_DATASET, OWL_ONTOLOGY)
        ):
            self.declared = subject_pld
        if subject_pld is not None:
            self.frequency[subject_pld] = self.frequency.get(subject_pld, 0) + 1

    def result(self) -> str | None:
        if self.declared is not None:
            return self.declared
        if not self.frequency:
            return None
        # max count first, then lexicographically smallest PLD
        return min(self.frequency, key=lambda p: (-self.frequency[p], p))


class BaseUriNotFound(ValueError):
    pass


def detect_base_uri(triples: Iterable[Triple]) -> str:
    """Base PLD of a dataset; raises when no subject yields any PLD."""
    tracker = BaseUriTracker()
    for t in triples:
        tracker.offer(t)
    base = tracker.result()
    if base is None:
        raise BaseUriNotFound("no subject in the dataset yields a pay-level domain")
    return base


# --------------------------------------------------------------------------
# Existence of links to external data providers


class _ExtLinksBase:
    name = "external-links"

    def __init__(self):
        self._base = BaseUriTracker()
        self.total_object_uris = 0
        self.objects_without_pld = 0

    def consume(self, t: Triple) -> None:
        self._base.offer(t)
        if t.object.kind is not TermKind.IRI:
            return
        p = try_pld(t.object.lexical)
        if p is None:
            self.objects_without_pld += 1
            return
        self.total_object_uris += 1
        self._offer_pld(p)

    def _value(self, distinct_plds: Iterable[str], base: str | None) -> float:
        if self.total_object_uris == 0:
            return 0.0
        external = sum(1 for p in set(distinct_plds) if p != base)
        return external / self.total_object_uris


class ExtLinksEstimate(_ExtLinksBase):
    """Distinct object PLDs held in a reservoir; denominator counts every
    object URI streamed. A PLD already in the reservoir is counted but not
    re-offered, so with capacity >= distinct PLDs the sample is exhaustive
    and the estimate collapses to the exact value."""

    def __init__(self, reservoir_capacity: int, seed: int):
        super().__init__()
        self.seed = seed
        self.capacity = reservoir_capacity
        self._sampler = ReservoirSampler(
            reservoir_capacity, SeededRng(derive_seed(seed, "ext-links"))
        )
        self._retained: set[str] = set()

    def _offer_pld(self, p: str) -> None:
        if p in self._retained:
            return
        outcome = self._sampler.add(p)
        if outcome.added or outcome.replaced:
            self._retained.add(p)
        if outcome.replaced:
            self._retained.discard(outcome.evicted)

    def finalize(self) -> MetricResult:
        base = self._base.result()
        plds = self._sampler.contents()
        return MetricResult(
            metric=self.name,
            value=self._value(plds, base),
            estimated=True,
            parameters={"reservoir_capacity": self.capacity, "base_pld": base},
            counters={
                "total_object_uris": self.total_object_uris,
                "objects_without_pld": self.objects_without_pld,
                "plds_sampled": len(plds),
                "plds_offered": self._sampler.seen,
                "zero_denominator": int(self.total_object_uris == 0),
            },
            seed=self.seed,
        )


class ExtLinksExact(_ExtLinksBase):
    """Exhaustive distinct-PLD set instead of a reservoir."""

    def __init__(self):
        super().__init__()
        self._plds: set[str] = set()

    def _offer_pld(self, p: str) -> None:
        self._plds.add(p)

    def finalize(self) -> MetricResult:
        base = self._base.result()
        return MetricResult(
            metric=self.name,
            value=self._value(self._plds, base),
            estimated=False,
            parameters={"base_pld": base},
            counters={
                "total_object_uris": self.total_object_uris,
                "objects_without_pld": self.objects_without_pld,
                "distinct_plds": len(self._plds),
                "zero_denominator": int(self.total_object_uris == 0),
            },
        )


# --------------------------------------------------------------------------
# Extensional conciseness


class _ConcisenessBase:
    """Shared streaming state: batch statements per subject run, flush each
    run as one instance signature, and verify the input really is
    subject-sorted (a closed subject must never reappear)."""

    name = "extensional-conciseness"

    def __init__(self):
        self._current: str | None = None
        self._statements: set[str] = set()
        self._closed: set[int] = set()
        self.total_instances = 0
        self.duplicate_instances = 0
        self._triple_number = 0

    def consume(self, t: Triple) -> None:
        self._triple_number += 1
        subject = serialize_term(t.subject)
        if subject != self._current:
            if self._current is not None:
                self._flush()
            digest = self._digest(subject)
            if digest in self._closed:
                raise SortOrderViolation(subject, self._triple_number)
            self._closed.add(digest)
            self._current = subject
        self._statements.add(f"{serialize_term(t.predicate)} {serialize_term(t.object)}")

    @staticmethod
    def _digest(subject: str) -> int:
        h1, h2 = murmur3_x64_128(subject.encode("utf-8"))
        return (h1 << 64) | h2

    def _flush(self) -> None:
        signature = "\n".join(sorted(self._statements))
        if self._is_duplicate(signature):
            self.duplicate_instances += 1
        self.total_instances += 1
        self._statements = set()

    def _finish_value(self) -> float:
        if self._current is not None:
            self._flush()
            self._current = None
        if self.total_instances == 0:
            return 1.0
        return (self.total_instances - self.duplicate_instances) / self.total_instances

    def _counters(self) -> dict:
        return {
            "total_instances": self.total_instances,
            "duplicate_instances": self.duplicate_instances,
            "zero_denominator": int(self.total_instances == 0),
        }


class ConcisenessEstimate(_ConcisenessBase):
    """Duplicate detection through the stable Bloom filter."""

    def __init__(
        self,
        total_bits: int,
        fpr_threshold: float,
        seed: int,
        enable_resets: bool = True,
    ):
        super().__init__()
        self.seed = seed
        self._filter = StableBloomFilter(
            total_bits,
            fpr_threshold,
            SeededRng(derive_seed(seed, "conciseness")),
            enable_resets=enable_resets,
        )

    def _is_duplicate(self, signature: str) -> bool:
        return self._filter.check_and_add(signature.encode("utf-8"))

    def finalize(self) -> MetricResult:
        value = self._finish_value()
        counters = self._counters()
        counters["filter_resets"] = self._filter.resets
        return MetricResult(
            metric=self.name,
            value=value,
            estimated=True,
            parameters={
                "total_bits": self._filter.total_bits,
                "num_filters": self._filter.num_filters,
                "fpr_threshold": self._filter.fpr_threshold,
            },
            counters=counters,
            seed=self.seed,
        )


class ConcisenessExact(_ConcisenessBase):
    """Reference variant: the straightforward uniqueness check that compares
    each instance's signature against every distinct one seen so far.
    Quadratic in instances, which is exactly why the estimate exists."""

    def __init__(self):
        super().__init__()
        self._signatures: list[str] = []

    def _is_duplicate(self, signature: str) -> bool:
        for seen in self._signatures:
            if seen == signature:
                return True
        self._signatures.append(signature)
        return False

    def finalize(self) -> MetricResult:
        value = self._finish_value()
        return MetricResult(
            metric=self.name,
            value=value,
            estimated=False,
            parameters={},
            counters=self._counters(),
        )


# --------------------------------------------------------------------------
# Dereferenceability


def _route_iris(t: Triple):
    if t.subject.kind is TermKind.IRI:
        yield t.subject.lexical
    if t.object.kind is TermKind.IRI:
        yield t.object.lexical


class DerefEstimate:
    """Two-level sampling: a global reservoir of PLDs, and one reservoir of
    resource URIs per retained PLD (dropped when its PLD is evicted, which
    bounds memory by global x per-PLD capacity). Both levels hold distinct
    elements: repeats are counted but not re-offered, so duplicate triples
    cannot skew the sample while everything fits."""

    name = "dereferenceability"

    def __init__(
        self,
        resolver: Resolver,
        global_capacity: int,
        per_pld_capacity: int,
        seed: int,
    ):
        self.seed = seed
        self.resolver = CachedResolver(resolver)
        self.global_capacity = global_capacity
        self.per_pld_capacity = per_pld_capacity
        self._rng = SeededRng(derive_seed(seed, "dereferenceability"))
        self._global = ReservoirSampler(global_capacity, self._rng.fork("global"))
        self._per_pld: dict[str, ReservoirSampler] = {}
        self._per_pld_retained: dict[str, set[str]] = {}
        self.uris_routed = 0
        self.uris_without_pld = 0

    def consume(self, t: Triple) -> None:
        for uri in _route_iris(t):
            self._route(uri)

    def _route(self, uri: str) -> None:
        p = try_pld(uri)
        if p is None:
            self.uris_without_pld += 1
            return
        self.uris_routed += 1
        if p not in self._per_pld:
            outcome = self._global.add(p)
            if not (outcome.added or outcome.replaced):
                return
            if outcome.replaced:
                self._per_pld.pop(outcome.evicted, None)
                self._per_pld_retained.pop(outcome.evicted, None)
            self._per_pld[p] = ReservoirSampler(
                self.per_pld_capacity, self._rng.fork(f"pld:{p}")
            )
            self._per_pld_retained[p] = set()
        retained = self._per_pld_retained[p]
        if uri in retained:
            return
        outcome = self._per_pld[p].add(uri)
        if outcome.added or outcome.replaced:
            retained.add(uri)
        if outcome.replaced:
            retained.discard(outcome.evicted)

    def finalize(self) -> MetricResult:
        deref_ok = 0
        sampled = 0
        roots_down = 0
        transport_errors = 0
        for p in self._global.contents():
            sampler = self._per_pld.get(p)
            if sampler is None:
                continue
            uris = sampler.contents()
            sampled += len(uris)
            if not pld_alive(f"http://{p}/", self.resolver):
                roots_down += 1
                continue
            for uri in uris:
                verdict = classify(uri, self.resolver)
                if verdict.ok:
                    deref_ok += 1
                elif verdict.reason and verdict.reason.startswith("transport-error"):
                    transport_errors += 1
        value = deref_ok / sampled if sampled else 0.0
        return MetricResult(
            metric=self.name,
            value=value,
            estimated=True,
            parameters={
                "global_capacity": self.global_capacity,
                "per_pld_capacity": self.per_pld_capacity,
            },
            counters={
                "uris_routed": self.uris_routed,
                "uris_without_pld": self.uris_without_pld,
                "uris_sampled": sampled,
                "deref_ok": deref_ok,
                "plds_retained": len(self._per_pld),
                "pld_roots_down": roots_down,
                "transport_errors": transport_errors,
                "zero_denominator": int(sampled == 0),
            },
            seed=self.seed,
        )


class DerefExact:
    """Classifies every distinct subject/object URI. Only practical against
    the mock or tiny datasets; the approximate variant is the point."""

    name = "dereferenceability"

    def __init__(self, resolver: Resolver):
        self.resolver = CachedResolver(resolver)
        self._uris: set[str] = set()
        self.uris_without_pld = 0

    def consume(self, t: Triple) -> None:
        for uri in _route_iris(t):
            p = try_pld(uri)
            if p is None:
                self.uris_without_pld += 1
            else:
                self._uris.add(uri)

    def finalize(self) -> MetricResult:
        deref_ok = 0
        transport_errors = 0
        for uri in sorted(self._uris):
            verdict = classify(uri, self.resolver)
            if verdict.ok:
                deref_ok += 1
            elif verdict.reason and verdict.reason.startswith("transport-error"):
                transport_errors += 1
        total = len(self._uris)
        return MetricResult(
            metric=self.name,
            value=deref_ok / total if total else 0.0,
            estimated=False,
            parameters={},
            counters={
                "distinct_uris": total,
                "deref_ok": deref_ok,
                "uris_without_pld": self.uris_without_pld,
                "transport_errors": transport_errors,
                "zero_denominator": int(total == 0),
            },
        )


# --------------------------------------------------------------------------
# Clustering coefficient of the resource network


class ClusteringMetric:
    """Builds the resource graph while streaming; the quality value is
    1 - cc, so sparse neighbourhoods (meaningful links) score high."""

    name = "clustering-coefficient"

    def __init__(
        self,
        estimated: bool,
        mixing_multiplier: float = 1.0,
        min_steps: int = 3,
        seed: int = 0,
    ):
        self.estimated = estimated
        self.mixing_multiplier = mixing_multiplier
        self.min_steps = min_steps
        self.seed = seed
        self._graph = ResourceGraph()

    def consume(self, t: Triple) -> None:
        self._graph.add_triple(t)

    def finalize(self) -> MetricResult:
        g = self._graph
        counters = {"vertices": g.vertex_count, "edges": g.edge_count}
        parameters: dict = {}
        if g.edge_count == 0:
            cc = 0.0
            counters["edgeless_graph"] = 1
        elif self.estimated:
            r = mixing_time(g.vertex_count, self.mixing_multiplier, self.min_steps)
            walk = random_walk(g, r, derive_seed(self.seed, "walk"))
            cc = estimate_cc(walk)
            counters["walk_steps"] = r
            parameters = {
                "mixing_multiplier": self.mixing_multiplier,
                "min_steps": self.min_steps,
            }
        else:
            cc = exact_global_cc(g)
        counters["raw_cc_millionths"] = round(cc * 1_000_000)
        return MetricResult(
            metric=self.name,
            value=1.0 - cc,
            estimated=self.estimated,
            parameters=parameters,
            counters=counters,
            seed=self.seed if self.estimated else None,
        )


# --------------------------------------------------------------------------
# Functional wrappers: run one processor over a stream and time it.


def _run(processor, triples: Iterable[Triple]) -> MetricResult:
    start = time.perf_counter()
    for t in triples:
        processor.consume(t)
    result = processor.finalize()
    return result.with_elapsed(time.perf_counter() - start)


def ext_links_estimate(triples: Iterable[Triple], reservoir_capacity: int, seed: int) -> MetricResult:
    return _run(ExtLinksEstimate(reservoir_capacity, seed), triples)


def ext_links_exact(triples: Iterable[Triple]) -> MetricResult:
    return _run(ExtLinksExact(), triples)


def extcon_estimate(
    triples: Iterable[Triple], total_bits: int, fpr_threshold: float, seed: int
) -> MetricResult:
    return _run(ConcisenessEstimate(total_bits, fpr_threshold, seed), triples)


def extcon_exact(triples: Iterable[Triple]) -> MetricResult:
    return _run(ConcisenessExact(), triples)


def deref_estimate(
    triples: Iterable[Triple],
    resolver: Resolver,
    global_capacity: int,
    per_pld_capacity: int,
    seed: int,
) -> MetricResult:
    return _run(DerefEstimate(resolver, global_capacity, per_pld_capacity, seed), triples)


def deref_exact(triples: Iterable[Triple], resolver: Resolver) -> MetricResult:
    return _run(DerefExact(resolver), triples)


def cc_metric(
    triples: Iterable[Triple],
    mode: str = "estimate",
    cfg: WalkConfig | None = None,
) -> MetricResult:
    if mode not in ("exact", "estimate"):
        raise ValueError("mode must be 'exact' or 'estimate'")
    cfg = cfg or WalkConfig()
    return _run(
        ClusteringMetric(
            mode == "estimate", cfg.mixing_multiplier, cfg.min_steps, cfg.seed
        ),
        triples,
    )
