"""Batched principal feature analysis and the downstream filtering steps.

The driver discretizes every variable, drops constants, partitions the
feature nodes into sublists of at most ``ns`` nodes, dissects each
sublist's dependency graph, and repeats on the survivors.  Once a full
pass removes nothing, the total graph of the remaining nodes is dissected
one final time.  All pairwise verdicts live in one shared cache, so no
pair is ever tested twice.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .binning import DiscretizedFeature, discretize_all
from .dataset import Dataset, subsample
from .depgraph import IndependenceCache, build_graph
from .dissect import Removal, dissect
from .stats import DEFAULT_MIN_EXPECTED, DOF_MODES, mutual_information

BATCHING_MODES = ("ordered", "random")


@dataclass(frozen=True)
class PfaConfig:
    """Run parameters.  ``nu`` has no default: it is dataset-dependent."""

    nu: int
    alpha: float = 0.01
    ns: int = 50
    batching: str = "ordered"
    seed: int = 0
    min_expected: float = DEFAULT_MIN_EXPECTED
    dof_mode: str = "independence"
    theta: float | None = None
    tie_seed: int | None = None
    threads: int = 1

    def __post_init__(self):
        if self.nu < 1:
            raise ValueError(f"nu must be >= 1, got {self.nu}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.ns < 2:
            raise ValueError(f"ns must be >= 2, got {self.ns}")
        if self.batching not in BATCHING_MODES:
            raise ValueError(
                f"batching must be one of {BATCHING_MODES}, got {self.batching!r}"
            )
        if self.dof_mode not in DOF_MODES:
            raise ValueError(
                f"dof_mode must be one of {DOF_MODES}, got {self.dof_mode!r}"
            )
        if self.theta is not None and self.theta < 0.0:
            raise ValueError(f"theta must be >= 0, got {self.theta}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


@dataclass
class PfaResult:
    """Principal subgraphs plus the removal log and optional filtered sets."""

    principal_subgraphs: list[frozenset[int]]
    removed: list[Removal]
    constants: list[int]
    warnings: list[str]
    relevant_features: frozenset[int] | None = None
    mi_scores: dict[int, dict[int, float]] | None = None
    cache: IndependenceCache = field(repr=False, default=None)
    discretized: dict[int, DiscretizedFeature] = field(repr=False, default=None)
    n_outputs: int = 0

    @property
    def principal_features(self) -> frozenset[int]:
        if not self.principal_subgraphs:
            return frozenset()
        return frozenset().union(*self.principal_subgraphs)

    def selected_features(self) -> frozenset[int]:
        """The most reduced feature set this result carries."""
        if self.mi_scores is not None and self.theta_selected is not None:
            return self.theta_selected
        if self.relevant_features is not None:
            return self.relevant_features
        return self.principal_features

    theta_selected: frozenset[int] | None = None


def _partition(nodes: list[int], ns: int, batching: str, rng: random.Random):
    ordered = sorted(nodes)
    if batching == "random":
        rng.shuffle(ordered)
    return [ordered[i : i + ns] for i in range(0, len(ordered), ns)]


def _guard_warnings(cache: IndependenceCache, known: set[tuple[int, int]]) -> list[str]:
    messages = []
    for key in cache.verdicts:
        if key not in known and not cache.verdicts[key].guard_ok:
            known.add(key)
            messages.append(
                f"expected frequency below {cache.min_expected} for pair "
                f"{key[0]}-{key[1]}; consider increasing nu"
            )
    return messages


def run_pfa(ds: Dataset, cfg: PfaConfig) -> PfaResult:
    """Execute the batched analysis over the dataset's feature rows."""
    disc_rows = discretize_all(ds, cfg.nu)
    discretized = {i + 1: d for i, d in enumerate(disc_rows)}
    constants = [i for i in ds.feature_ids if not discretized[i].testable]
    nodes = [i for i in ds.feature_ids if discretized[i].testable]
    cache = IndependenceCache(discretized, cfg.alpha, cfg.min_expected, cfg.dof_mode)

    removals: list[Removal] = []
    warnings: list[str] = []
    flagged: set[tuple[int, int]] = set()
    step = 0
    rng = random.Random(cfg.seed)

    def record(result) -> list[int]:
        nonlocal step
        survivors = []
        for removal in result.removals:
            step += 1
            removals.append(replace(removal, step=step))
        for subgraph in result.complete_subgraphs:
            survivors.extend(subgraph)
        return survivors

    current = nodes
    final_subgraphs: list[frozenset[int]] = []
    while True:
        survivors: list[int] = []
        removed_in_pass = False
        for sublist in _partition(current, cfg.ns, cfg.batching, rng):
            graph = build_graph(cache, sublist, cfg.threads)
            result = dissect(graph, cfg.tie_seed)
            if result.removals:
                removed_in_pass = True
            survivors.extend(record(result))
        warnings.extend(_guard_warnings(cache, flagged))
        if not removed_in_pass:
            graph = build_graph(cache, survivors, cfg.threads)
            final = dissect(graph, cfg.tie_seed)
            record(final)
            final_subgraphs = sorted(final.complete_subgraphs, key=min)
            warnings.extend(_guard_warnings(cache, flagged))
            break
        current = survivors

    return PfaResult(
        principal_subgraphs=final_subgraphs,
        removed=removals,
        constants=constants,
        warnings=warnings,
        cache=cache,
        discretized=discretized,
        n_outputs=ds.n_outputs,
    )


def filter_relevant(result: PfaResult, ds: Dataset, cfg: PfaConfig) -> PfaResult:
    """Keep whole principal subgraphs with any member related to any output.

    A subgraph enters the relevant set as a unit: when one member is not
    independent of one output, every member is included.
    """
    if ds.n_outputs < 1:
        raise ValueError("relevance filtering needs at least one output row")
    relevant: set[int] = set()
    for subgraph in result.principal_subgraphs:
        related = any(
            not result.cache.verdict(member, output).independent
            for member in sorted(subgraph)
            for output in ds.output_ids
        )
        if related:
            relevant.update(subgraph)
    result.relevant_features = frozenset(relevant)
    return result


def filter_by_mi(result: PfaResult, ds: Dataset, theta: float) -> frozenset[int]:
    """Relevant features whose mutual information with an output exceeds theta.

    Scores are recorded per feature and output; a feature passes on its
    maximum score across outputs.  Unlike relevance filtering this selects
    individual features, not whole subgraphs.
    """
    if result.relevant_features is None:
        raise ValueError("run filter_relevant before filter_by_mi")
    scores: dict[int, dict[int, float]] = {}
    selected = set()
    for feature in sorted(result.relevant_features):
        scores[feature] = {
            output: mutual_information(
                result.discretized[feature], result.discretized[output]
            )
            for output in ds.output_ids
        }
        if max(scores[feature].values()) > theta:
            selected.add(feature)
    result.mi_scores = scores
    result.theta_selected = frozenset(selected)
    return result.theta_selected


def explain_feature(result: PfaResult, target: int) -> frozenset[int]:
    """Principal features not independent of the target variable.

    Missing pairwise verdicts are computed on demand through the shared
    cache.  For a target that is itself principal, this returns the other
    members of its own subgraph (and any further related principals).
    """
    if target not in result.discretized:
        raise ValueError(f"unknown variable id {target}")
    if not result.discretized[target].testable:
        return frozenset()
    related = set()
    for feature in sorted(result.principal_features):
        if feature == target:
            continue
        if not result.cache.verdict(target, feature).independent:
            related.add(feature)
    return frozenset(related)


def robust_intersection(
    ds: Dataset, cfg: PfaConfig, runs: int, fraction: float
) -> tuple[frozenset[int], list[PfaResult]]:
    """Intersect feature sets over repeated runs on random subsamples.

    Per-run seeds are cfg.seed + run index.  With outputs present the
    relevant sets are intersected; without outputs, the principal sets.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    results = []
    common: frozenset[int] | None = None
    for run_index in range(runs):
        run_seed = cfg.seed + run_index
        sample = subsample(ds, fraction, run_seed) if fraction < 1.0 else ds
        run_cfg = replace(cfg, seed=run_seed)
        try:
            result = run_pfa(sample, run_cfg)
            if ds.n_outputs >= 1:
                result = filter_relevant(result, sample, run_cfg)
                selected = result.relevant_features
            else:
                selected = result.principal_features
        except Exception as exc:
            raise RuntimeError(f"run {run_index} failed: {exc}") from exc
        results.append(result)
        common = selected if common is None else common & selected
    return common, results
