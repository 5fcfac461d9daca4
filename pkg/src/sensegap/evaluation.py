"""Model selection: masking simulation, threshold sweeps, cross-validation.

Naturally unassigned usages are rare, so evaluation data is synthesized by
masking known-assigned senses: per headword exactly one complete sense stays
unmasked (a sole complete sense always stays), and a usage keeps label 0 only
if its gold senses intersect the unmasked set. Thresholds are tuned on
training folds by maximizing an F-beta score with beta < 1, weighting
precision over recall, then applied to the held-out fold. Ten such rounds,
each with a fresh masking and fold split, give mean and spread per model.
"""

from __future__ import annotations

import json
import logging
import random
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .detector import ASSIGNED, UNASSIGNED
from .inventory import SenseInventory, complete_senses
from .seeds import substream_rng

logger = logging.getLogger(__name__)

THRESHOLD_GRID = tuple(i / 100.0 for i in range(101))
BETA_PRESETS = (0.1, 0.3, 0.5)


class EvaluationError(Exception):
    pass


@dataclass(frozen=True)
class GoldUsage:
    usage_id: str
    headword: str
    sense_ids: frozenset[str]


@dataclass
class GoldAssignment:
    """Annotated usage -> fitting-senses links; an empty set means the usage
    was judged unassigned (covered by no recorded sense)."""

    usages: dict[str, GoldUsage]

    def __len__(self) -> int:
        return len(self.usages)

    def __iter__(self):
        return iter(sorted(self.usages))

    def validate_against(self, inv: SenseInventory) -> None:
        for gold in self.usages.values():
            entry = inv.headwords.get(gold.headword)
            if entry is None:
                raise EvaluationError(f"gold usage {gold.usage_id}: headword {gold.headword!r} not in inventory")
            known = {s.sense_id for s in entry.senses}
            unknown = gold.sense_ids - known
            if unknown:
                raise EvaluationError(
                    f"gold usage {gold.usage_id}: sense ids {sorted(unknown)} not under {gold.headword!r}"
                )

    def headwords(self) -> list[str]:
        return sorted({g.headword for g in self.usages.values()})

    @classmethod
    def from_records(cls, records: Iterable[dict]) -> "GoldAssignment":
        usages = {}
        for r in records:
            usages[r["usage_id"]] = GoldUsage(
                usage_id=r["usage_id"],
                headword=r["headword"],
                sense_ids=frozenset(r.get("sense_ids") or ()),
            )
        return cls(usages)

    def to_records(self) -> list[dict]:
        return [
            {"usage_id": g.usage_id, "headword": g.headword, "sense_ids": sorted(g.sense_ids)}
            for _, g in sorted(self.usages.items())
        ]


@dataclass
class MaskingPlan:
    """Per headword: which complete senses are simulated away.

    masked and unmasked partition the complete senses; the plan's universe
    never contains incomplete senses. Multi-sense headwords keep exactly one
    unmasked sense.
    """

    masked: dict[str, frozenset[str]]
    unmasked: dict[str, frozenset[str]]
    rng_seed: int | None = None

    def headwords(self) -> list[str]:
        return sorted(self.unmasked)

    def universe(self, headword: str) -> frozenset[str]:
        return self.masked.get(headword, frozenset()) | self.unmasked.get(headword, frozenset())


def build_masking_plan(
    gold: GoldAssignment,
    inv: SenseInventory,
    kind: str,
    rng: random.Random,
    rng_seed: int | None = None,
) -> MaskingPlan:
    """Draw a masking plan over the gold headwords.

    Incomplete senses (for the given representation kind) are outside the
    plan entirely. A headword whose only complete sense would otherwise be
    masked drops out of evaluation, so sole complete senses are always
    unmasked; among several, one is chosen uniformly and the rest are masked.
    Headwords with zero complete senses are excluded and logged.
    """
    view = complete_senses(inv, kind)
    masked: dict[str, frozenset[str]] = {}
    unmasked: dict[str, frozenset[str]] = {}
    for headword in gold.headwords():
        complete = sorted(view.complete_ids(headword))
        if not complete:
            logger.warning("headword %r has no complete sense for kind %r; excluded from plan", headword, kind)
            continue
        if len(complete) == 1:
            keep = complete[0]
        else:
            keep = complete[rng.randrange(len(complete))]
        unmasked[headword] = frozenset({keep})
        masked[headword] = frozenset(complete) - {keep}
    return MaskingPlan(masked=masked, unmasked=unmasked, rng_seed=rng_seed)


def derive_labels(gold: GoldAssignment, plan: MaskingPlan) -> dict[str, int]:
    """Label 0 iff at least one gold sense survives unmasked, else 1.

    Usages with an empty gold set stay unassigned and stay in the data;
    usages of headwords excluded from the plan drop out of scope.
    """
    labels: dict[str, int] = {}
    for usage_id in sorted(gold.usages):
        g = gold.usages[usage_id]
        if g.headword not in plan.unmasked:
            continue
        hit = g.sense_ids & plan.unmasked[g.headword]
        labels[usage_id] = ASSIGNED if hit else UNASSIGNED
    return labels


def precision_recall(
    preds: Mapping[str, int],
    labels: Mapping[str, int],
) -> tuple[float | None, float | None]:
    """Positive class is unassigned (label 1). Precision is undefined (None)
    with no predicted positives, recall with no actual positives."""
    tp = fp = fn = 0
    for usage_id, label in labels.items():
        pred = preds[usage_id]
        if pred == UNASSIGNED and label == UNASSIGNED:
            tp += 1
        elif pred == UNASSIGNED and label == ASSIGNED:
            fp += 1
        elif pred == ASSIGNED and label == UNASSIGNED:
            fn += 1
    precision = tp / (tp + fp) if (tp + fp) > 0 else None
    recall = tp / (tp + fn) if (tp + fn) > 0 else None
    return precision, recall


def f_beta(precision: float, recall: float, beta: float = 0.3) -> float:
    """F-beta; beta < 1 weights precision more. Both-zero -> 0 by convention."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    if not (0.0 <= precision <= 1.0 and 0.0 <= recall <= 1.0):
        raise ValueError("precision and recall must lie in [0, 1]")
    if precision == 0.0 and recall == 0.0:
        return 0.0
    b2 = beta * beta
    return (1.0 + b2) * precision * recall / (b2 * precision + recall)


def _objective(precision: float | None, recall: float | None, beta: float) -> float:
    # Undefined P or R scores 0 inside the sweep; never 1.
    if precision is None or recall is None:
        return 0.0
    return f_beta(precision, recall, beta)


@dataclass
class SweepPoint:
    threshold: float
    precision: float | None
    recall: float | None
    score: float


@dataclass
class SweepResult:
    threshold: float
    score: float
    precision: float | None
    recall: float | None
    curve: list[SweepPoint]


def threshold_sweep(
    similarities: Mapping[str, float],
    labels: Mapping[str, int],
    beta: float = 0.3,
    grid: Sequence[float] = THRESHOLD_GRID,
) -> SweepResult:
    """Grid-search the classification threshold maximizing F-beta.

    Every grid point is evaluated; ties resolve to the smallest maximizing
    threshold.
    """
    if not labels:
        raise EvaluationError("threshold sweep needs training data")
    curve = []
    best: SweepPoint | None = None
    for t in grid:
        preds = {u: (UNASSIGNED if similarities[u] < t else ASSIGNED) for u in labels}
        precision, recall = precision_recall(preds, labels)
        point = SweepPoint(threshold=t, precision=precision, recall=recall, score=_objective(precision, recall, beta))
        curve.append(point)
        if best is None or point.score > best.score:
            best = point
    return SweepResult(
        threshold=best.threshold,
        score=best.score,
        precision=best.precision,
        recall=best.recall,
        curve=curve,
    )


def split_folds(usage_ids: Sequence[str], n_folds: int, rng: random.Random) -> list[list[str]]:
    """Random partition into n_folds near-equal folds (sizes differ by <= 1)."""
    ids = sorted(usage_ids)
    if len(ids) < n_folds:
        raise EvaluationError(f"cannot split {len(ids)} usages into {n_folds} folds")
    rng.shuffle(ids)
    base, extra = divmod(len(ids), n_folds)
    folds = []
    pos = 0
    for k in range(n_folds):
        size = base + (1 if k < extra else 0)
        folds.append(sorted(ids[pos : pos + size]))
        pos += size
    return folds


def random_baseline(
    labels: Mapping[str, int],
    rng: random.Random,
    p: float | None = None,
) -> dict[str, int]:
    """Predict assigned with probability p (default: the assigned share of
    ``labels``), independently per usage."""
    if not labels:
        raise EvaluationError("random baseline needs labels")
    if p is None:
        p = sum(1 for v in labels.values() if v == ASSIGNED) / len(labels)
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must lie in [0, 1]")
    return {u: (ASSIGNED if rng.random() < p else UNASSIGNED) for u in sorted(labels)}


def assigned_share(labels: Mapping[str, int]) -> float:
    if not labels:
        raise EvaluationError("no labels")
    return sum(1 for v in labels.values() if v == ASSIGNED) / len(labels)


def frequency_baseline(
    gold: GoldAssignment,
    frequency_rank: Mapping[str, Sequence[str]],
    plan: MaskingPlan,
) -> dict[str, int]:
    """Predict assigned iff the usage fits its headword's most frequent sense.

    The most frequent sense is the best-ranked one inside the plan's universe
    of complete senses, regardless of whether the simulation masked it; the
    baseline itself never sees the masking, only the derived labels do.
    """
    preds: dict[str, int] = {}
    for usage_id in sorted(gold.usages):
        g = gold.usages[usage_id]
        if g.headword not in plan.unmasked:
            continue
        rank = frequency_rank.get(g.headword)
        if rank is None:
            raise EvaluationError(f"no frequency rank for headword {g.headword!r}")
        universe = plan.universe(g.headword)
        top = next((sid for sid in rank if sid in universe), None)
        if top is None:
            preds[usage_id] = UNASSIGNED
        else:
            preds[usage_id] = ASSIGNED if top in g.sense_ids else UNASSIGNED
    return preds


# ---------------------------------------------------------------------------
# Cross-validation


@dataclass
class EvalConfig:
    beta: float = 0.3
    rounds: int = 10
    folds: int = 5
    threshold_grid: tuple[float, ...] = THRESHOLD_GRID
    rng_seed: int = 0
    masking_kind: str = "both"
    group_folds_by_headword: bool = False

    def __post_init__(self) -> None:
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.rounds < 1 or self.folds < 2:
            raise ValueError("need rounds >= 1 and folds >= 2")
        if any(not (0.0 <= t <= 1.0) for t in self.threshold_grid):
            raise ValueError("threshold grid must lie in [0, 1]")
        if list(self.threshold_grid) != sorted(self.threshold_grid):
            raise ValueError("threshold grid must be sorted")


@dataclass
class SplitMetrics:
    precision: float | None
    recall: float | None
    f_score: float

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f_score": self.f_score}


@dataclass
class FoldReport:
    fold: int
    threshold: float
    train: SplitMetrics
    test: SplitMetrics
    random_train: SplitMetrics | None = None
    random_test: SplitMetrics | None = None
    frequency_train: SplitMetrics | None = None
    frequency_test: SplitMetrics | None = None
    curve: list[SweepPoint] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {
            "fold": self.fold,
            "threshold": self.threshold,
            "train": self.train.to_dict(),
            "test": self.test.to_dict(),
        }
        for name in ("random_train", "random_test", "frequency_train", "frequency_test"):
            value = getattr(self, name)
            d[name] = value.to_dict() if value is not None else None
        return d


def _mean_defined(values: Iterable[float | None]) -> float | None:
    defined = [v for v in values if v is not None]
    if not defined:
        return None
    return sum(defined) / len(defined)


@dataclass
class RoundReport:
    round_index: int
    folds: list[FoldReport]
    label_counts: dict[str, int]

    def _avg(self, pick) -> SplitMetrics:
        picked = [pick(f) for f in self.folds]
        return SplitMetrics(
            precision=_mean_defined(m.precision for m in picked),
            recall=_mean_defined(m.recall for m in picked),
            f_score=sum(m.f_score for m in picked) / len(picked),
        )

    @property
    def avg_threshold(self) -> float:
        return sum(f.threshold for f in self.folds) / len(self.folds)

    @property
    def avg_train(self) -> SplitMetrics:
        return self._avg(lambda f: f.train)

    @property
    def avg_test(self) -> SplitMetrics:
        return self._avg(lambda f: f.test)

    def avg_optional(self, name: str) -> SplitMetrics | None:
        values = [getattr(f, name) for f in self.folds]
        if any(v is None for v in values):
            return None
        return self._avg(lambda f: getattr(f, name))

    def to_dict(self) -> dict:
        return {
            "round": self.round_index,
            "label_counts": self.label_counts,
            "avg_threshold": self.avg_threshold,
            "avg_train": self.avg_train.to_dict(),
            "avg_test": self.avg_test.to_dict(),
            "folds": [f.to_dict() for f in self.folds],
        }


@dataclass
class MetricsReport:
    config: EvalConfig
    model_identifier: str
    rounds: list[RoundReport]

    @property
    def mean_test_f(self) -> float:
        scores = [f.test.f_score for r in self.rounds for f in r.folds]
        return sum(scores) / len(scores)

    @property
    def std_test_f(self) -> float:
        per_round = [r.avg_test.f_score for r in self.rounds]
        if len(per_round) < 2:
            return 0.0
        return statistics.stdev(per_round)

    @property
    def mean_train_f(self) -> float:
        scores = [f.train.f_score for r in self.rounds for f in r.folds]
        return sum(scores) / len(scores)

    def baseline_mean_test_f(self, name: str) -> float | None:
        scores = []
        for r in self.rounds:
            for f in r.folds:
                metrics = getattr(f, name)
                if metrics is None:
                    return None
                scores.append(metrics.f_score)
        return sum(scores) / len(scores)

    def to_dict(self) -> dict:
        return {
            "model": self.model_identifier,
            "beta": self.config.beta,
            "rounds": [r.to_dict() for r in self.rounds],
            "rng_seed": self.config.rng_seed,
            "summary": {
                "mean_test_f": self.mean_test_f,
                "std_test_f": self.std_test_f,
                "mean_train_f": self.mean_train_f,
                "random_mean_test_f": self.baseline_mean_test_f("random_test"),
                "frequency_mean_test_f": self.baseline_mean_test_f("frequency_test"),
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def nearest_unmasked_similarity(
    sim_table: Mapping[str, Mapping[str, float]],
    gold: GoldAssignment,
    plan: MaskingPlan,
) -> dict[str, float]:
    """Per usage, the best similarity among senses the plan left unmasked.

    This is what the simulated model "sees": masked senses are treated as if
    the dictionary never recorded them.
    """
    sims: dict[str, float] = {}
    for usage_id in sorted(gold.usages):
        g = gold.usages[usage_id]
        visible = plan.unmasked.get(g.headword)
        if not visible:
            continue
        row = sim_table.get(usage_id)
        if row is None:
            raise EvaluationError(f"no similarities for usage {usage_id}")
        values = []
        for sense_id in visible:
            if sense_id not in row:
                raise EvaluationError(f"missing similarity for ({usage_id}, {sense_id})")
            values.append(row[sense_id])
        sims[usage_id] = max(values)
    return sims


def _metrics_at(
    preds: Mapping[str, int],
    labels: Mapping[str, int],
    beta: float,
) -> SplitMetrics:
    precision, recall = precision_recall(preds, labels)
    return SplitMetrics(precision=precision, recall=recall, f_score=_objective(precision, recall, beta))


def _threshold_predictions(similarities: Mapping[str, float], scope: Iterable[str], t: float) -> dict[str, int]:
    return {u: (UNASSIGNED if similarities[u] < t else ASSIGNED) for u in scope}


def run_cross_validation(
    sim_table: Mapping[str, Mapping[str, float]],
    gold: GoldAssignment,
    inv: SenseInventory,
    config: EvalConfig,
    model_identifier: str = "",
    with_baselines: bool = True,
) -> MetricsReport:
    """Rounds of masking simulation, each cross-validated over random folds.

    Each round draws a fresh masking plan and fold split from named seed
    substreams of ``config.rng_seed``, tunes the threshold on the training
    folds and evaluates it on the held-out fold. The random baseline draws
    its assigned-probability from the training folds; the frequency baseline
    needs sense frequency metadata and is omitted without it.
    """
    frequency_rank = None
    if with_baselines and inv.has_frequency_metadata():
        frequency_rank = {
            h: list(e.sense_frequency_rank or []) for h, e in inv.headwords.items()
        }
    rounds = []
    for r in range(config.rounds):
        mask_rng = substream_rng(config.rng_seed, "masking", r)
        plan = build_masking_plan(gold, inv, config.masking_kind, mask_rng, rng_seed=config.rng_seed)
        labels = derive_labels(gold, plan)
        if len(labels) < config.folds:
            raise EvaluationError(f"round {r}: only {len(labels)} usages in scope")
        sims = nearest_unmasked_similarity(sim_table, gold, plan)

        fold_rng = substream_rng(config.rng_seed, "folds", r)
        if config.group_folds_by_headword:
            folds = _split_folds_by_headword(gold, labels, config.folds, fold_rng)
        else:
            folds = split_folds(sorted(labels), config.folds, fold_rng)

        freq_preds = None
        if frequency_rank is not None:
            freq_preds = frequency_baseline(gold, frequency_rank, plan)

        fold_reports = []
        for k, test_ids in enumerate(folds):
            if not test_ids:
                raise EvaluationError(f"round {r}: fold {k} is empty")
            test_set = set(test_ids)
            train_labels = {u: v for u, v in labels.items() if u not in test_set}
            test_labels = {u: labels[u] for u in test_ids}
            sweep = threshold_sweep(sims, train_labels, beta=config.beta, grid=config.threshold_grid)
            t = sweep.threshold
            train_metrics = SplitMetrics(precision=sweep.precision, recall=sweep.recall, f_score=sweep.score)
            test_metrics = _metrics_at(_threshold_predictions(sims, test_ids, t), test_labels, config.beta)

            random_train = random_test = None
            frequency_train = frequency_test = None
            if with_baselines:
                base_rng = substream_rng(config.rng_seed, "baseline", r, k)
                p = assigned_share(train_labels)
                random_train = _metrics_at(random_baseline(train_labels, base_rng), train_labels, config.beta)
                random_test = _metrics_at(random_baseline(test_labels, base_rng, p=p), test_labels, config.beta)
                if freq_preds is not None:
                    frequency_train = _metrics_at(
                        {u: freq_preds[u] for u in train_labels}, train_labels, config.beta
                    )
                    frequency_test = _metrics_at(
                        {u: freq_preds[u] for u in test_labels}, test_labels, config.beta
                    )
            fold_reports.append(
                FoldReport(
                    fold=k + 1,
                    threshold=t,
                    train=train_metrics,
                    test=test_metrics,
                    random_train=random_train,
                    random_test=random_test,
                    frequency_train=frequency_train,
                    frequency_test=frequency_test,
                    curve=sweep.curve,
                )
            )
        label_counts = {
            "assigned": sum(1 for v in labels.values() if v == ASSIGNED),
            "unassigned": sum(1 for v in labels.values() if v == UNASSIGNED),
        }
        rounds.append(RoundReport(round_index=r + 1, folds=fold_reports, label_counts=label_counts))
    return MetricsReport(config=config, model_identifier=model_identifier, rounds=rounds)


def _split_folds_by_headword(
    gold: GoldAssignment,
    labels: Mapping[str, int],
    n_folds: int,
    rng: random.Random,
) -> list[list[str]]:
    """Stricter alternative split keeping all usages of a headword in one fold."""
    by_headword: dict[str, list[str]] = {}
    for usage_id in sorted(labels):
        by_headword.setdefault(gold.usages[usage_id].headword, []).append(usage_id)
    headwords = sorted(by_headword)
    if len(headwords) < n_folds:
        raise EvaluationError(f"cannot split {len(headwords)} headwords into {n_folds} folds")
    rng.shuffle(headwords)
    folds: list[list[str]] = [[] for _ in range(n_folds)]
    sizes = [0] * n_folds
    for headword in headwords:
        k = sizes.index(min(sizes))
        folds[k].extend(by_headword[headword])
        sizes[k] += len(by_headword[headword])
    if any(not f for f in folds):
        raise EvaluationError("headword-grouped split produced an empty fold")
    return [sorted(f) for f in folds]


# ---------------------------------------------------------------------------
# Report rendering


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.3f}"


def render_round_table(report: RoundReport, model_identifier: str = "") -> str:
    """Fixed-width table: threshold / precision / recall / F and baselines per
    fold, training and test, with the across-folds average first."""
    folds = report.folds
    header = ["", "Average", ""] + [v for f in folds for v in (f"Fold {f.fold}", "")]
    sub = ["", "Train", "Test"] + ["Train", "Test"] * len(folds)

    def row(name, avg_train, avg_test, pick_train, pick_test):
        cells = [name, _fmt(avg_train), _fmt(avg_test)]
        for f in folds:
            cells.extend([_fmt(pick_train(f)), _fmt(pick_test(f))])
        return cells

    rows = [
        row("threshold", report.avg_threshold, None, lambda f: f.threshold, lambda f: None),
        row(
            "precision",
            report.avg_train.precision,
            report.avg_test.precision,
            lambda f: f.train.precision,
            lambda f: f.test.precision,
        ),
        row(
            "recall",
            report.avg_train.recall,
            report.avg_test.recall,
            lambda f: f.train.recall,
            lambda f: f.test.recall,
        ),
        row(
            "F",
            report.avg_train.f_score,
            report.avg_test.f_score,
            lambda f: f.train.f_score,
            lambda f: f.test.f_score,
        ),
    ]
    rnd_train = report.avg_optional("random_train")
    rnd_test = report.avg_optional("random_test")
    if rnd_train is not None:
        rows.append(
            row(
                "random_F",
                rnd_train.f_score,
                rnd_test.f_score if rnd_test else None,
                lambda f: f.random_train.f_score if f.random_train else None,
                lambda f: f.random_test.f_score if f.random_test else None,
            )
        )
    freq_train = report.avg_optional("frequency_train")
    freq_test = report.avg_optional("frequency_test")
    if freq_train is not None:
        rows.append(
            row(
                "frequency_F",
                freq_train.f_score,
                freq_test.f_score if freq_test else None,
                lambda f: f.frequency_train.f_score if f.frequency_train else None,
                lambda f: f.frequency_test.f_score if f.frequency_test else None,
            )
        )
    table = [header, sub] + rows
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    lines = []
    if model_identifier:
        lines.append(f"model {model_identifier}, round {report.round_index}")
    for r in table:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def render_grid(reports: Sequence[MetricsReport]) -> str:
    """Sense mode x usage mode x similarity grid of mean test F scores."""
    by_id = {r.model_identifier: r for r in reports}
    sense_modes = sorted({r.model_identifier.split("_")[0] for r in reports})
    columns = []
    for usage_label, usage_part in (("DEFAULT", ""), ("SUB", "SUB_")):
        for sim in ("COS", "SPR"):
            columns.append((usage_label, sim, usage_part + sim))
    lines = ["mode  " + "  ".join(f"{ul}_{sim}".ljust(11) for ul, sim, _ in columns)]
    for mode in sense_modes:
        cells = []
        for _, _, suffix in columns:
            report = by_id.get(f"{mode}_{suffix}")
            cells.append(f"{report.mean_test_f:.3f}" if report else "-")
        lines.append(mode.ljust(4) + "  " + "  ".join(c.ljust(11) for c in cells))
    best = max(reports, key=lambda r: (r.mean_test_f, r.model_identifier))
    lines.append(f"best: {best.model_identifier} (mean test F = {best.mean_test_f:.3f})")
    return "\n".join(lines) + "\n"


def pr_curve_records(report: MetricsReport) -> list[dict]:
    """Columnar precision/recall-vs-threshold data from the training sweeps,
    one row per (round, fold, threshold), for external plotting."""
    rows = []
    for rnd in report.rounds:
        for fold in rnd.folds:
            for point in fold.curve:
                rows.append(
                    {
                        "model": report.model_identifier,
                        "round": rnd.round_index,
                        "fold": fold.fold,
                        "threshold": point.threshold,
                        "precision": point.precision,
                        "recall": point.recall,
                    }
                )
    return rows


def write_pr_curves(reports: Sequence[MetricsReport]) -> str:
    lines = ["model,round,fold,threshold,precision,recall"]
    for report in reports:
        for row in pr_curve_records(report):
            lines.append(
                "{model},{round},{fold},{threshold:.2f},{p},{r}".format(
                    model=row["model"],
                    round=row["round"],
                    fold=row["fold"],
                    threshold=row["threshold"],
                    p="" if row["precision"] is None else f"{row['precision']:.6f}",
                    r="" if row["recall"] is None else f"{row['recall']:.6f}",
                )
            )
    return "\n".join(lines) + "\n"
