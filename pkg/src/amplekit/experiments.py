"""Removal resilience and batch statistics.

Three kinds of machinery live here.  First, exact arithmetic around
simplex-family removal: removing the upward closure of an antichain of
simplexes, and the guarantee that an r-ample complex stays (r - k)-ample
whenever the removed family's size-plus-dimension total stays strictly
below the k-th reduced Dedekind number plus k.  Second, reproducible batch
experiments that exercise the guarantee on randomly found ample complexes
(hypothesis arm expected to pass every single trial; a control arm samples
families at and beyond the bound and only records what happens).  Third,
finite-scale statistical probes: witness counting, random equipartition of
a verified-ample complex, dimension-and-Betti profiles of medial samples
against the log2-window, and a disc-filling stress run over a cone-saturated
tower core.  The finite-scale probes are exploratory; their reports say so.

Reports are plain data: a config echo, one record per trial, aggregates.
Re-running the same config reproduces the same report, so timings are kept
out of the canonical serialization.
"""

import csv
import io
import time
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .ampleness import (
    dedekind_reduced,
    is_r_ample,
    iter_witnesses,
    max_ampleness,
    min_vertices_for_ample,
)
from .complexes import SimplicialComplex, mask_of
from .constructions import (
    SplitMix64,
    medial_sample,
    one_vertex_extension,
    rado_tower,
    search_ample,
)
from .errors import (
    AbsentSimplexError,
    InvalidParametersError,
    MalformedSimplexError,
    NotAmpleEnoughError,
    ResourceLimitError,
)
from .topology import FilledDisc, betti_numbers, dimension_threshold, fill_loop


@lru_cache(maxsize=None)
def _mprime(k: int) -> int:
    return dedekind_reduced(k)


# --------------------------------------------------------------------------
# removal families


def _canonical_simplex(simplex) -> Tuple[int, ...]:
    vs = tuple(sorted(simplex))
    if not vs:
        raise MalformedSimplexError("removal family members must be non-empty")
    if len(set(vs)) != len(vs):
        raise MalformedSimplexError(f"repeated vertex in {vs}")
    for v in vs:
        if not isinstance(v, int) or v < 0:
            raise MalformedSimplexError(f"vertex ids must be non-negative ints, got {v!r}")
    return vs


@dataclass(frozen=True)
class RemovalFamily:
    """An antichain of simplexes marked for removal.

    Input simplexes that are cofaces of other members are dropped on
    construction (removing a simplex already removes every coface, so only
    the minimal members matter).  The two numbers the resilience bound
    cares about are `cardinality` and `total_dimension`.
    """

    simplexes: Tuple[Tuple[int, ...], ...]

    def __init__(self, simplexes) -> None:
        cleaned = sorted({_canonical_simplex(s) for s in simplexes})
        masks = [mask_of(s) for s in cleaned]
        keep = []
        for i, m in enumerate(masks):
            if any(j != i and masks[j] & m == masks[j] for j in range(len(masks))):
                continue  # a strict face of m is also in the family
            keep.append(cleaned[i])
        object.__setattr__(self, "simplexes", tuple(sorted(keep, key=lambda s: (len(s), s))))

    @property
    def cardinality(self) -> int:
        return len(self.simplexes)

    @property
    def total_dimension(self) -> int:
        return sum(len(s) - 1 for s in self.simplexes)

    @property
    def weight(self) -> int:
        """cardinality + total_dimension, the quantity the resilience bound tests."""
        return self.cardinality + self.total_dimension

    def to_json_obj(self) -> list:
        return [list(s) for s in self.simplexes]


def remove_family(x: SimplicialComplex, family: RemovalFamily) -> SimplicialComplex:
    """x minus every member of the family and every simplex containing one.

    The result is downward closed: whenever a simplex survives, none of its
    faces contained a removed member either.  Removing a single vertex this
    way equals inducing on the remaining vertices.
    """
    fam_masks = []
    for s in family.simplexes:
        if s not in x:
            raise AbsentSimplexError(f"simplex {s} is not in the complex")
        fam_masks.append(mask_of(s))
    keep = [
        m
        for m in x.simplex_masks()
        if not any(m & fm == fm for fm in fam_masks)
    ]
    return SimplicialComplex._from_closed_masks(keep)


def resilience_guarantee(r: int, family: RemovalFamily) -> Optional[int]:
    """Guaranteed ampleness of an r-ample complex after removing the family.

    Finds the minimal k >= 0 with cardinality + total_dimension strictly
    below M'(k) + k, where M' is the reduced Dedekind sequence, and returns
    r - k.  Returns None when the guarantee degenerates below 1-ample.
    """
    if r < 1:
        raise InvalidParametersError("r must be >= 1")
    s = family.weight
    k = 0
    while s >= _mprime(k) + k:
        k += 1
    guaranteed = r - k
    return guaranteed if guaranteed >= 1 else None


def connectivity_after_removal_bound(
    r: int, a0: int, a1: int, explicit: bool = False
) -> bool:
    """True when removing a0 vertices and a1 edges from an r-ample complex
    is guaranteed to leave it 2-ample, hence connected.

    The test is a0 + 2*a1 < M'(r - 2) + r - 2.  With explicit=True the
    Dedekind term is replaced by the closed-form lower bound
    2**C(r - 2, floor(r/2) - 1), which is sufficient but weaker.
    """
    if r < 3:
        raise InvalidParametersError("connectivity guarantee needs r >= 3")
    if a0 < 0 or a1 < 0:
        raise InvalidParametersError("removal counts must be >= 0")
    lhs = a0 + 2 * a1
    if explicit:
        rhs = 2 ** comb(r - 2, r // 2 - 1) + r - 2
    else:
        rhs = _mprime(r - 2) + r - 2
    return lhs < rhs


# --------------------------------------------------------------------------
# removal-family sampling


def _partitions(total: int) -> List[Tuple[int, ...]]:
    """All partitions of total into parts >= 1, parts non-increasing."""
    out: List[Tuple[int, ...]] = []

    def walk(rest: int, cap: int, acc: List[int]) -> None:
        if rest == 0:
            out.append(tuple(acc))
            return
        for p in range(min(rest, cap), 0, -1):
            acc.append(p)
            walk(rest - p, p, acc)
            acc.pop()

    walk(total, total, [])
    return out


_SAMPLE_ATTEMPTS = 1000


def sample_removal_family(
    x: SimplicialComplex, weight: int, rng: SplitMix64
) -> RemovalFamily:
    """Random removal family with cardinality + total_dimension == weight.

    A shape (multiset of member dimensions, encoded as a partition of the
    weight where a part p stands for one simplex of dimension p - 1) is
    drawn uniformly among the shapes x can supply, then members are drawn
    without replacement per dimension.  Draws whose members fail to form an
    antichain of the requested weight are rejected and retried.
    """
    if weight < 1:
        raise InvalidParametersError("weight must be >= 1")
    fvec = x.f_vector()
    feasible = []
    for shape in _partitions(weight):
        need: Dict[int, int] = {}
        for p in shape:
            need[p - 1] = need.get(p - 1, 0) + 1
        if all(d < len(fvec) and fvec[d] >= c for d, c in need.items()):
            feasible.append(shape)
    if not feasible:
        raise InvalidParametersError(
            f"the complex has no removal family of weight {weight}"
        )
    for _ in range(_SAMPLE_ATTEMPTS):
        shape = rng.choice(feasible)
        members: List[Tuple[int, ...]] = []
        ok = True
        by_dim: Dict[int, int] = {}
        for p in shape:
            by_dim[p - 1] = by_dim.get(p - 1, 0) + 1
        for d, count in sorted(by_dim.items()):
            pool = list(x.simplexes(d))
            if count > len(pool):
                ok = False
                break
            for _ in range(count):
                pick = rng.uniform_below(len(pool))
                members.append(pool.pop(pick))
        if not ok:
            continue
        fam = RemovalFamily(members)
        if fam.weight == weight and fam.cardinality == len(members):
            return fam
    raise ResourceLimitError(
        f"could not draw an antichain of weight {weight} in {_SAMPLE_ATTEMPTS} attempts"
    )


# --------------------------------------------------------------------------
# witness counting


def witness_census(x: SimplicialComplex, u_vertices, a: SimplicialComplex) -> int:
    """How many vertices outside U restrict-link to exactly the subcomplex a."""
    return sum(1 for _ in iter_witnesses(x, u_vertices, a))


# --------------------------------------------------------------------------
# experiment plumbing


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a resilience run depends on, so re-running reproduces it.

    A run searches for `bases` distinct r-ample medial samples on n ambient
    vertices (search seeds seed, seed + search_trials, ...), then performs
    trials_per_base removal trials on each.  Hypothesis-arm families have
    weight strictly below M'(k) + k; when include_control is set, each trial
    also draws a family at the bound (alternating with one past it) and
    records the outcome without asserting anything.
    """

    n: int
    r: int
    k: int = 1
    bases: int = 2
    trials_per_base: int = 100
    search_trials: int = 2000
    seed: int = 0
    include_control: bool = True
    removal_seed: Optional[int] = None

    def __post_init__(self) -> None:
        if self.n < 1 or self.r < 1:
            raise InvalidParametersError("n and r must be >= 1")
        if not (0 < self.k < self.r):
            raise InvalidParametersError("k must satisfy 0 < k < r")
        if self.bases < 1 or self.trials_per_base < 1 or self.search_trials < 1:
            raise InvalidParametersError("bases, trials and searches must be >= 1")

    def resolved_removal_seed(self) -> int:
        if self.removal_seed is not None:
            return self.removal_seed
        return self.seed + 1_000_003

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "k": self.k,
            "bases": self.bases,
            "trials_per_base": self.trials_per_base,
            "search_trials": self.search_trials,
            "seed": self.seed,
            "include_control": self.include_control,
            "removal_seed": self.resolved_removal_seed(),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ExperimentConfig":
        allowed = {
            "n",
            "r",
            "k",
            "bases",
            "trials_per_base",
            "search_trials",
            "seed",
            "include_control",
            "removal_seed",
        }
        extra = set(obj) - allowed
        if extra:
            raise InvalidParametersError(f"unknown config fields: {sorted(extra)}")
        if "n" not in obj or "r" not in obj:
            raise InvalidParametersError("config needs at least n and r")
        return cls(**obj)


@dataclass(frozen=True)
class ExperimentReport:
    """One record per trial plus aggregates, reproducible from the config.

    Wall-clock timings live apart from the canonical fields so that
    serializing with the default arguments is bit-stable across runs.
    """

    kind: str
    config: dict
    trials: Tuple[dict, ...]
    aggregates: dict
    timings: dict = field(default_factory=dict)

    def to_json_obj(self, include_timings: bool = False) -> dict:
        obj = {
            "kind": self.kind,
            "config": self.config,
            "trials": [dict(t) for t in self.trials],
            "aggregates": self.aggregates,
        }
        if include_timings:
            obj["timings"] = self.timings
        return obj

    def csv_text(self) -> str:
        """Flat comma-separated table, one row per trial.

        The header is the union of the trial record keys in first-seen
        order; cells missing from a record are left empty, and list-valued
        cells are rendered as semicolon-joined items.
        """
        header: List[str] = []
        for t in self.trials:
            for key in t:
                if key not in header:
                    header.append(key)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for t in self.trials:
            row = []
            for key in header:
                val = t.get(key, "")
                if isinstance(val, (list, tuple)):
                    val = ";".join(
                        "-".join(str(v) for v in item)
                        if isinstance(item, (list, tuple))
                        else str(item)
                        for item in val
                    )
                elif isinstance(val, bool):
                    val = "true" if val else "false"
                row.append(val)
            writer.writerow(row)
        return buf.getvalue()


# --------------------------------------------------------------------------
# resilience experiment


def resilience_experiment(cfg: ExperimentConfig, threads: int = 1) -> ExperimentReport:
    """Monte-Carlo check of the removal guarantee.

    Per base complex and trial: draw a removal family whose weight is
    strictly below M'(k) + k, remove it, verify the result (r - k)-ample.
    The guarantee is unconditional, so the hypothesis arm must pass on
    every trial; the aggregate records failures rather than raising so a
    report is always produced.  The control arm draws families at the bound
    (weight == M'(k) + k, the case the guarantee does not speak to) and one
    past it, alternating, and records pass rates per weight.

    `threads` only parallelizes the base searches; the report is identical
    for every thread count.
    """
    started = time.perf_counter()
    bound = _mprime(cfg.k) + cfg.k
    if bound - 1 < 1:
        raise InvalidParametersError("the hypothesis arm has no feasible weight")
    rng = SplitMix64(cfg.resolved_removal_seed())
    trials: List[dict] = []
    base_rows: List[dict] = []
    hyp_total = hyp_passed = 0
    control_stats: Dict[int, List[int]] = {}
    search_elapsed = []

    for j in range(cfg.bases):
        t0 = time.perf_counter()
        found = search_ample(
            cfg.n, cfg.r, cfg.search_trials, cfg.seed + j * cfg.search_trials,
            threads=threads,
        )
        search_elapsed.append(time.perf_counter() - t0)
        base_rows.append(
            {
                "base": j,
                "found": found.found,
                "winning_seed": found.winning_seed(),
                "trials_used": found.trials_used,
                "vertex_count": found.complex.vertex_count if found.found else 0,
            }
        )
        if not found.found:
            trials.append(
                {
                    "base": j,
                    "trial": None,
                    "arm": "search",
                    "outcome": "no_ample_complex_found",
                }
            )
            continue
        base_x = found.complex
        for t in range(cfg.trials_per_base):
            weight = 1 + rng.uniform_below(bound - 1)
            fam = sample_removal_family(base_x, weight, rng)
            y = remove_family(base_x, fam)
            verdict = is_r_ample(y, cfg.r - cfg.k)
            hyp_total += 1
            hyp_passed += 1 if verdict.is_ample else 0
            trials.append(
                {
                    "base": j,
                    "trial": t,
                    "arm": "hypothesis",
                    "weight": weight,
                    "family": fam.to_json_obj(),
                    "guarantee": resilience_guarantee(cfg.r, fam),
                    "ample": verdict.is_ample,
                }
            )
            if not cfg.include_control:
                continue
            cweight = bound + (t % 2)
            try:
                cfam = sample_removal_family(base_x, cweight, rng)
            except InvalidParametersError:
                trials.append(
                    {
                        "base": j,
                        "trial": t,
                        "arm": "control",
                        "weight": cweight,
                        "outcome": "infeasible",
                    }
                )
                continue
            cy = remove_family(base_x, cfam)
            cver = is_r_ample(cy, cfg.r - cfg.k)
            bucket = control_stats.setdefault(cweight, [0, 0])
            bucket[0] += 1
            bucket[1] += 1 if cver.is_ample else 0
            trials.append(
                {
                    "base": j,
                    "trial": t,
                    "arm": "control",
                    "weight": cweight,
                    "family": cfam.to_json_obj(),
                    "guarantee": resilience_guarantee(cfg.r, cfam),
                    "ample": cver.is_ample,
                }
            )

    aggregates = {
        "bases": base_rows,
        "hypothesis": {
            "bound": bound,
            "trials": hyp_total,
            "passed": hyp_passed,
            "failures": hyp_total - hyp_passed,
            "rate": (hyp_passed / hyp_total) if hyp_total else None,
        },
        "control": {
            str(w): {"trials": n_all, "passed": n_ok, "rate": n_ok / n_all}
            for w, (n_all, n_ok) in sorted(control_stats.items())
        },
    }
    return ExperimentReport(
        kind="resilience",
        config=cfg.to_json_obj(),
        trials=tuple(trials),
        aggregates=aggregates,
        timings={
            "total_s": time.perf_counter() - started,
            "search_s": search_elapsed,
        },
    )


# --------------------------------------------------------------------------
# partition experiment


def partition_experiment(
    x: SimplicialComplex, parts: int, seed: int, r: int, trials: int = 1
) -> ExperimentReport:
    """Random equipartitions of a verified r-ample complex.

    Each trial shuffles the vertices, splits them into `parts` groups of
    near-equal size, induces on each group and records the largest
    ampleness each part retains (capped at r).  Exploratory: no finite-scale
    statement predicts the outcome, the report only tabulates it.
    """
    started = time.perf_counter()
    if parts < 1 or parts > x.vertex_count:
        raise InvalidParametersError("parts must be between 1 and the vertex count")
    if trials < 1:
        raise InvalidParametersError("trials must be >= 1")
    verdict = is_r_ample(x, r)
    if not verdict.is_ample:
        raise InvalidParametersError(f"input complex is not {r}-ample")
    rows: List[dict] = []
    max_counts: Dict[int, int] = {}
    for t in range(trials):
        rng = SplitMix64(seed + t)
        verts = list(x.vertices())
        rng.shuffle(verts)
        size, rem = divmod(len(verts), parts)
        groups = []
        at = 0
        for i in range(parts):
            step = size + (1 if i < rem else 0)
            groups.append(verts[at : at + step])
            at += step
        part_ampleness = [max_ampleness(x.induced(g), r_cap=r) for g in groups]
        best = max(part_ampleness)
        max_counts[best] = max_counts.get(best, 0) + 1
        rows.append(
            {
                "trial": t,
                "part_sizes": [len(g) for g in groups],
                "part_ampleness": part_ampleness,
                "max_over_parts": best,
            }
        )
    aggregates = {
        "exploratory": True,
        "r": r,
        "parts": parts,
        "max_over_parts_distribution": {
            str(k): v for k, v in sorted(max_counts.items())
        },
    }
    return ExperimentReport(
        kind="partition",
        config={"parts": parts, "seed": seed, "r": r, "trials": trials},
        trials=tuple(rows),
        aggregates=aggregates,
        timings={"total_s": time.perf_counter() - started},
    )


# --------------------------------------------------------------------------
# medial statistics


def empirical_dimension_and_betti(
    n_list: Sequence[int], trials: int, seed: int
) -> ExperimentReport:
    """Dimension and Betti profile of medial samples across ambient sizes.

    For each n the harness draws `trials` samples, records the dimension
    and the GF(2) Betti numbers, and compares the dimension against the
    window [floor(beta) - 1, beta - 1 + 1] around beta = dimension
    threshold of n.  Exploratory: at small n the window says little, the
    report only states the observed fractions.
    """
    started = time.perf_counter()
    if trials < 1:
        raise InvalidParametersError("trials must be >= 1")
    if not n_list:
        raise InvalidParametersError("need at least one ambient size")
    for n in n_list:
        if n < 3:
            raise InvalidParametersError("ambient sizes must be >= 3")
    rows: List[dict] = []
    per_n: Dict[int, dict] = {}
    counter = 0
    for n in n_list:
        beta = dimension_threshold(n)
        lo = int(beta) - 1  # floor: beta > 0 for n >= 3
        hi = beta  # beta - 1 + epsilon with epsilon = 1
        inside = 0
        connected = 0
        b1_zero = 0
        dims: List[int] = []
        for _ in range(trials):
            s = medial_sample(n, seed + counter)
            counter += 1
            x = s.complex
            report = betti_numbers(x, field="gf2")
            b = report.betti
            in_window = lo <= x.dim <= hi
            is_connected = bool(b) and b[0] == 1
            one_cycle_free = len(b) < 2 or b[1] == 0
            inside += 1 if in_window else 0
            connected += 1 if is_connected else 0
            b1_zero += 1 if one_cycle_free else 0
            dims.append(x.dim)
            rows.append(
                {
                    "n": n,
                    "seed": s.seed,
                    "vertex_count": x.vertex_count,
                    "dim": x.dim,
                    "betti_gf2": list(b),
                    "in_window": in_window,
                    "connected": is_connected,
                    "b1_zero": one_cycle_free,
                }
            )
        per_n[n] = {
            "beta": beta,
            "window": [lo, hi],
            "window_fraction": inside / trials,
            "connected_rate": connected / trials,
            "b1_zero_rate": b1_zero / trials,
            "mean_dim": sum(dims) / trials,
        }
    aggregates = {
        "exploratory": True,
        "per_n": {str(n): per_n[n] for n in n_list},
    }
    return ExperimentReport(
        kind="medial-statistics",
        config={"n_list": list(n_list), "trials": trials, "seed": seed},
        trials=tuple(rows),
        aggregates=aggregates,
        timings={"total_s": time.perf_counter() - started},
    )


# --------------------------------------------------------------------------
# disc-filling stress run


@dataclass(frozen=True)
class DiscFillResult:
    """Outcome of the disc-filling stress run.

    `complex` is the final fixed complex every disc validates against;
    `loops` and `discs` are index-aligned.  When the ample search found
    nothing within its budget (the expected case, since the smallest
    possible 4-ample complex dwarfs any medial draw), the run fell back to
    the stage-two tower core and cone-saturated it until every fill went
    through; `saturation_added` counts the vertices that step appended.
    """

    complex: SimplicialComplex
    loops: Tuple[Tuple[int, ...], ...]
    discs: Tuple[FilledDisc, ...]
    r: int
    search_n: int
    search_trials: int
    search_found: bool
    base_vertex_count: int
    saturation_added: int

    def to_json_obj(self) -> dict:
        return {
            "r": self.r,
            "search": {
                "n": self.search_n,
                "trials": self.search_trials,
                "found": self.search_found,
            },
            "base_vertex_count": self.base_vertex_count,
            "final_vertex_count": self.complex.vertex_count,
            "saturation_added": self.saturation_added,
            "loop_count": len(self.loops),
            "loops": [list(l) for l in self.loops],
            "discs": [d.to_json_obj() for d in self.discs],
            "all_within_bounds": all(d.within_bounds() for d in self.discs),
        }


_SATURATION_CAP = 20_000


def disc_fill_experiment(
    loop_count: int = 50,
    r: int = 4,
    seed: int = 0,
    min_len: int = 4,
    max_len: int = 12,
    search_n: Optional[int] = None,
    search_trials: int = 8,
) -> DiscFillResult:
    """Fill a batch of random loops with bounded simplicial discs.

    First searches for an r-ample medial complex at the minimal admissible
    ambient size.  Such a search cannot realistically succeed for r >= 4
    (a medial draw keeps about half its ambient vertices, far below the
    vertex floor), so after the budgeted attempt the run falls back to the
    stage-two tower core: random loops of the requested lengths are grown
    out of it by coning paths onto existing edges, and every missing fill
    witness reported by the filler is supplied by coning the complex over
    the exact subcomplex the filler asked for.  Adding such cones never
    invalidates witnesses already used, so once every loop fills, the run
    re-fills all of them against the final fixed complex and returns those
    discs.
    """
    if loop_count < 1:
        raise InvalidParametersError("loop_count must be >= 1")
    if r < 4:
        raise InvalidParametersError("disc filling needs r >= 4")
    if not (4 <= min_len <= max_len):
        raise InvalidParametersError("need 4 <= min_len <= max_len")
    floor = min_vertices_for_ample(r)
    n = search_n if search_n is not None else floor
    sr = search_ample(n, r, search_trials, seed)
    if sr.found:
        x = sr.complex
        base_count = x.vertex_count
    else:
        x = rado_tower(2)[-1].complex
        base_count = x.vertex_count

    rng = SplitMix64(seed + search_trials + 1)
    base_edges = sorted(x.simplexes(1))
    loops: List[Tuple[int, ...]] = []
    for _ in range(loop_count):
        length = min_len + rng.uniform_below(max_len - min_len + 1)
        u, v = rng.choice(base_edges)
        cycle = [u, v]
        prev = v
        for _ in range(length - 3):
            x, w = one_vertex_extension(x, x.induced([prev]))
            cycle.append(w)
            prev = w
        closing = SimplicialComplex([(prev,), (u,)])
        x, w = one_vertex_extension(x, closing)
        cycle.append(w)
        loops.append(tuple(cycle))

    added = 0
    for cycle in loops:
        while True:
            try:
                fill_loop(x, list(cycle), r)
                break
            except NotAmpleEnoughError as err:
                if added >= _SATURATION_CAP:
                    raise ResourceLimitError(
                        f"saturation exceeded {_SATURATION_CAP} added vertices"
                    )
                x, _ = one_vertex_extension(x, err.target_link)
                added += 1

    discs = tuple(fill_loop(x, list(cycle), r) for cycle in loops)
    return DiscFillResult(
        complex=x,
        loops=tuple(loops),
        discs=discs,
        r=r,
        search_n=n,
        search_trials=search_trials,
        search_found=sr.found,
        base_vertex_count=base_count,
        saturation_added=x.vertex_count - base_count - sum(len(l) - 2 for l in loops),
    )
