"""
coxfix
======
Verification suites: configuration, report and the named suite runners.

Each suite adds PASS/FAIL rows to a Report. A theorem violation is a FAIL row;
configuration and resource problems raise CoxfixError and never produce a
partial report.
"""

import logging
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, model_validator

from catalog import catalog, resolve_group
from coxeter import (
    DEFAULT_MAX_NODES,
    CoxeterSystem,
    Element,
    Verdict,
    check_deletion,
    check_exchange,
    check_strong_exchange,
    format_word,
)
from errors import InputError, InternalError, ResourceError
from folding import (
    AutomorphismGroup,
    check_length_bookkeeping,
    fold,
    matrices_isomorphic,
    verify_bruhat_iso,
    verify_chain_transport,
    verify_crisp,
    verify_fixed_subgroup,
    verify_homomorphism,
    verify_w0_theorem,
    verify_weak_iso,
)
from orders import (
    Interval,
    Poset,
    bruhat_leq,
    bruhat_leq_subword,
    check_deodhar_property,
    has_diamond_property,
    is_eulerian,
    label,
    mobius_matrix,
)
from topology import (
    DEFAULT_MAX_FACES,
    betti_z2,
    interval_complex,
    is_cohen_macaulay_z2,
    is_pseudomanifold,
    smith_fixed_check,
)
from twisted import (
    GraphAutomorphism,
    TwistedSet,
    inversion_twist,
    twisted_bruhat_poset,
    twisted_set,
    verify_covering_cases,
    verify_fixed_points_match,
    verify_gorenstein_theorem,
    verify_halving_lemma,
    verify_identity_words,
    verify_length_lemma,
    verify_parity,
    verify_rank_theorem,
    verify_rotation_lemma,
    verify_welldefined_ltheta,
)

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["suite", "group", "params", "check_id", "status", "witness"]
TWISTED_SUITES = {"twisted-gorenstein", "rank-formula", "twisted-lemmas", "infinite-smoke"}
EXHAUSTIVE_MAX_ORDER = 48
EXTENDED_GROUPS = ("E6", "E7", "E8", "H4")

# Folds with a known folded type, keyed by group and generating perms.
KNOWN_FOLDS = {
    ("A3", ("3,2,1",)): "B2",
    ("A5", ("5,4,3,2,1",)): "B3",
    ("D4", ("1,2,4,3",)): "B3",
    ("D5", ("1,2,3,5,4",)): "B4",
    ("D4", ("1,2,4,3", "3,2,1,4")): "I2(6)",
    ("E6", ("5,4,3,2,1,6",)): "F4",
}


class SuiteConfig(BaseModel):
    suite: str
    group: str
    perms: List[str] = Field(default_factory=list, description="generators of G, as perm=... specs")
    theta: str = Field("id", description="'id', 'perm' (first --perm) or a perm spec")
    L: int = Field(8, gt=0, description="ball radius")
    max_interval: int = Field(5, gt=0)
    max_faces: int = Field(DEFAULT_MAX_FACES, gt=0)
    max_nodes: int = Field(DEFAULT_MAX_NODES, gt=0)
    extended: bool = False
    seed: int = 0
    samples: int = Field(200, gt=0, description="sampled intervals for large groups")
    pairs: int = Field(10_000, gt=0, description="random Bruhat pairs for the oracle suite")
    output: Optional[str] = None

    @model_validator(mode="after")
    def _radius_covers_intervals(self) -> "SuiteConfig":
        if self.suite in TWISTED_SUITES and self.L < self.max_interval:
            raise ValueError(f"radius L={self.L} must be >= max_interval={self.max_interval}")
        return self

    def echo(self) -> Dict[str, Any]:
        out = self.model_dump(exclude={"output"})
        out["perms"] = ";".join(self.perms)
        return out


def describe(obj: Any) -> str:
    """Witness text: group elements as words, containers recursively."""
    if obj is None:
        return ""
    if isinstance(obj, Element):
        return format_word(obj.word)
    if isinstance(obj, Interval):
        return f"[{label(obj.bottom)},{label(obj.top)}]"
    if isinstance(obj, (list, tuple)):
        return "(" + " ".join(describe(x) for x in obj) + ")"
    if isinstance(obj, dict):
        return "{" + " ".join(f"{describe(k)}:{describe(v)}" for k, v in obj.items()) + "}"
    return str(obj)


class Report:
    """Rows of one suite run plus the configuration echo."""

    def __init__(self, config: SuiteConfig):
        self.config = config
        self.suite = config.suite
        self.rows: List[Dict[str, str]] = []
        self.started = time.perf_counter()
        self.elapsed: Optional[float] = None

    def add(self, group: str, params: str, check_id: str, verdict: Verdict | bool, witness: Any = None) -> None:
        ok = bool(verdict)
        if witness is None and isinstance(verdict, Verdict):
            witness = verdict.witness
        self.rows.append({
            "suite": self.suite,
            "group": group,
            "params": params,
            "check_id": check_id,
            "status": "PASS" if ok else "FAIL",
            "witness": describe(witness),
        })
        if not ok:
            logger.warning("FAIL %s %s %s %s", group, params, check_id, describe(witness))

    def check(self, group: str, params: str, check_id: str, fn: Callable[[], Verdict | bool]) -> bool:
        """Run a verification, turning InternalError into a FAIL row."""
        try:
            verdict = fn()
        except InternalError as exc:
            verdict = Verdict(False, f"internal: {exc}")
        self.add(group, params, check_id, verdict)
        return bool(verdict)

    def finish(self) -> "Report":
        self.elapsed = time.perf_counter() - self.started
        return self

    @property
    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=REPORT_COLUMNS)

    @property
    def passed(self) -> bool:
        return all(row["status"] == "PASS" for row in self.rows)

    @property
    def counts(self) -> Dict[str, int]:
        counts = self.frame["status"].value_counts()
        return {"PASS": int(counts.get("PASS", 0)), "FAIL": int(counts.get("FAIL", 0))}

    def to_tsv(self) -> str:
        echo = "".join(f"# {k}={v}\n" for k, v in self.config.echo().items())
        return echo + self.frame.to_csv(sep="\t", index=False)

    def write(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_tsv())

    def lines(self) -> List[str]:
        theta = self.config.theta
        out = []
        for row in self.rows:
            line = f"{row['status']} {row['suite']} {row['group']} {theta} {row['params']} {row['check_id']}"
            if row["witness"]:
                line += f" [{row['witness']}]"
            out.append(line)
        return out


# ----- suite context -----


@dataclass
class SuiteContext:
    config: SuiteConfig
    name: str
    system: CoxeterSystem
    group: AutomorphismGroup
    theta: GraphAutomorphism
    finite: bool
    rng: np.random.Generator

    @classmethod
    def from_config(cls, config: SuiteConfig) -> "SuiteContext":
        name, matrix = resolve_group(config.group)
        system = CoxeterSystem(matrix, max_nodes=config.max_nodes, name=name)
        group = AutomorphismGroup.from_specs(config.perms, matrix)
        theta = _resolve_theta(config, group, matrix)
        return cls(config, name, system, group, theta, system.is_finite(), np.random.default_rng(config.seed))

    @property
    def radius(self) -> Optional[int]:
        """None (all of W) for finite groups, else the configured ball radius."""
        return None if self.finite else self.config.L

    def universe(self) -> List[Element]:
        return self.system.enumerate_ball(self.radius)

    def require_finite(self, what: str) -> None:
        if not self.finite:
            raise ResourceError(f"{what} needs a finite group, {self.name} is infinite")
        if self.name in EXTENDED_GROUPS and not self.config.extended:
            raise ResourceError(f"{what} on {self.name} runs only with --extended")


def _resolve_theta(config: SuiteConfig, group: AutomorphismGroup, matrix) -> GraphAutomorphism:
    if config.theta == "id":
        theta = GraphAutomorphism.identity(matrix.rank)
    elif config.theta == "perm":
        if not config.perms:
            raise InputError("--theta perm needs a --perm")
        theta = group.generators[0]
    else:
        theta = GraphAutomorphism.parse(config.theta, matrix.rank).validate(matrix)
    if not theta.is_involution():
        raise InputError(f"theta={theta} is not an involution")
    return theta


SuiteFn = Callable[[SuiteContext, Report], None]
SUITES: Dict[str, SuiteFn] = {}
ALIASES = {"bw-spheres": "bruhat-sphere"}


def suite(name: str) -> Callable[[SuiteFn], SuiteFn]:
    def register(fn: SuiteFn) -> SuiteFn:
        SUITES[name] = fn
        return fn
    return register


def suite_names() -> List[str]:
    return sorted(SUITES) + sorted(ALIASES)


def run_suite(name: str, config: SuiteConfig) -> Report:
    key = ALIASES.get(name, name)
    if key not in SUITES:
        raise InputError(f"unknown suite {name!r}; choose from {', '.join(suite_names())}")
    ctx = SuiteContext.from_config(config)
    report = Report(config)
    logger.info("suite %s on %s", key, ctx.name)
    SUITES[key](ctx, report)
    return report.finish()


# ----- helpers -----


def bruhat_poset(ctx: SuiteContext) -> Poset:
    elements = ctx.universe()
    return Poset(elements, leq=lambda a, b: bruhat_leq(ctx.system, a, b),
                 rank={x: x.length for x in elements}, graded_by_rank=True)


def bruhat_intervals(ctx: SuiteContext, poset: Poset) -> List[Interval]:
    """Every interval for small groups, else `samples` random ones of length <= max_interval."""
    if ctx.finite and len(poset) <= EXHAUSTIVE_MAX_ORDER:
        return list(poset.intervals())
    cap = ctx.config.max_interval
    pairs = [
        (i, j) for i, j in zip(*np.nonzero(poset.relation))
        if 0 < poset.rank[poset.elements[j]] - poset.rank[poset.elements[i]] <= cap
    ]
    pick = ctx.rng.choice(len(pairs), size=min(ctx.config.samples, len(pairs)), replace=False)
    return [poset.interval(poset.elements[pairs[k][0]], poset.elements[pairs[k][1]]) for k in sorted(pick)]


def _sweep(intervals: Iterable[Interval], test: Callable[[Interval], Any]) -> Verdict:
    """First interval whose test returns a truthy failure, else PASS."""
    count = 0
    for interval in intervals:
        count += 1
        failure = test(interval)
        if failure:
            return Verdict(False, (interval, failure))
    return Verdict(True, f"{count} intervals")


def _twisted_context(ctx: SuiteContext, radius: Optional[int] = None) -> TwistedSet:
    return twisted_set(ctx.system, ctx.theta, radius if radius is not None else ctx.radius)


def _twisted_intervals(ctx: SuiteContext, ts: TwistedSet, poset: Poset, top_length: Optional[int] = None) -> List[Interval]:
    """Intervals of Br(I(theta)) with twisted rank difference <= max_interval."""
    rank = {w: ts.rank(w) for w in poset.elements}
    out = []
    for interval in poset.intervals(max_length=ctx.config.max_interval, rank=rank):
        if top_length is None or interval.top.length <= top_length:
            out.append(interval)
    return out


# ----- suites -----


@suite("core-properties")
def core_properties(ctx: SuiteContext, report: Report) -> None:
    """Deletion, Exchange, Strong Exchange and support invariance."""
    system, g = ctx.system, ctx.name
    radius = min(ctx.config.L, 6)
    ball = system.enumerate_ball(radius)

    def deletion() -> Verdict:
        for _ in range(ctx.config.samples):
            n = int(ctx.rng.integers(2, radius + 3))
            word = tuple(int(a) for a in ctx.rng.integers(0, system.rank, size=n))
            check_deletion(system, word)
        return Verdict(True, f"{ctx.config.samples} words")

    def exchange() -> Verdict:
        for x in ball:
            for s in sorted(system.descents(x, "right")):
                check_exchange(system, x, system.generators[s])
        return Verdict(True, f"{len(ball)} elements")

    def strong_exchange() -> Verdict:
        refl = sorted(system.reflections(radius))
        for x in ball[: ctx.config.samples]:
            for t in refl:
                check_strong_exchange(system, x, t)
        return Verdict(True, f"{len(refl)} reflections")

    def support() -> Verdict:
        for x in ball:
            if x.length > 6:
                continue
            letters = {frozenset(word) for word in system.reduced_expressions(x)}
            if letters != {system.support(x)}:
                return Verdict(False, x)
        return Verdict(True)

    params = f"L={radius}"
    report.check(g, params, "deletion", deletion)
    report.check(g, params, "exchange", exchange)
    report.check(g, params, "strong-exchange", strong_exchange)
    report.check(g, params, "support", support)


@suite("bruhat-sphere")
def bruhat_sphere(ctx: SuiteContext, report: Report) -> None:
    """Open Bruhat intervals are Z2-homology spheres of top dimension."""
    poset = bruhat_poset(ctx)
    intervals = bruhat_intervals(ctx, poset)
    max_faces = ctx.config.max_faces
    mu = mobius_matrix(poset)

    def sphere(iv: Interval):
        u, v = iv.bottom, iv.top
        if u is v:
            return None
        complex_ = interval_complex(iv, u, v, max_faces)
        profile = betti_z2(complex_)
        expected = v.length - u.length - 2
        if profile.sphere_dim() != expected:
            return f"betti {profile} expected S^{expected}"
        if not complex_.is_empty():
            ok, witness = is_pseudomanifold(complex_)
            if not ok:
                return ("pseudomanifold", witness)
        if complex_.reduced_euler_characteristic() != mu[poset.index[u], poset.index[v]]:
            return ("hall", complex_.reduced_euler_characteristic())
        if not complex_.boundary_squares_to_zero():
            return "boundary"
        return None

    params = f"intervals={len(intervals)}"
    report.check(ctx.name, params, "sphere+pseudomanifold+hall", lambda: _sweep(intervals, sphere))


@suite("deodhar-oracle")
def deodhar_oracle(ctx: SuiteContext, report: Report) -> None:
    """Descent-lifting Bruhat comparison against the subword oracle."""
    ctx.require_finite("deodhar-oracle")
    system = ctx.system
    elements = system.all_elements()

    def compare() -> Verdict:
        if len(elements) <= EXHAUSTIVE_MAX_ORDER:
            pairs = [(u, v) for u in elements for v in elements]
        else:
            idx = ctx.rng.integers(0, len(elements), size=(ctx.config.pairs, 2))
            pairs = [(elements[i], elements[j]) for i, j in idx]
        for u, v in pairs:
            if bruhat_leq(system, u, v) != bruhat_leq_subword(system, u, v):
                return Verdict(False, (u, v))
        return Verdict(True, f"{len(pairs)} pairs")

    def property_two() -> Verdict:
        sample = elements if len(elements) <= EXHAUSTIVE_MAX_ORDER else \
            [elements[i] for i in sorted(ctx.rng.choice(len(elements), size=EXHAUSTIVE_MAX_ORDER, replace=False))]
        witness = check_deodhar_property(system, sample)
        return Verdict(witness is None, witness)

    def partial_order() -> Verdict:
        poset = bruhat_poset(ctx)
        failure = poset.spot_check(ctx.config.samples, ctx.config.seed)
        return Verdict(failure is None, failure)

    report.check(ctx.name, f"seed={ctx.config.seed}", "lifting=subword", compare)
    report.check(ctx.name, f"seed={ctx.config.seed}", "deodhar-property", property_two)
    report.check(ctx.name, f"samples={ctx.config.samples}", "partial-order", partial_order)


@suite("eulerian")
def eulerian(ctx: SuiteContext, report: Report) -> None:
    """Bruhat intervals are Eulerian, thin and Cohen-Macaulay over Z2."""
    poset = bruhat_poset(ctx)
    intervals = bruhat_intervals(ctx, poset)
    params = f"intervals={len(intervals)}"
    report.check(ctx.name, params, "eulerian", lambda: _sweep(intervals, lambda iv: not is_eulerian(iv)))
    report.check(ctx.name, params, "diamond", lambda: _sweep(intervals, lambda iv: not has_diamond_property(iv)))
    small = [iv for iv in intervals if iv.length <= ctx.config.max_interval]
    report.check(ctx.name, f"intervals={len(small)}", "cohen-macaulay",
                 lambda: _sweep(small, lambda iv: not is_cohen_macaulay_z2(iv, ctx.config.max_faces)))


@suite("smith")
def smith(ctx: SuiteContext, report: Report) -> None:
    """Fixed points of inv o theta on [e, w] form a Z2-homology sphere."""
    system = ctx.system
    ts = _twisted_context(ctx)
    poset = bruhat_poset(ctx)
    twisted_poset = twisted_bruhat_poset(system, ts)
    nu = inversion_twist(system, ctx.theta)
    for w in ts.sorted_involutions():
        if w == system.identity or w not in poset:
            continue
        ambient = poset.interval(system.identity, w)
        n = w.length - 2
        params = f"[e,{label(w)}]"

        def check() -> Verdict:
            ok, r = smith_fixed_check(ambient, nu, ctx.config.max_faces)
            return Verdict(ok, f"r={r} n={n}")

        report.check(ctx.name, params, "smith", check)
        twisted_interval = twisted_poset.interval(system.identity, w)
        report.check(ctx.name, params, "fixed=I(theta)",
                     lambda: verify_fixed_points_match(system, ctx.theta, ambient, twisted_interval))


@suite("twisted-gorenstein")
def twisted_gorenstein(ctx: SuiteContext, report: Report, top_length: Optional[int] = None) -> None:
    """Intervals of Br(I(theta)) are graded, Eulerian and Gorenstein* over Z2."""
    ts = _twisted_context(ctx)
    poset = twisted_bruhat_poset(ctx.system, ts)
    intervals = _twisted_intervals(ctx, ts, poset, top_length)
    report.check(ctx.name, f"intervals={len(intervals)}", "gorenstein*",
                 lambda: verify_gorenstein_theorem(ctx.system, ctx.theta, intervals, ctx.config.max_faces))


@suite("rank-formula")
def rank_formula(ctx: SuiteContext, report: Report, top_length: Optional[int] = None) -> None:
    """rho = (l + l^theta)/2 on every interval, with the covering case analysis."""
    system = ctx.system
    ts = _twisted_context(ctx)
    poset = twisted_bruhat_poset(system, ts)
    intervals = _twisted_intervals(ctx, ts, poset, top_length)

    def ranks() -> Verdict:
        for iv in intervals:
            verdict = verify_rank_theorem(system, ctx.theta, iv, ts)
            if not verdict:
                return Verdict(False, (iv, verdict.witness))
        return Verdict(True, f"{len(intervals)} intervals")

    report.check(ctx.name, f"intervals={len(intervals)}", "rank=(l+ltheta)/2", ranks)
    report.check(ctx.name, f"elements={len(poset)}", "covering-cases",
                 lambda: verify_covering_cases(system, ctx.theta, poset, ts))
    report.check(ctx.name, f"elements={len(poset)}", "parity", lambda: verify_parity(ts))


@suite("twisted-lemmas")
def twisted_lemmas(ctx: SuiteContext, report: Report) -> None:
    """Rotation, halving and length lemmas, well-definedness of l^theta."""
    system, theta = ctx.system, ctx.theta
    L = ctx.config.L
    ts = _twisted_context(ctx, radius=L)
    params = f"L={L}"
    report.check(ctx.name, params, "rotation", lambda: verify_rotation_lemma(system, theta, L, ts))
    report.check(ctx.name, params, "halving", lambda: verify_halving_lemma(system, theta, L, ts))
    report.check(ctx.name, params, "length", lambda: verify_length_lemma(system, theta, L, ts))
    report.check(ctx.name, params, "identity-words", lambda: verify_identity_words(system, theta, ts))

    def welldefined() -> Verdict:
        for w in ts.sorted_involutions():
            verdict = verify_welldefined_ltheta(system, theta, w, ts)
            if not verdict:
                return Verdict(False, (w, verdict.witness))
        return Verdict(True, f"{len(ts.involutions)} elements")

    report.check(ctx.name, params, "ltheta-welldefined", welldefined)


@suite("ltheta-dyer")
def ltheta_dyer(ctx: SuiteContext, report: Report) -> None:
    """l^id equals the absolute length l' elementwise."""
    ctx.require_finite("ltheta-dyer")
    system = ctx.system
    identity = GraphAutomorphism.identity(system.rank)
    ts = twisted_set(system, identity, None)
    elements = system.all_elements()

    def compare() -> Verdict:
        for w in elements:
            if ts.ltheta(w) != system.absolute_length(w, elements):
                return Verdict(False, (w, ts.ltheta(w)))
        return Verdict(True, f"{len(elements)} elements")

    report.check(ctx.name, "theta=id", "ltheta=abs-length", compare)


def _fold_cases(ctx: SuiteContext) -> List[tuple]:
    if ctx.config.perms:
        key = (ctx.name, tuple(p.replace("perm=", "") for p in ctx.config.perms))
        return [(ctx.group, KNOWN_FOLDS.get(key))]
    cases = []
    for (name, perms), expected in KNOWN_FOLDS.items():
        if name == ctx.name:
            cases.append((AutomorphismGroup.from_specs(list(perms), ctx.system.matrix), expected))
    if not cases:
        raise InputError(f"no --perm given and no known fold for {ctx.name}")
    return cases


@suite("fold-matrix")
def fold_matrix(ctx: SuiteContext, report: Report) -> None:
    """Folded Coxeter matrices, measured in W, against the known folded types."""
    ctx.require_finite("fold-matrix")
    for G, expected in _fold_cases(ctx):
        folded = fold(ctx.system, G)
        params = f"G={G}"
        if expected is None:
            report.add(ctx.name, params, "tilde-matrix", True, folded.tilde_matrix.m)
            continue
        report.add(ctx.name, params, f"tilde={expected}",
                   matrices_isomorphic(folded.tilde_matrix, catalog(expected)), folded.tilde_matrix.m)


@suite("fold-weak")
def fold_weak(ctx: SuiteContext, report: Report) -> None:
    """phi is an isomorphism of weak orders onto W^G."""
    ctx.require_finite("fold-weak")
    for G, _ in _fold_cases(ctx):
        folded = fold(ctx.system, G)
        params = f"G={G}"
        report.check(ctx.name, params, "fixed-subgroup", lambda: verify_fixed_subgroup(ctx.system, G, folded))
        report.check(ctx.name, params, "homomorphism", lambda: verify_homomorphism(folded))
        report.check(ctx.name, params, "crisp", lambda: verify_crisp(folded))
        report.check(ctx.name, params, "weak-iso", lambda: verify_weak_iso(ctx.system, G, folded))
        report.check(ctx.name, params, "chain-transport", lambda: verify_chain_transport(folded))


@suite("fold-bruhat")
def fold_bruhat(ctx: SuiteContext, report: Report) -> None:
    """phi is an isomorphism of Bruhat orders onto W^G."""
    ctx.require_finite("fold-bruhat")
    for G, _ in _fold_cases(ctx):
        folded = fold(ctx.system, G)
        params = f"G={G}"
        report.check(ctx.name, params, "fixed-subgroup", lambda: verify_fixed_subgroup(ctx.system, G, folded))
        report.check(ctx.name, params, "bruhat-iso", lambda: verify_bruhat_iso(ctx.system, G, folded))
        report.check(ctx.name, params, "length-bookkeeping", lambda: check_length_bookkeeping(ctx.system, folded))


@suite("w0-theorem")
def w0_theorem(ctx: SuiteContext, report: Report) -> None:
    """Centraliser of w0 is Br(W^-) for W^- with the odd exponents of W."""
    ctx.require_finite("w0-theorem")
    verdict = verify_w0_theorem(ctx.system)
    if verdict:
        result = verdict.witness
        params = f"exponents={','.join(map(str, result.exponents))}"
        report.add(ctx.name, params, f"W-={result.minus_type}", True, f"w0-conjugation={result.conjugation}")
    else:
        report.add(ctx.name, "", "W-", verdict)


@suite("infinite-smoke")
def infinite_smoke(ctx: SuiteContext, report: Report) -> None:
    """Rank formula and Gorenstein* on a ball of an infinite group."""
    top = max(ctx.config.L - 2, 0)
    twisted_gorenstein(ctx, report, top_length=top)
    rank_formula(ctx, report, top_length=top)
