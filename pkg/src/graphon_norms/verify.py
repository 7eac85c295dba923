"""Numerical verification of the norm inequalities on step kernels.

Three results are checked, each as a pair of inequalities:

* cut-norm lemma:       cut <= inf1 <= 4 cut
* operator-norm lemma:  inf1 <= op22 <= sqrt(2 inf1)
* proposition:          cut <= op22 <= sqrt(8 cut)

Only exact values certify a check.  A heuristic lower bound on the right-hand
side of ``<=`` proves nothing, so such reports carry ``non-conclusive``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import KernelValidationError
from .kernel import StepGraphon, StepKernel, kernel_difference, make_rng
from .norms import EXACT, NormConfig, NormReport, full_norm_report

INEQUALITY_TOL = 1e-9

PASS = "pass"
FAIL = "fail"
NON_CONCLUSIVE = "non-conclusive"

CUT_LEMMA = "cut_norm_lemma"
OPERATOR_LEMMA = "operator_norm_lemma"
PROPOSITION = "proposition"
RESULTS = (CUT_LEMMA, OPERATOR_LEMMA, PROPOSITION)

INEQUALITIES = (
    "cut <= inf1",
    "inf1 <= 4*cut",
    "inf1 <= op22",
    "op22 <= sqrt(2*inf1)",
    "cut <= op22",
    "op22 <= sqrt(8*cut)",
)


@dataclass(frozen=True)
class InequalityEntry:
    name: str
    left: float
    right: float
    slack: float
    passed: bool

    @classmethod
    def compare(cls, name: str, left: float, right: float, tol: float = INEQUALITY_TOL):
        slack = right - left
        return cls(name, left, right, slack, slack >= -tol)


@dataclass(frozen=True)
class LemmaReport:
    result: str
    digest: str
    entries: tuple[InequalityEntry, ...]
    status: str
    methods: dict
    intermediates: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return {
            "result": self.result,
            "digest": self.digest,
            "status": self.status,
            "methods": dict(self.methods),
            "entries": [vars(e).copy() for e in self.entries],
            "intermediates": dict(self.intermediates),
        }


def _status(entries, conclusive: bool) -> str:
    if not conclusive:
        return NON_CONCLUSIVE
    return PASS if all(e.passed for e in entries) else FAIL


def _norms(k: StepKernel, norms: NormReport | None, config: NormConfig | None) -> NormReport:
    return norms if norms is not None else full_norm_report(k, config)


def check_cut_norm_lemma(k: StepKernel, config=None, norms=None) -> LemmaReport:
    r = _norms(k, norms, config)
    entries = (
        InequalityEntry.compare(INEQUALITIES[0], r.cut_norm, r.op_inf1),
        InequalityEntry.compare(INEQUALITIES[1], r.op_inf1, 4.0 * r.cut_norm),
    )
    methods = {"cut": r.cut_method, "inf1": r.inf1_method}
    return LemmaReport(CUT_LEMMA, r.digest, entries, _status(entries, r.conclusive), methods)


def check_operator_norm_lemma(k: StepKernel, config=None, norms=None) -> LemmaReport:
    r = _norms(k, norms, config)
    entries = (
        InequalityEntry.compare(INEQUALITIES[2], r.op_inf1, r.op_22),
        InequalityEntry.compare(INEQUALITIES[3], r.op_22, math.sqrt(2.0 * r.op_inf1)),
    )
    methods = {"inf1": r.inf1_method, "op22": r.op22_method}
    status = _status(entries, r.inf1_method == EXACT)
    return LemmaReport(OPERATOR_LEMMA, r.digest, entries, status, methods)


def check_proposition(k: StepKernel, config=None, norms=None) -> LemmaReport:
    """Both sides of cut <= op22 <= sqrt(8 cut), plus the intermediate chain.

    The intermediates mirror the composed upper bound
    ``op22 <= sqrt(2 inf1) <= sqrt(2 * 4 cut)``.
    """
    r = _norms(k, norms, config)
    entries = (
        InequalityEntry.compare(INEQUALITIES[4], r.cut_norm, r.op_22),
        InequalityEntry.compare(INEQUALITIES[5], r.op_22, math.sqrt(8.0 * r.cut_norm)),
    )
    intermediates = {
        "sqrt(2*inf1)": math.sqrt(2.0 * r.op_inf1),
        "sqrt(2*4*cut)": math.sqrt(2.0 * (4.0 * r.cut_norm)),
    }
    methods = {"cut": r.cut_method, "op22": r.op22_method}
    status = _status(entries, r.cut_method == EXACT)
    return LemmaReport(PROPOSITION, r.digest, entries, status, methods, intermediates)


def check_all(k: StepKernel, config: NormConfig | None = None) -> tuple[NormReport, list[LemmaReport]]:
    """Norms computed once, then the three checks in chain order."""
    r = full_norm_report(k, config)
    return r, [
        check_cut_norm_lemma(k, norms=r),
        check_operator_norm_lemma(k, norms=r),
        check_proposition(k, norms=r),
    ]


# -- random instances ---------------------------------------------------------


def random_step_kernel(
    n: int,
    value_range: tuple[float, float] = (0.0, 1.0),
    weight_mode: str = "uniform",
    seed: int = 0,
) -> StepKernel:
    """Random symmetric step kernel; a :class:`StepGraphon` when the range is inside [0, 1].

    The upper triangle (diagonal included) is drawn row by row and mirrored.
    ``weight_mode="dirichlet"`` draws flat-Dirichlet block weights.
    """
    lo, hi = (float(x) for x in value_range)
    if n < 1:
        raise KernelValidationError("n must be at least 1")
    if not (-1.0 <= lo <= hi <= 1.0):
        raise KernelValidationError(f"invalid value range ({lo}, {hi})")
    if weight_mode not in ("uniform", "dirichlet"):
        raise KernelValidationError(f"unknown weight mode {weight_mode!r}")
    rng = make_rng(seed)
    iu, ju = np.triu_indices(n)
    values = np.zeros((n, n))
    values[iu, ju] = rng.uniform(lo, hi, iu.size) if hi > lo else lo
    values[ju, iu] = values[iu, ju]
    if weight_mode == "uniform":
        weights = np.full(n, 1.0 / n)
    else:
        raw = rng.exponential(1.0, n) + np.finfo(float).tiny
        weights = raw / raw.sum()
    if lo >= 0.0 and hi <= 1.0:
        return StepGraphon(weights, values)
    peak = float(np.max(np.abs(values)))
    return StepKernel(weights, values, peak if peak > 0 else 1.0)


FAMILIES = ("graphon", "kernel", "difference")
WEIGHT_MODES = ("uniform", "dirichlet", "mixed")


@dataclass(frozen=True)
class FamilySpec:
    """Random family: ``count`` instances with block counts in ``[n_min, n_max]``.

    ``graphon`` draws values in [0, 1], ``kernel`` in [-1, 1], and
    ``difference`` takes the difference of two independent random graphons.
    """

    count: int
    n_max: int = 10
    n_min: int = 1
    seed: int = 0
    family: str = "graphon"
    weight_mode: str = "mixed"

    def __post_init__(self):
        if self.count < 0:
            raise KernelValidationError("count must be nonnegative")
        if self.family not in FAMILIES:
            raise KernelValidationError(f"unknown family {self.family!r}")
        if self.weight_mode not in WEIGHT_MODES:
            raise KernelValidationError(f"unknown weight mode {self.weight_mode!r}")
        if self.count and not (1 <= self.n_min <= self.n_max):
            raise KernelValidationError("need 1 <= n_min <= n_max")

    def instances(self):
        """Yield ``(instance_seed, kernel)`` deterministically from ``seed``."""
        rng = make_rng(self.seed)
        for _ in range(self.count):
            inst_seed = int(rng.integers(0, 2**63))
            yield inst_seed, self._build(inst_seed)

    def _build(self, inst_seed: int) -> StepKernel:
        rng = make_rng(inst_seed)

        def one(value_range):
            n = int(rng.integers(self.n_min, self.n_max + 1))
            mode = self.weight_mode
            if mode == "mixed":
                mode = ("uniform", "dirichlet")[int(rng.integers(0, 2))]
            return random_step_kernel(n, value_range, mode, int(rng.integers(0, 2**63)))

        if self.family == "graphon":
            return one((0.0, 1.0))
        if self.family == "kernel":
            return one((-1.0, 1.0))
        return kernel_difference(one((0.0, 1.0)), one((0.0, 1.0)))


@dataclass
class InstanceResult:
    index: int
    seed: int
    kernel: StepKernel
    norms: NormReport
    reports: list[LemmaReport]

    @property
    def status(self) -> str:
        statuses = {r.status for r in self.reports}
        if FAIL in statuses:
            return FAIL
        return NON_CONCLUSIVE if NON_CONCLUSIVE in statuses else PASS

    def slacks(self) -> dict[str, float]:
        return {e.name: e.slack for r in self.reports for e in r.entries}


@dataclass
class FamilyReport:
    generator: dict
    instances: list[InstanceResult]

    def summary(self) -> dict:
        """Aggregate statistics, recomputed from the per-instance entries."""
        per_result = {name: {PASS: 0, FAIL: 0, NON_CONCLUSIVE: 0} for name in RESULTS}
        worst_slack: dict[str, dict] = {}
        ratios = {"inf1/cut": None, "op22/sqrt(cut)": None}
        for inst in self.instances:
            for rep in inst.reports:
                per_result[rep.result][rep.status] += 1
                if rep.status == NON_CONCLUSIVE:
                    continue
                for e in rep.entries:
                    cur = worst_slack.get(e.name)
                    if cur is None or e.slack < cur["slack"]:
                        worst_slack[e.name] = {"slack": e.slack, "instance": inst.index}
            r = inst.norms
            if r.conclusive and r.cut_norm > 0:
                for key, value in (
                    ("inf1/cut", r.op_inf1 / r.cut_norm),
                    ("op22/sqrt(cut)", r.op_22 / math.sqrt(r.cut_norm)),
                ):
                    if ratios[key] is None or value > ratios[key]["ratio"]:
                        ratios[key] = {"ratio": value, "instance": inst.index}
        statuses = [inst.status for inst in self.instances]
        return {
            "count": len(self.instances),
            "passed": statuses.count(PASS),
            "failed": statuses.count(FAIL),
            "non_conclusive": statuses.count(NON_CONCLUSIVE),
            "per_result": per_result,
            "worst_slack": worst_slack,
            "worst_ratio": ratios,
        }

    @property
    def failures(self) -> list[InstanceResult]:
        return [inst for inst in self.instances if inst.status == FAIL]

    @property
    def all_passed(self) -> bool:
        return not self.failures


def verify_kernel(k: StepKernel, config: NormConfig | None = None, index: int = 0, seed: int = -1):
    norms, reports = check_all(k, config)
    return InstanceResult(index, seed, k, norms, reports)


def verify_family(spec: FamilySpec, config: NormConfig | None = None, threads: int = 1) -> FamilyReport:
    """Run the three checks on every instance of a random family."""
    jobs = list(enumerate(spec.instances()))

    def run(job):
        index, (seed, k) = job
        return verify_kernel(k, config, index, seed)

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(j) for j in jobs]
    generator = {
        "family": spec.family,
        "n_min": spec.n_min,
        "n_max": spec.n_max,
        "count": spec.count,
        "seed": spec.seed,
        "weight_mode": spec.weight_mode,
    }
    return FamilyReport(generator, results)
