"""Seeded verification campaigns producing JSON-lines reports."""

from __future__ import annotations

import hashlib
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import islice, permutations

from . import freealg, vieta
from .ncring import GenericityError, Matrix, random_tuple

ALL_CHECKS = ("theorem2", "theorem3", "oracle", "theorem1", "theorem4",
              "symmetry", "nonsymmetry", "ribbon", "membership")

PASS, FAIL, SKIP, ERROR = "pass", "fail", "skip", "error"

MAX_PERMUTATIONS = 120


@dataclass(frozen=True)
class CampaignConfig:
    n: int = 3
    dim: int = 2
    trials: int = 25
    seed: int = 1
    entry_bound: int = 10
    checks: tuple[str, ...] = ALL_CHECKS

    def __post_init__(self):
        if self.n < 1 or self.dim < 1:
            raise ValueError("n and dim must be positive")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.checks:
            raise ValueError("at least one check is required")
        unknown = set(self.checks) - set(ALL_CHECKS)
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(sorted(unknown))}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.entry_bound < 1:
            raise ValueError("entry bound must be positive")


def sub_seed(seed: int, trial: int) -> int:
    """Per-trial seed, reproducible from (master seed, trial index) alone."""
    digest = hashlib.blake2b(f"{seed}:{trial}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


class _Failure(Exception):
    pass


def _first_difference(a: vieta.CoefficientVector, b: vieta.CoefficientVector) -> str:
    for k, (p, q) in enumerate(zip(a.coeffs, b.coeffs), start=1):
        if p != q:
            return f"a_{k} differs ({a.method} vs {b.method})"
    return ""


class _Trial:
    """Lazily shared intermediate values for the checks of one trial."""

    def __init__(self, xs: list[Matrix], rng: random.Random):
        self.xs = xs
        self.rng = rng
        self._ys = self._t2 = self._oracle = None

    @property
    def ys(self):
        if self._ys is None:
            self._ys = vieta.conjugated_roots(self.xs)
        return self._ys

    @property
    def t2(self):
        if self._t2 is None:
            self._t2 = vieta.coeffs_theorem2(self.ys)
        return self._t2

    @property
    def oracle(self):
        if self._oracle is None:
            self._oracle = vieta.coeffs_linear_oracle(self.xs)
        return self._oracle

    def perms(self):
        return islice(permutations(range(len(self.xs))), MAX_PERMUTATIONS)


def _check_theorem2(t: _Trial):
    if not t.t2.same_as(t.oracle):
        raise _Failure(_first_difference(t.t2, t.oracle))
    for i, r in enumerate(vieta.residual_left(t.xs, t.t2), start=1):
        if not r.is_zero():
            raise _Failure(f"left residual nonzero at x_{i}")


def _check_theorem3(t: _Trial):
    t3 = vieta.coeffs_theorem3(t.xs)
    if not t3.same_as(t.t2):
        raise _Failure(_first_difference(t3, t.t2))


def _check_oracle(t: _Trial):
    for i, r in enumerate(vieta.residual_left(t.xs, t.oracle), start=1):
        if not r.is_zero():
            raise _Failure(f"oracle residual nonzero at x_{i}")


def _check_theorem1(t: _Trial):
    if not vieta.theorem1_check(t.xs, t.t2):
        raise _Failure("trace or determinant identity violated")


def _check_theorem4(t: _Trial):
    if not vieta.residual_right(t.ys[-1], t.t2).is_zero():
        raise _Failure("y_n does not solve the right equation")


def _check_symmetry(t: _Trial):
    tested = 0
    for perm in t.perms():
        try:
            other = vieta.coeffs_theorem2(vieta.conjugated_roots([t.xs[i] for i in perm]))
        except GenericityError:
            continue
        tested += 1
        if not other.same_as(t.t2):
            raise _Failure(f"ordering {[i + 1 for i in perm]}: {_first_difference(other, t.t2)}")
    if tested == 0:
        return SKIP


def _check_nonsymmetry(t: _Trial):
    if len(t.xs) < 2:
        return SKIP
    x1, x2 = t.xs[:2]
    if x1 * x2 == x2 * x1:
        return SKIP
    try:
        w = vieta.nonsymmetry_witness(t.xs)
    except GenericityError:
        return SKIP
    if not w.reversed_agrees:
        raise _Failure("y2*y1 changed under swap")
    if not w.product_differs:
        raise _Failure("y1*y2 unchanged under swap")


@lru_cache(maxsize=None)
def _ribbon_result(n: int) -> freealg.RibbonBase:
    d = min(n, 4)
    return freealg.ribbon_base_check(d, n)


def _check_ribbon(t: _Trial):
    res = _ribbon_result(len(t.xs))
    if not res:
        raise _Failure(f"ribbon base check: {res}")


def _check_membership(t: _Trial):
    """A random polynomial is in Symm iff it is numerically symmetric on this tuple."""
    n = len(t.xs)
    if t.xs[0].dim == 1:
        return SKIP  # commuting roots make every polynomial look symmetric
    rng = t.rng
    pool = [freealg.lambda_product(j, n)
            for d in range(1, 4) for j in freealg.lambda_compositions(d, n)]
    chosen = rng.sample(pool, min(3, len(pool)))
    p = freealg.random_combination(chosen, rng)
    if rng.random() < 0.5:
        word = tuple(rng.randint(1, n) for _ in range(rng.randint(2, 3)))
        p = p + freealg.FreePolynomial.word(word, n)
    member = bool(freealg.symm_membership(p))
    values = []
    for perm in t.perms():
        try:
            values.append(freealg.evaluate(p, vieta.conjugated_roots([t.xs[i] for i in perm])))
        except GenericityError:
            continue
    symmetric = all(v == values[0] for v in values)
    if member != symmetric:
        raise _Failure(f"membership={member} but numeric symmetry={symmetric} for {p}")


_CHECKS = {
    "theorem2": _check_theorem2,
    "theorem3": _check_theorem3,
    "oracle": _check_oracle,
    "theorem1": _check_theorem1,
    "theorem4": _check_theorem4,
    "symmetry": _check_symmetry,
    "nonsymmetry": _check_nonsymmetry,
    "ribbon": _check_ribbon,
    "membership": _check_membership,
}


def run_trial(config: CampaignConfig, index: int) -> dict:
    seed = sub_seed(config.seed, index)
    record = {"trial": index, "seed": seed, "n": config.n, "dim": config.dim,
              "attempts": None, "checks": {}, "first_divergence": None}
    timings = {}
    try:
        gt = random_tuple(config.n, config.dim, seed, config.entry_bound)
    except GenericityError as exc:
        record["error"] = str(exc)
        record["checks"] = {name: ERROR for name in config.checks}
        record["first_divergence"] = {"check": "genericity", "detail": str(exc)}
        return {"record": record, "timings": timings}
    record["attempts"] = gt.attempts
    trial = _Trial(list(gt), random.Random(seed ^ 0x5EED))
    for name in config.checks:
        start = time.perf_counter()
        try:
            outcome = _CHECKS[name](trial) or PASS
        except _Failure as exc:
            outcome = FAIL
            if record["first_divergence"] is None:
                record["first_divergence"] = {"check": name, "detail": str(exc)}
        except GenericityError as exc:
            outcome = ERROR
            if record["first_divergence"] is None:
                record["first_divergence"] = {"check": name, "detail": str(exc)}
        timings[name] = round(time.perf_counter() - start, 6)
        record["checks"][name] = outcome
    return {"record": record, "timings": timings}


@dataclass
class Report:
    config: CampaignConfig
    records: list[dict] = field(default_factory=list)
    timings: list[dict] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        counts = {name: {PASS: 0, FAIL: 0, SKIP: 0, ERROR: 0} for name in self.config.checks}
        first = None
        for rec in self.records:
            for name, outcome in rec["checks"].items():
                counts[name][outcome] += 1
            if first is None and rec["first_divergence"] is not None:
                first = {"trial": rec["trial"], "seed": rec["seed"], **rec["first_divergence"]}
        return {"trials": len(self.records), "counts": counts, "first_failure": first,
                "passed": self.passed}

    @property
    def passed(self) -> bool:
        return all(outcome in (PASS, SKIP)
                   for rec in self.records for outcome in rec["checks"].values())

    def to_jsonl(self, include_timings: bool = False) -> str:
        lines = []
        for rec, tim in zip(self.records, self.timings):
            if include_timings:
                rec = {**rec, "timings": tim}
            lines.append(json.dumps(rec, sort_keys=True))
        lines.append(json.dumps({"summary": self.summary}, sort_keys=True))
        return "\n".join(lines) + "\n"

    def human_summary(self) -> str:
        s = self.summary
        c = self.config
        out = [f"verify n={c.n} dim={c.dim} trials={c.trials} seed={c.seed} bound={c.entry_bound}"]
        for name, cnt in s["counts"].items():
            ran = cnt[PASS] + cnt[FAIL] + cnt[ERROR]
            extra = f", {cnt[SKIP]} skipped" if cnt[SKIP] else ""
            extra += f", {cnt[ERROR]} errors" if cnt[ERROR] else ""
            out.append(f"  {name:<12} {cnt[PASS]}/{ran} pass{extra}")
        if s["first_failure"]:
            f = s["first_failure"]
            out.append(f"first failure: trial {f['trial']} (seed {f['seed']}) "
                       f"{f['check']}: {f['detail']}")
        out.append("PASS" if s["passed"] else "FAIL")
        return "\n".join(out)


def _run_indexed(args):
    config, index = args
    return run_trial(config, index)


def run_campaign(config: CampaignConfig, jobs: int = 1) -> Report:
    """Run every trial; records come back in trial order whatever ``jobs`` is."""
    tasks = [(config, i) for i in range(config.trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_indexed, tasks))
    else:
        results = [_run_indexed(t) for t in tasks]
    report = Report(config)
    for r in results:
        report.records.append(r["record"])
        report.timings.append(r["timings"])
    return report
