"""Suite runner, on-disk cache and JSON reports.

    python3 -m wittkit --suite theorem1 --p 3 --n 2 --max-weight 3 --out report.json
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from .zmod_linalg import is_prime

REPORT_SCHEMA = "wittkit-report/v1"
CACHE_SCHEMA = "c1"
SUITES = ("witt-axioms", "hkr", "theorem1", "theorem2-centers", "lemma-identities", "sv-identity",
          "illusie", "cartier-tau", "delta-exponent")


class ConfigInvalid(ValueError):
    pass


def default_cache_dir() -> str:
    return os.environ.get("WITTKIT_CACHE") or str(Path.home() / ".cache" / "wittkit")


@dataclass(frozen=True)
class RunConfig:
    p: int = 3
    n: int = 2
    max_degree: int | None = None   # per-suite default when None
    max_weight: int = 3
    suite: str = "all"
    cache_dir: str | None = None
    out: str | None = None
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if not is_prime(self.p) or self.p < 3:
            raise ConfigInvalid(f"p = {self.p} must be an odd prime")
        if self.n < 1:
            raise ConfigInvalid("n must be at least 1")
        if self.max_weight < 1 or (self.max_degree is not None and self.max_degree < 1):
            raise ConfigInvalid("bounds must be positive")
        if self.jobs < 1:
            raise ConfigInvalid("jobs must be positive")
        if self.suite != "all" and self.suite not in SUITES:
            raise ConfigInvalid(f"unknown suite {self.suite!r}")

    def echo(self) -> dict:
        # paths are left out so reports do not depend on where they were written
        d = asdict(self)
        d.pop("cache_dir")
        d.pop("out")
        return d


# -- cache ----------------------------------------------------------------------


class FileCache:
    """Key/bytes store; each entry is a sha256 line followed by the payload.

    Writes go to a temporary file in the target directory and are moved into
    place with os.replace, so readers see either the old or the new entry.
    Entries whose checksum does not match are deleted and reported as misses.
    """

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.hits = self.misses = self.corrupt = 0

    def _path(self, key: str) -> Path:
        parts = [p for p in key.split("/") if p not in ("", ".", "..")]
        return self.root.joinpath(CACHE_SCHEMA, *parts)

    def get(self, key: str) -> bytes | None:
        path = self._path(key)
        try:
            blob = path.read_bytes()
        except OSError:
            self.misses += 1
            return None
        head, sep, payload = blob.partition(b"\n")
        if not sep or hashlib.sha256(payload).hexdigest().encode() != head:
            self.corrupt += 1
            self.misses += 1
            try:
                path.unlink()
            except OSError:
                pass
            return None
        self.hits += 1
        return payload

    def put(self, key: str, payload: bytes) -> None:
        path = self._path(key)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
            with os.fdopen(fd, "wb") as fh:
                fh.write(hashlib.sha256(payload).hexdigest().encode() + b"\n" + payload)
            os.replace(tmp, path)
        except OSError:
            # an unwritable cache only costs recomputation
            pass

    def stats(self) -> dict:
        return {"hits": self.hits, "misses": self.misses, "corrupt": self.corrupt}


def cache_get(key: str, cache_dir: str | None = None) -> bytes | None:
    return FileCache(cache_dir or default_cache_dir()).get(key)


def cache_put(key: str, payload: bytes, cache_dir: str | None = None) -> None:
    FileCache(cache_dir or default_cache_dir()).put(key, payload)


# -- canonical JSON -------------------------------------------------------------


def _canon(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, (int, Fraction, float)):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _canon(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_canon(v) for v in x]
    return x if isinstance(x, str) else repr(x)


def canonical_json(obj) -> str:
    return json.dumps(_canon(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


# -- suites ---------------------------------------------------------------------


def _plan(cfg: RunConfig, suite: str) -> list[tuple[str, str, dict]]:
    """(check name, task id, kwargs) triples for one suite."""
    p, n, w, seed = cfg.p, cfg.n, cfg.max_weight, cfg.seed
    D = cfg.max_degree
    if suite == "witt-axioms":
        tasks = [("witt-axioms", "witt_axioms", dict(p=p, n=min(n, 3), seed=seed))]
        tasks += [(f"W_{k}(F_{p}) cyclic", "prime_field", dict(p=p, n=k)) for k in range(1, 5)]
        return tasks
    if suite == "hkr":
        return [("hkr", "hkr", dict(p=p, window=D or 12))]
    if suite == "theorem1":
        return [(f"theorem1 q={q}", "theorem1", dict(p=p, n=n, qs=(q,), max_weight=w)) for q in range(3)]
    if suite == "theorem2-centers":
        return [("center iso", "theorem_iso", dict(p=p, n=n, D=D or 9, seed=seed)),
                ("azumaya freeness", "azumaya", dict(p=p, D=D or 9))]
    if suite == "lemma-identities":
        return [(f"lemma identities n={k}", "lemma", dict(n=k, p=p)) for k in range(1, n + 1)]
    if suite == "sv-identity":
        return [(f"sv identity z={z}", "sv", dict(p=p, which=z)) for z in ("x^p", "y^p", "x^p y^p", "1")]
    if suite == "illusie":
        return [(f"illusie m={m} n={k}", "illusie", dict(p=p, m=m, n=k, max_weight=w))
                for m in (1, 2) for k in range(1, n + 1)]
    if suite == "cartier-tau":
        return [("tau kernel", "tau", dict(p=p, seed=seed)),
                ("cartier m=1", "cartier", dict(p=p, nvars=1, max_weight=15)),
                ("cartier m=2", "cartier", dict(p=p, nvars=2, max_weight=8))]
    if suite == "delta-exponent":
        return [("delta exponent", "delta", dict(p=p, ns=tuple(range(1, n + 1)), window=D or 12))]
    raise ConfigInvalid(suite)


def _sv(p, which):
    from .hoch import sv_identity_check
    from .weylquant import NcPoly

    x, y = NcPoly.x(p, 1, p), NcPoly.y(p, 1, p)
    z = {"x^p": x, "y^p": y, "x^p y^p": x * y, "1": NcPoly.const(1, p, 1)}[which]
    return sv_identity_check(z)


def _dispatch(task: str, kw: dict) -> dict:
    if task == "witt_axioms":
        from .wittring import witt_axioms_check
        return witt_axioms_check(**kw)
    if task == "prime_field":
        from .wittring import prime_field_witt_structure
        return prime_field_witt_structure(**kw)
    if task == "hkr":
        from .hoch import hkr_check
        return hkr_check(**kw)
    if task == "theorem1":
        from .hoch import theorem1_check
        return theorem1_check(**kw)
    if task == "theorem_iso":
        from .weylquant import theorem_iso_check
        return theorem_iso_check(**kw)
    if task == "azumaya":
        from .weylquant import azumaya_freeness_check
        return azumaya_freeness_check(**kw)
    if task == "lemma":
        from .hoch import lemma_identities_check
        return lemma_identities_check(**kw)
    if task == "sv":
        return _sv(**kw)
    if task == "illusie":
        from .drwitt import illusie_exactness
        return illusie_exactness(**kw)
    if task == "tau":
        from .polydiff import tau_kernel_check
        return tau_kernel_check(**kw)
    if task == "cartier":
        from .polydiff import cartier_injectivity
        return cartier_injectivity(**kw)
    if task == "delta":
        from .hoch import connecting_delta_check
        return connecting_delta_check(**kw)
    raise ConfigInvalid(task)


def _witnesses(report: dict) -> list:
    for key in ("failures", "witnesses", "counterexamples"):
        if report.get(key):
            return list(report[key])[:10]
    return []


def _run_task(args) -> tuple[dict, dict]:
    suite, name, task, kw, cache_dir = args
    from . import wittring

    cache = FileCache(cache_dir)
    wittring.set_persistent_cache(cache)
    t0 = time.perf_counter()
    try:
        report = _dispatch(task, kw)
        ok = bool(report.get("pass"))
    except Exception as exc:  # a crashing check is a failing check
        report = {"error": f"{type(exc).__name__}: {exc}"}
        ok = False
    finally:
        wittring.set_persistent_cache(None)
    record = {"suite": suite, "name": name, "parameters": kw, "expected": {"pass": True},
              "computed": report, "pass": ok, "witnesses": _witnesses(report)}
    return record, {"seconds": round(time.perf_counter() - t0, 3), **cache.stats()}


@dataclass
class SuiteReport:
    suite: str
    config: dict
    checks: list
    timing: dict
    cache: dict

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def to_dict(self, timings: bool = True) -> dict:
        d = {"schema": REPORT_SCHEMA, "suite": self.suite, "config": self.config, "checks": self.checks,
             "pass": self.passed}
        if timings:
            d["timing"] = self.timing
            d["cache"] = self.cache
        return d

    def to_json(self, timings: bool = True) -> str:
        return canonical_json(self.to_dict(timings))

    def summary(self) -> str:
        width = max([len(c["name"]) for c in self.checks] + [5])
        lines = [f"{'suite':<18} {'check':<{width}}  result   seconds"]
        for c in self.checks:
            secs = self.timing["per_check"].get(c["name"], "")
            lines.append(f"{c['suite']:<18} {c['name']:<{width}}  {'pass' if c['pass'] else 'FAIL':<7}  {secs}")
        lines.append(f"{len([c for c in self.checks if c['pass']])}/{len(self.checks)} checks passed "
                     f"in {self.timing['total']} s")
        return "\n".join(lines)


def run_suite(config: RunConfig) -> SuiteReport:
    suites = SUITES if config.suite == "all" else (config.suite,)
    cache_dir = config.cache_dir or default_cache_dir()
    jobs = []
    for suite in suites:
        for name, task, kw in _plan(config, suite):
            jobs.append((suite, name, task, kw, cache_dir))
    t0 = time.perf_counter()
    if config.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_task, jobs))
    else:
        results = [_run_task(j) for j in jobs]
    cache = {"hits": 0, "misses": 0, "corrupt": 0}
    per_check = {}
    for record, stats in results:
        per_check[record["name"]] = stats["seconds"]
        for k in cache:
            cache[k] += stats[k]
    timing = {"total": round(time.perf_counter() - t0, 3), "per_check": per_check}
    report = SuiteReport(config.suite, config.echo(), [r for r, _ in results], timing, cache)
    if config.out:
        Path(config.out).write_text(report.to_json() + "\n", encoding="utf-8")
    return report


def parse_args(argv=None) -> RunConfig:
    ap = argparse.ArgumentParser(prog="wittkit", description="Run verification suites and write a JSON report.")
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--max-degree", type=int, default=None)
    ap.add_argument("--max-weight", type=int, default=3)
    ap.add_argument("--suite", default="all", choices=("all",) + SUITES)
    ap.add_argument("--out", default=None)
    ap.add_argument("--cache-dir", default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    a = ap.parse_args(argv)
    return RunConfig(p=a.p, n=a.n, max_degree=a.max_degree, max_weight=a.max_weight, suite=a.suite,
                     cache_dir=a.cache_dir, out=a.out, seed=a.seed, jobs=a.jobs)


def main(argv=None) -> int:
    try:
        config = parse_args(argv)
    except ConfigInvalid as exc:
        print(f"wittkit: invalid configuration: {exc}", file=sys.stderr)
        return 2
    report = run_suite(config)
    print(report.summary())
    return 0 if report.passed else 1
