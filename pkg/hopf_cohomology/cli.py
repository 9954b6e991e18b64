"""``hopf-cohomology`` command line: build families, run cohomology/oracle/ring jobs and write reports."""
import argparse
import json
import sys
from dataclasses import dataclass, field, fields
from typing import Optional

from hopf_cohomology import cobar, oracle, report, ring
from hopf_cohomology.coalgebra import CoalgebraSpec, validate
from hopf_cohomology.exceptions import CheckFailure, ConfigError, HopfCohomologyError
from hopf_cohomology.families import ALIASES, GroupSpec, bracket_datum, build_family, catalog
from hopf_cohomology.session import JobSession
from hopf_cohomology.sys_utils import log

MAX_N = 6
SUITES = {
    "invariants": ("validate", "d_squared", "bracket", "pp0", "coradical", "reduced", "shift"),
    "oracle": ("oracle",),
    "ring": ("leibniz", "associativity", "ad"),
}
SAMPLED_CHECKS = ("leibniz", "associativity", "ad")
FILTERED_FAMILIES = ("L", "N", "O", "P", "Q")
PARAM_KEYS = ("group", "e", "chi", "tau", "eta", "lam", "xi", "ell", "z_max", "w_max", "d", "N")


@dataclass
class JobConfig:
    command: str = "cohomology"
    family: Optional[str] = None
    params: dict = field(default_factory=dict)
    spec_path: Optional[str] = None
    pairs: str = "base"
    n_max: int = 2
    deg_max: Optional[int] = None
    method: str = "auto"
    windows: list = field(default_factory=lambda: [2, 4, 8])
    g: str = "x"
    h: str = "1"
    suite: str = "invariants"
    checks: list = field(default_factory=list)
    seed: Optional[int] = None
    samples: int = 50
    with_reps: bool = True
    with_graded: bool = False
    threads: Optional[int] = None
    out: Optional[str] = None
    csv: Optional[str] = None
    golden: Optional[str] = None
    db: Optional[str] = ".hopfcoh"
    remote: Optional[str] = None
    tracing: bool = True
    description: str = ""
    tags: list = field(default_factory=list)

    @classmethod
    def from_json(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_sources(cls, args):
        """Config file first, then every explicitly given CLI flag on top (each override is logged)."""
        config = cls()
        if args.config:
            try:
                with open(args.config, "r", encoding="utf-8") as f:
                    config = cls.from_json(json.load(f))
            except (OSError, ValueError, TypeError) as exc:
                raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        config.command = args.command
        from_file = bool(args.config)
        for name, value in _explicit_flags(args).items():
            if name == "params":
                for key, item in value.items():
                    old = config.params.get(key)
                    if from_file and old is not None and old != item:
                        log(f"config override: params.{key} {old} -> {item}")
                    config.params[key] = item
                continue
            old = getattr(config, name)
            if from_file and old != value:
                log(f"config override: {name} {old} -> {value}")
            setattr(config, name, value)
        config.validate()
        return config

    @property
    def enabled_checks(self):
        if self.checks:
            return list(self.checks)
        if self.suite == "all":
            return [c for suite in SUITES.values() for c in suite]
        return list(SUITES.get(self.suite, ()))

    def validate(self):
        if not 0 <= self.n_max <= MAX_N:
            raise ConfigError(f"n_max must lie in 0..{MAX_N}, got {self.n_max}")
        if self.family is None and self.spec_path is None:
            raise ConfigError("either --family or --spec is required")
        if self.suite not in SUITES and self.suite != "all":
            raise ConfigError(f"unknown suite {self.suite!r}")
        unknown = [c for c in self.checks if c not in {c for suite in SUITES.values() for c in suite}]
        if unknown:
            raise ConfigError(f"unknown checks: {', '.join(unknown)}")
        sampled = self.command == "ring" or (
            self.command == "verify" and any(c in SAMPLED_CHECKS for c in self.enabled_checks)
        )
        if sampled and self.seed is None:
            raise ConfigError("a --seed is mandatory for sampled checks")
        if self.method not in cobar.METHODS:
            raise ConfigError(f"unknown method {self.method!r}")


def _explicit_flags(args):
    values = {}
    params = {}
    for key in PARAM_KEYS:
        value = getattr(args, f"p_{key}", None)
        if value is not None:
            params[key] = value
    for item in args.param or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        params[key] = json.loads(value) if value[:1] in "[{" else value
    if params:
        values["params"] = params
    if getattr(args, "p_z_max", None) is not None and args.deg_max is None:
        values["deg_max"] = args.p_z_max
    for name in (
        "family",
        "spec_path",
        "pairs",
        "n_max",
        "deg_max",
        "method",
        "windows",
        "g",
        "h",
        "suite",
        "checks",
        "seed",
        "samples",
        "threads",
        "out",
        "csv",
        "golden",
        "remote",
        "description",
        "tags",
    ):
        value = getattr(args, name, None)
        if value is not None and value != []:
            values[name] = value
    if getattr(args, "no_reps", False):
        values["with_reps"] = False
    if getattr(args, "with_graded", False):
        values["with_graded"] = True
    if args.no_db:
        values["db"] = None
    elif args.db is not None:
        values["db"] = args.db
    if args.no_tracing:
        values["tracing"] = False
    return values


def _chi_list(text):
    return [v for v in str(text).split(",") if v]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hopf-cohomology", description="Primitive cohomology of pointed Hopf algebras."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_argument_group("coalgebra")
    source.add_argument("--config", dest="config", help="JSON job configuration; flags given here win.")
    source.add_argument("--family", dest="family", help="Family name (A, C, E, F, L, N, O, P, Q, U, Group, taft, ...).")
    source.add_argument("--spec", dest="spec_path", help="Coalgebra JSON file instead of a family.")
    source.add_argument("--group", dest="p_group", help="Z/n, Z/mxZ/n, Z[-a,b] or Z[r].")
    source.add_argument("--e", dest="p_e", help="The grouplike e as a word, e.g. x or 'x^2 y'.")
    source.add_argument("--chi", dest="p_chi", type=_chi_list, help="chi on the generators, comma separated.")
    source.add_argument("--tau", dest="p_tau", type=_chi_list, help="tau on the generators (family C).")
    source.add_argument("--eta", dest="p_eta", type=_chi_list, help="eta on the generators (families L, O, P, Q).")
    source.add_argument("--lam", dest="p_lam", help="lambda of the power relation.")
    source.add_argument("--xi", dest="p_xi", help="xi (family N).")
    source.add_argument("--ell", dest="p_ell", type=int, help="Order of chi(e).")
    source.add_argument("--zdeg-max", dest="p_z_max", type=int, help="Largest z-degree kept (also caps degrees).")
    source.add_argument("--w-max", dest="p_w_max", type=int, help="Largest w-degree kept.")
    source.add_argument("--d", dest="p_d", type=int, help="Dimension of g (family U).")
    source.add_argument("--N", dest="p_N", type=int, help="Truncation degree (family U).")
    source.add_argument("--param", dest="param", action="append", default=[], help="Extra key=value parameter.")
    job = common.add_argument_group("job")
    job.add_argument("--pairs", dest="pairs", help="all, base (g,1) or 'g:h,g:h' with grouplike labels.")
    job.add_argument("--nmax", dest="n_max", type=int, help=f"Largest cohomological degree (<= {MAX_N}).")
    job.add_argument("--deg-max", dest="deg_max", type=int, help="Largest total internal degree.")
    job.add_argument("--method", dest="method", choices=cobar.METHODS, help="Cobar complex or path subcomplex.")
    job.add_argument("--threads", dest="threads", type=int, help="Worker cap (default HOPF_THREADS or CPU count).")
    job.add_argument("--seed", dest="seed", type=int, help="Seed of the sampled checks.")
    job.add_argument("--samples", dest="samples", type=int, help="Number of sampled cochain tuples.")
    output = common.add_argument_group("output")
    output.add_argument("--out", dest="out", help="Report JSON path ('-' for stdout).")
    output.add_argument("--csv", dest="csv", help="Flat CSV of the report entries.")
    output.add_argument("--golden", dest="golden", help="Golden report to compare against.")
    output.add_argument("--db", dest="db", help="sqlite database for sessions and metrics (default .hopfcoh).")
    output.add_argument("--no-db", dest="no_db", action="store_true", help="Do not store results in a database.")
    output.add_argument("--remote-server", dest="remote", help="Remote result server <ADDRESS>:<PORT>.")
    output.add_argument("--no-tracing", dest="no_tracing", action="store_true", help="Disable session bookkeeping.")
    output.add_argument("--description", dest="description", help="Short summary of this run.")
    output.add_argument("--tag", dest="tags", action="append", default=[], help="key=value run tag.")

    sub.add_parser("build", parents=[common], help="Build and validate a coalgebra, write its JSON.")
    coh = sub.add_parser("cohomology", parents=[common], help="Primitive cohomology report.")
    coh.add_argument("--no-reps", dest="no_reps", action="store_true", help="Dimensions only.")
    coh.add_argument("--with-graded", dest="with_graded", action="store_true", help="Also run the graded family F.")
    sub.add_parser("oracle", parents=[common], help="Cotor against Tor over the graded dual.")
    sub.add_parser("ring", parents=[common], help="Ring structure constants and sampled product checks.")
    ver = sub.add_parser("verify", parents=[common], help="Run a suite of structural checks.")
    ver.add_argument("--suite", dest="suite", help="invariants, oracle, ring or all.")
    ver.add_argument("--check", dest="checks", action="append", default=[], help="Run only this check.")
    stab = sub.add_parser("stabilize", parents=[common], help="PP^n over growing windows of Z.")
    stab.add_argument("--windows", dest="windows", type=lambda s: [int(v) for v in s.split(",")], help="Radii.")
    stab.add_argument("--g", dest="g", help="Left grouplike as a group word.")
    stab.add_argument("--h", dest="h", help="Right grouplike as a group word.")
    return parser


def load_spec(config):
    if config.spec_path:
        try:
            with open(config.spec_path, "r", encoding="utf-8") as f:
                return CoalgebraSpec.from_json(json.load(f))
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot read coalgebra {config.spec_path}: {exc}") from exc
    return build_family(config.family, config.params)


def resolve_pairs(spec, text):
    if text in ("all", "base"):
        return text
    pairs = []
    for item in text.split(","):
        left, sep, right = item.partition(":")
        if not sep:
            raise ConfigError(f"pair {item!r} is not of the form g:h")
        g, h = spec.index(left.strip()), spec.index(right.strip())
        spec.require_grouplike(g, h)
        pairs.append((g, h))
    return pairs


def _deg_cap(spec, config):
    if config.deg_max is None and not spec.finite and spec.degree_bound is None:
        raise ConfigError(f"{spec.name} is truncated; --deg-max is mandatory")
    return config.deg_max


def _finish(config, data, session=None, spec=None, entries_from=None):
    report.write_json(data, config.out or "-")
    if config.csv and entries_from is not None:
        report.write_csv(entries_from, config.csv)
    if session is not None and entries_from is not None:
        rows = report.report_rows(entries_from)
        session.add_entries(spec.name, [tuple(row[k] for k in ("g", "h", "n", "degree", "dim")) for row in rows])
    if config.golden:
        report.require_golden(data, config.golden)


def run_build(config, session):
    spec = session.run_job("build", config.family or config.spec_path, "build", load_spec, config)
    checked = validate(spec)
    data = spec.to_json()
    _finish(config, data)
    log(f"{spec.name}: dim {spec.dim}, {len(spec.grouplikes)} grouplikes, dropped {spec.dropped} boundary triples")
    if not checked.ok:
        raise CheckFailure("validate", "; ".join(str(v) for v in checked.violations[:5]))
    return 0


def _cohomology(config, session, spec):
    cap = _deg_cap(spec, config)
    pairs = resolve_pairs(spec, config.pairs)
    return session.run_job(
        "cohomology",
        spec.name,
        "slices",
        cobar.compute_report,
        spec,
        pairs,
        config.n_max,
        cap,
        config.method,
        config.with_reps,
        config.threads,
    )


def run_cohomology(config, session):
    spec = session.run_job("build", config.family or config.spec_path, "build", load_spec, config)
    result = _cohomology(config, session, spec)
    data = result.to_json()
    family = ALIASES.get(str(config.family).lower(), config.family)
    if config.with_graded and family in FILTERED_FAMILIES:
        params = {k: v for k, v in config.params.items() if k not in ("eta", "xi", "lam")}
        graded = build_family("F", params)
        data["graded_companion"] = _cohomology(config, session, graded).to_json()
    totals = " ".join(f"{n}:{d}" for n, d in sorted(result.dims().items()))
    log(f"{spec.name}: dims per n {totals}; {result.pcdim_lb}")
    _finish(config, data, session, spec, data)
    return 0


def run_oracle(config, session):
    spec = session.run_job("build", config.family or config.spec_path, "build", load_spec, config)
    cap = _deg_cap(spec, config)
    pairs = resolve_pairs(spec, config.pairs)
    result = session.run_job(
        "oracle", spec.name, "check", oracle.compare_cotor_tor, spec, pairs, config.n_max, cap, config.method
    )
    _finish(config, result.to_json())
    if not result.ok:
        first = result.mismatches[0]
        raise CheckFailure(
            "oracle",
            f"{len(result.mismatches)} mismatches, first at g={spec.label(first.g)} h={spec.label(first.h)} "
            f"n={first.n} degree={list(first.degree)}: cotor {first.cotor} vs tor {first.tor}",
        )
    return 0


def run_ring(config, session):
    spec = session.run_job("build", config.family or config.spec_path, "build", load_spec, config)
    cap = _deg_cap(spec, config)
    table = session.run_job(
        "ring", spec.name, "slices", ring.ring_structure, spec, config.n_max, cap, config.seed, config.method
    )
    results = [
        ring.leibniz_check(spec, config.samples, config.seed),
        ring.associativity_check(spec, config.samples, config.seed),
        ring.ad_chain_map_check(spec, config.samples, config.seed),
    ]
    data = table.to_json()
    data["checks"] = [r.to_json() for r in results]
    _finish(config, data)
    if table.stable is False:
        raise CheckFailure("ring well-definedness", "structure constants changed under boundary perturbation")
    for result in results:
        result.raise_for_failure()
    return 0


def run_check(name, spec, config, source=None):
    """One named check on one spec; ``None`` when it does not apply.

    ``source`` is the ``(family, params)`` pair the spec was built from, when known.
    """
    n_max = min(config.n_max, 3)
    if name == "validate":
        checked = validate(spec)
        return report.CheckResult("validate", checked.ok, "; ".join(str(v) for v in checked.violations[:3]))
    if name == "pp0":
        return cobar.pp0_check(spec)
    if name == "coradical":
        return cobar.coradical_check(spec)
    if spec.dropped:
        log(f"{spec.name}: {name} skipped, window truncation dropped {spec.dropped} triples")
        return None
    if name == "d_squared":
        for g, h in cobar.grouplike_pairs(spec):
            result = cobar.check_d_squared(spec, g, h, n_max, config.deg_max)
            if not result:
                return result
        return result
    if name == "bracket":
        datum = bracket_datum(*source) if source else None
        if datum is None:
            return None
        try:
            return cobar.bracket_check(spec, *datum)
        except HopfCohomologyError as exc:
            log(f"{spec.name}: bracket skipped ({exc})")
            return None
    if name == "reduced":
        one = spec.identity
        for n in range(n_max + 1):
            full, _ = cobar.primitive_cohomology(spec, one, one, n, with_reps=False, deg_max=config.deg_max)
            reduced = cobar.reduced_cobar_cohomology(spec, one, n, deg_max=config.deg_max)
            if full != reduced:
                return report.CheckResult.failed("reduced", f"n={n}: {full} vs reduced {reduced}")
        return report.CheckResult("reduced")
    if name == "shift":
        if not cobar.shift_is_reduced(spec):
            return None
        one = spec.identity
        for g in spec.grouplikes:
            for h in spec.grouplikes:
                result = cobar.shift_check(spec, g, h, one, 1, deg_max=config.deg_max)
                if not result:
                    return result
        return report.CheckResult("shift")
    if name == "oracle":
        try:
            result = oracle.compare_cotor_tor(spec, "all", n_max, config.deg_max)
        except HopfCohomologyError as exc:
            log(f"{spec.name}: oracle skipped ({exc})")
            return None
        witness = f"{len(result.mismatches)} mismatches" if result.mismatches else ""
        return report.CheckResult("oracle", result.ok, witness)
    if spec.algebra is None or not spec.has_group_law:
        return None
    if name == "leibniz":
        return ring.leibniz_check(spec, config.samples, config.seed)
    if name == "associativity":
        return ring.associativity_check(spec, config.samples, config.seed)
    if name == "ad":
        return ring.ad_chain_map_check(spec, config.samples, config.seed)
    raise ConfigError(f"unknown check {name!r}")


def run_verify(config, session):
    if config.family == "all":
        specs = [(entry.name, entry.build, (entry.family, entry.params)) for entry in catalog()]
    else:
        source = (config.family, config.params) if config.family else None
        specs = [(config.family or config.spec_path, lambda: load_spec(config), source)]
    results = []
    failures = []
    for name, builder, source in specs:
        spec = session.run_job("build", name, "build", builder)
        for check in config.enabled_checks:
            result = session.run_job(f"verify:{check}", spec.name, "check", run_check, check, spec, config, source)
            if result is None:
                continue
            results.append({"spec": spec.name, **result.to_json()})
            if not result:
                failures.append((spec.name, result))
    _finish(config, {"suite": config.suite, "results": results, "failures": len(failures)})
    if failures:
        spec_name, result = failures[0]
        raise CheckFailure(f"{result.name} on {spec_name}", result.witness)
    return 0


def run_stabilize(config, session):
    family = config.family
    base = GroupSpec.parse(f"Z[{config.windows[0]}]")
    g, h = base.parse_element(config.g), base.parse_element(config.h)

    def builder(radius):
        params = dict(config.params)
        params["group"] = f"Z[{radius}]"
        return build_family(family, params)

    result = session.run_job(
        "stabilize",
        family,
        "slices",
        cobar.window_stabilize,
        builder,
        config.windows,
        g,
        h,
        config.n_max,
        None,
        config.deg_max,
        config.method,
    )
    _finish(config, result.to_json())
    verdict = f"stabilized at {result.stabilized_at}" if result.stable else "not stabilized"
    log(f"window dims {result.dims}: {verdict}")
    return 0


COMMANDS = {
    "build": run_build,
    "cohomology": run_cohomology,
    "oracle": run_oracle,
    "ring": run_ring,
    "verify": run_verify,
    "stabilize": run_stabilize,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    session = None
    try:
        config = JobConfig.from_sources(args)
        session = JobSession(db=config.db, remote=config.remote, tracing=config.tracing)
        session.compute_info(config.description, config.tags)
        return COMMANDS[config.command](config, session)
    except HopfCohomologyError as exc:
        log(f"error: {exc}")
        return exc.exit_code
    finally:
        if session is not None:
            session.close()


if __name__ == "__main__":
    sys.exit(main())
