"""Named experiments over the constructions, with CSV/JSON reports."""
from __future__ import annotations

import csv
import io
import json
import logging
import os
import tempfile
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from obddlab.bits import EXHAUSTIVE, InputSpace, ceil_log2
from obddlab.commutative import (
    SwqForm,
    build_pj_2kobdd,
    build_pj_layer,
    build_rpj_2kobdd,
    compile_swq,
    pj_width_bound,
    rpj_width_bound,
)
from obddlab.config import ExperimentConfig
from obddlab.constants import (
    CSV_COLUMNS,
    MAX_ALL_ORDERS_ARITY,
    PROBABILITY_TOL,
    ReorderMode,
    ReportFormat,
)
from obddlab.core import Order, Verdict, all_orders, random_orders, represents
from obddlab import core, quantum
from obddlab.errors import (
    InvalidProgramError,
    ObddLabError,
    UnknownSpecError,
)
from obddlab.fingerprint import (
    build_eq_qobdd,
    build_mod_qobdd,
    build_req_qobdd,
    build_seq_qobdd,
    find_good_set,
    fingerprint_count,
    is_good,
)
from obddlab.functions import (
    eq,
    make_function,
    mod_fn,
    parse_spec,
    pj,
    reorder_of,
    req,
    seq,
    xorreorder_of,
)
from obddlab.quantum import QuantumProgram, represents_bounded_error
from obddlab.reorder import certify, reorder_obdd, xorreorder_qobdd
from obddlab.width import (
    min_width_all_orders,
    min_width_fixed_order,
    min_width_sampled_orders,
)

logger = logging.getLogger(__name__)

EXHAUSTIVE_CHECK_ARITY = 16
SAMPLED_CHECK_INPUTS = 4096


@dataclass(frozen=True)
class ExperimentReport:
    experiment: str
    function: str = ""
    n: int = 0
    width_or_dim: int = 0
    min_accept: Optional[float] = None
    max_reject: Optional[float] = None
    agree: int = 0
    total: int = 0
    seed: int = 0
    runtime_ms: float = 0.0
    verdicts: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, object] = field(default_factory=dict)
    rows: Tuple[Dict[str, str], ...] = ()
    reason: Optional[str] = None
    config: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.verdicts) and all(self.verdicts.values()) and self.reason is None

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def summary(self) -> Dict[str, object]:
        return {
            "experiment": self.experiment,
            "function": self.function,
            "n": self.n,
            "width_or_dim": self.width_or_dim,
            "min_accept": self.min_accept,
            "max_reject": self.max_reject,
            "agree": self.agree,
            "total": self.total,
            "seed": self.seed,
        }

    def to_json(self) -> dict:
        return {
            "config": self.config,
            **self.summary(),
            "verdicts": self.verdicts,
            "passed": self.passed,
            "reason": self.reason,
            "details": self.details,
            "rows": list(self.rows),
            "timing": {"runtime_ms": self.runtime_ms},
        }

    def csv_rows(self) -> List[Dict[str, object]]:
        base = {**self.summary(), "runtime_ms": round(self.runtime_ms, 3)}
        if not self.rows:
            return [{**base, "order": "", "per_level": ""}]
        return [{**base, **row} for row in self.rows]


def _with_verdict(config: ExperimentConfig, function, program, verdict: Verdict, **extra) -> ExperimentReport:
    return ExperimentReport(
        experiment=config.cmd,
        function=function.describe(),
        n=program.n,
        width_or_dim=program.width,
        min_accept=verdict.min_accept,
        max_reject=verdict.max_reject,
        agree=verdict.agree,
        total=verdict.checked,
        seed=config.seed,
        **extra,
    )


def _inputs(n: int, seed: int) -> InputSpace:
    if n <= EXHAUSTIVE_CHECK_ARITY:
        return EXHAUSTIVE
    return InputSpace.sampled(SAMPLED_CHECK_INPUTS, seed)


def _fingerprint_report(
    config: ExperimentConfig, function, program: QuantumProgram, dim_ok: bool, **details
) -> ExperimentReport:
    verdict = represents_bounded_error(
        program, function, config.epsilon, _inputs(program.n, config.seed)
    )
    one_sided = verdict.min_accept is None or verdict.min_accept >= 1.0 - PROBABILITY_TOL
    return _with_verdict(
        config,
        function,
        program,
        verdict,
        verdicts={
            "bounded_error": verdict.passed,
            "one_sided": one_sided,
            "dimension": dim_ok,
        },
        details={"epsilon": config.epsilon, "witness": verdict.witness, **details},
    )


def _fingerprint_dim(m: int, epsilon: float) -> int:
    """Dimension of the computing register for modulus ``m``."""
    return m if m < 3 else 2 * fingerprint_count(m, epsilon)


# --------------------------------------------------------------------------
# commands


def eq_demo(config: ExperimentConfig) -> ExperimentReport:
    q = config.q or 3
    program = build_eq_qobdd(q, config.epsilon, config.seed)
    expected = _fingerprint_dim(1 << q, config.epsilon)
    return _fingerprint_report(config, eq(q), program, program.dim == expected, q=q)


def mod_demo(config: ExperimentConfig) -> ExperimentReport:
    p, n = config.p or 3, config.n or 6
    program = build_mod_qobdd(p, n, config.epsilon, config.seed)
    expected = _fingerprint_dim(p, config.epsilon)
    return _fingerprint_report(config, mod_fn(p, n), program, program.dim == expected, p=p)


def req_demo(config: ExperimentConfig) -> ExperimentReport:
    q = config.q or 1
    program = build_req_qobdd(q, config.epsilon, config.seed)
    bound = (1 << ceil_log2(2 * q)) * _fingerprint_dim(1 << q, config.epsilon)
    return _fingerprint_report(config, req(q), program, program.dim <= bound, q=q, bound=bound)


def seq_demo(config: ExperimentConfig) -> ExperimentReport:
    q = config.q or 4
    program = build_seq_qobdd(q, config.epsilon, config.seed)
    bound = (1 << ceil_log2(q)) * _fingerprint_dim(1 << q, config.epsilon)
    return _fingerprint_report(config, seq(q), program, program.dim <= bound, q=q, bound=bound)


def pj_demo(config: ExperimentConfig) -> ExperimentReport:
    k, m = config.k or 1, config.m or 2
    program = build_pj_2kobdd(k, m)
    function = pj(2 * k - 1, m)
    verdict = represents(program, function, None, _inputs(program.n, config.seed))
    layer = build_pj_layer(m)
    layer_orders = all_orders(layer.n) if layer.n <= 5 else random_orders(layer.n, 100, config.seed)
    layer_report = certify(layer, layer_orders, _inputs(layer.n, config.seed))
    return _with_verdict(
        config,
        function,
        program,
        verdict,
        verdicts={
            "exact": verdict.passed,
            "layer_commutative": layer_report.commutative,
            "width_bound": program.width <= pj_width_bound(m),
        },
        details={
            "layers": program.k,
            "width_bound": pj_width_bound(m),
            "size_bound": program.size_bound,
        },
    )


def rpj_demo(config: ExperimentConfig) -> ExperimentReport:
    k, m = config.k or 1, config.m or 2
    program = build_rpj_2kobdd(k, m, config.seed)
    function = reorder_of(pj(2 * k - 1, m))
    verdict = represents(program, function, None, _inputs(program.n, config.seed))
    return _with_verdict(
        config,
        function,
        program,
        verdict,
        verdicts={
            "exact_on_domain": verdict.passed,
            "width_bound": program.width <= rpj_width_bound(program.n),
        },
        details={"skipped_off_domain": verdict.skipped, "width_bound": rpj_width_bound(program.n)},
    )


def reorder_verify(config: ExperimentConfig) -> ExperimentReport:
    p, q = config.p or 2, config.q or 2
    mode = ReorderMode(config.mode)
    base = compile_swq(SwqForm.mod(p, q))
    program = reorder_obdd(base, mode, certify(base, seed=config.seed))
    oracle = xorreorder_of if mode is ReorderMode.XOR else reorder_of
    function = oracle(mod_fn(p, q))
    verdict = represents(program, function, None, _inputs(program.n, config.seed))
    expected = (1 << ceil_log2(q)) * base.width
    return _with_verdict(
        config,
        function,
        program,
        verdict,
        verdicts={"exact_on_domain": verdict.passed, "width": program.width == expected},
        details={"mode": mode.value, "base_width": base.width, "q_times_width": q * base.width},
    )


def _orders(config: ExperimentConfig, n: int):
    if config.orders == "id":
        return [Order.identity(n)]
    if config.orders == "all":
        if n > MAX_ALL_ORDERS_ARITY:
            return random_orders(n, config.samples, config.seed)
        return all_orders(n)
    return random_orders(n, int(config.orders), config.seed)


def commutativity_check(config: ExperimentConfig) -> ExperimentReport:
    spec = config.program or "swq-mod:p=3,n=6"
    program = build_program(spec, config)
    report = certify(program, _orders(config, program.n), _inputs(program.n, config.seed), config.seed)
    witness = report.witness_order.perm if report.witness_order else None
    return ExperimentReport(
        experiment=config.cmd,
        function=spec,
        n=program.n,
        width_or_dim=program.width,
        total=report.checked_orders,
        agree=report.checked_orders if report else report.checked_orders - 1,
        seed=config.seed,
        verdicts={"commutative": report.commutative},
        details={
            "inputs": report.inputs,
            "witness_order": witness,
            "witness_input": report.witness_input,
            "digest": report.digest,
        },
    )


def good_set(config: ExperimentConfig) -> ExperimentReport:
    m = config.m or 8
    params = find_good_set(m, config.epsilon, config.seed)
    check = is_good(params.k, m, config.epsilon)
    return ExperimentReport(
        experiment=config.cmd,
        function=f"good-set:m={m}",
        width_or_dim=params.dim,
        max_reject=check.worst_value,
        seed=config.seed,
        verdicts={"good": check.passed, "t_power_of_two": params.t & (params.t - 1) == 0},
        details={**params.to_json(), "worst_g": check.worst_g, "attempts": params.attempts},
    )


def width_table(config: ExperimentConfig) -> ExperimentReport:
    function = make_function(config.fn or "eq:q=2")
    if config.orders == "id":
        profiles = (min_width_fixed_order(function, Order.identity(function.n)),)
    elif config.orders == "all":
        profiles = min_width_all_orders(function).profiles
    else:
        profiles = min_width_sampled_orders(function, int(config.orders), config.seed).profiles
    best = min(profiles, key=lambda p: (p.width, p.order.perm))
    return ExperimentReport(
        experiment=config.cmd,
        function=function.describe(),
        n=function.n,
        width_or_dim=best.width,
        total=len(profiles),
        seed=config.seed,
        verdicts={"scanned": bool(profiles)},
        details={"best_order": list(best.order.perm), "per_level": list(best.per_level)},
        rows=tuple({**p.row(), "width_or_dim": p.width} for p in profiles),
    )


def width_search(config: ExperimentConfig) -> ExperimentReport:
    function = make_function(config.fn or "req:q=2")
    search = min_width_sampled_orders(function, config.samples, config.seed)
    return ExperimentReport(
        experiment=config.cmd,
        function=function.describe(),
        n=function.n,
        width_or_dim=search.width,
        total=len(search.profiles),
        seed=config.seed,
        verdicts={"scanned": bool(search.profiles)},
        details={
            "best_order": list(search.order.perm),
            "histogram": {str(w): c for w, c in search.histogram.items()},
            "identity_width": search.profiles[0].width,
        },
    )


COMMANDS: Dict[str, Callable[[ExperimentConfig], ExperimentReport]] = {
    "eq-demo": eq_demo,
    "mod-demo": mod_demo,
    "req-demo": req_demo,
    "seq-demo": seq_demo,
    "pj-demo": pj_demo,
    "rpj-demo": rpj_demo,
    "reorder-verify": reorder_verify,
    "commutativity-check": commutativity_check,
    "good-set": good_set,
    "width-table": width_table,
    "width-search": width_search,
}


# --------------------------------------------------------------------------
# builder specs and export


def _builders(epsilon: float, seed: int) -> Dict[str, Callable[..., object]]:
    def xorreorder_eq(q):
        base = build_eq_qobdd(q, epsilon, seed)
        return xorreorder_qobdd(base, certify(base, seed=seed))

    def reorder_mod(p, q, mode="plain"):
        base = compile_swq(SwqForm.mod(p, q))
        return reorder_obdd(base, ReorderMode(mode), certify(base, seed=seed))

    return {
        "swq-mod": lambda p, n: compile_swq(SwqForm.mod(p, n)),
        "eq-qobdd": lambda q: build_eq_qobdd(q, epsilon, seed),
        "mod-qobdd": lambda p, n: build_mod_qobdd(p, n, epsilon, seed),
        "req-qobdd": lambda q: build_req_qobdd(q, epsilon, seed),
        "seq-qobdd": lambda q: build_seq_qobdd(q, epsilon, seed),
        "xorreorder-eq-qobdd": xorreorder_eq,
        "reorder-mod": reorder_mod,
        "pj": build_pj_2kobdd,
        "rpj": lambda k, m: build_rpj_2kobdd(k, m, seed),
    }


def build_program(spec: str, config: Optional[ExperimentConfig] = None):
    """Program named by a builder spec such as ``"mod-qobdd:p=3,n=6"``.

    ``epsilon`` and ``seed`` come from the spec when given, else from ``config``.
    """
    name, params = parse_spec(spec)
    epsilon = float(params.pop("epsilon", config.epsilon if config else 0.25))
    seed = int(params.pop("seed", config.seed if config else 0))
    builders = _builders(epsilon, seed)
    if name not in builders:
        raise UnknownSpecError(f"unknown builder {name!r}")
    try:
        return builders[name](**params)
    except TypeError as exc:
        raise UnknownSpecError(f"bad parameters for {name!r}: {exc}") from exc


def program_document(program) -> dict:
    if isinstance(program, QuantumProgram):
        return quantum.program_to_json(program)
    return core.program_to_json(program)


def load_program(path):
    """Read a program file written by :func:`export_program` and validate it."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidProgramError([f"cannot read program {path}: {exc}"]) from exc
    if "gates" in data:
        return quantum.program_from_json(data)
    return core.program_from_json(data)


def export_program(spec: str, path, config: Optional[ExperimentConfig] = None):
    program = build_program(spec, config)
    write_atomic(path, json.dumps(program_document(program)))
    logger.info("exported %s to %s", spec, path)
    return program


# --------------------------------------------------------------------------
# running and writing


def write_atomic(path, text: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    handle, temp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.")
    try:
        with os.fdopen(handle, "w") as stream:
            stream.write(text)
        os.replace(temp, target)
    except BaseException:
        Path(temp).unlink(missing_ok=True)
        raise


def render(report: ExperimentReport, fmt: ReportFormat) -> str:
    if fmt is ReportFormat.JSON:
        return json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(CSV_COLUMNS), extrasaction="ignore")
    writer.writeheader()
    writer.writerows(report.csv_rows())
    return buffer.getvalue()


def run(config: ExperimentConfig) -> ExperimentReport:
    """Run one experiment; pipeline errors become a failed report.

    Unknown specs and out-of-range parameters propagate as ``ValueError``.
    """
    started = time.perf_counter()
    try:
        report = COMMANDS[config.cmd](config)
    except UnknownSpecError:
        raise
    except ObddLabError as exc:
        logger.warning("%s failed: %s", config.cmd, exc)
        report = ExperimentReport(
            experiment=config.cmd,
            function=config.fn or config.program or "",
            seed=config.seed,
            verdicts={"completed": False},
            reason=f"{type(exc).__name__}: {exc}",
        )
    elapsed = (time.perf_counter() - started) * 1000.0
    report = replace(report, runtime_ms=elapsed, config=config.to_json())
    logger.info("%s: %s in %.1f ms", config.cmd, "pass" if report.passed else "fail", elapsed)
    if config.out:
        write_atomic(config.out, render(report, config.format))
    return report
