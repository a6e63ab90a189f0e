#!/usr/bin/env python3
from __future__ import annotations

import argparse
import asyncio
import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any


def _repo_root() -> Path:
    return Path(__file__).resolve().parents[1]


def _bootstrap_pythonpath() -> None:
    import sys

    src = _repo_root() / "src"
    if str(src) not in sys.path:
        sys.path.insert(0, str(src))


_bootstrap_pythonpath()

import numpy as np  # noqa: E402

from anti_orbits.config import ShadowConfig, get_settings  # noqa: E402
from anti_orbits.dls.shadow import code_residual, shadow  # noqa: E402
from anti_orbits.entropy.spectral import tmc_entropy  # noqa: E402
from anti_orbits.entropy.standard import standard_map_entropy_bound  # noqa: E402
from anti_orbits.hyperbolicity.blocks import variational_blocks  # noqa: E402
from anti_orbits.hyperbolicity.cones import cone_verify  # noqa: E402
from anti_orbits.hyperbolicity.stable import stable_vector  # noqa: E402
from anti_orbits.models.billiard import billiard_code, reflection_check  # noqa: E402
from anti_orbits.models.registry import BilliardModel, SepMapModel  # noqa: E402
from anti_orbits.models.sepmap import random_path, sepmap_generating_defect  # noqa: E402
from anti_orbits.standard_map.params import StandardMapParams  # noqa: E402
from anti_orbits.standard_map.shadowing import decay_check, lagrangian_residual, newton_orbit, shadow_code  # noqa: E402
from anti_orbits.symbolic.codes import StandardCode, code_from_second_differences, perturb_outside, random_standard_code  # noqa: E402
from anti_orbits.symbolic.graph import complete_graph, golden_mean_graph  # noqa: E402
from anti_orbits.workflow.certification import CertificationJob, CertificationWorkflow  # noqa: E402


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict[str, Any] = field(default_factory=dict)


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Run the headline acceptance checks and write a report.")
    parser.add_argument(
        "--output-md",
        default="",
        help="Markdown report path. Default: eval/reports/acceptance_<timestamp>.md",
    )
    parser.add_argument(
        "--output-json",
        default="",
        help="JSON report path. Default: eval/reports/acceptance_<timestamp>.json",
    )
    parser.add_argument("--seed", type=int, default=0, help="Seed of the randomized checks.")
    parser.add_argument("--limit", type=int, default=20, help="Random codes per randomized check.")
    return parser.parse_args()


def period_three_codes() -> list[StandardCode]:
    return [code_from_second_differences(symbols) for symbols in itertools.product((-1, 0, 1), repeat=3)]


async def check_standard_shadowing() -> list[Check]:
    params = StandardMapParams(coupling=12.0, sigma=math.pi / 4, bound=math.pi)
    workflow = CertificationWorkflow()
    ratio_limit = min(4 / (params.coupling * math.cos(params.sigma)), 0.5)
    worst_rho = worst_residual = worst_ratio = 0.0
    min_mu = math.inf
    converged = True
    for k, code in enumerate(period_three_codes()):
        job = CertificationJob(name=f"p3_{k}", code=code, params=params, entropy=False)
        result = await workflow.run(job)
        orbit = result.orbit
        worst_rho = max(worst_rho, orbit.rho)
        worst_residual = max(worst_residual, lagrangian_residual(code, orbit.x, params.coupling))
        worst_ratio = max(worst_ratio, orbit.contraction_estimate)
        min_mu = min(min_mu, result.cones.mu)
        converged = converged and result.cones.passed
    return [
        Check("standard_shadowing", worst_rho < params.sigma and worst_residual <= 1e-10, {"rho": worst_rho, "residual": worst_residual}),
        Check("contraction_constant", worst_ratio < ratio_limit, {"ratio": worst_ratio, "limit": ratio_limit}),
        Check("standard_cones", converged and min_mu >= 2, {"mu": min_mu}),
    ]


def check_period_two() -> Check:
    params = StandardMapParams(coupling=20.0)
    code = StandardCode((0, 1), periodic=True, bound=2 * math.pi)
    expected = math.asin(2 * math.pi / params.coupling)
    x = shadow_code(code, params).x
    oracle = newton_orbit(code, params).x
    error = max(abs(x[0] - expected), abs(x[1] - math.pi - expected))
    agreement = float(np.max(np.abs(x - oracle)))
    return Check("period_two", error <= 1e-9 and agreement <= 1e-9, {"u": float(x[0]), "error": error, "oracle": agreement})


def check_stable_decay() -> Check:
    params = StandardMapParams(coupling=12.0)
    code = StandardCode((1,) * 31, periodic=False, origin=15)
    orbit = shadow_code(code, params)
    u = stable_vector(orbit, variational_blocks(orbit, params), 1.0, 20, start=5)
    ratio = abs(float(u[1, 0] / u[0, 0]))
    root = 5 - math.sqrt(24)
    return Check("stable_decay", abs(ratio - root) <= 1e-6, {"ratio": ratio, "root": root})


def check_locality(rng: np.random.Generator, limit: int) -> Check:
    params = StandardMapParams(coupling=50.0)
    worst = 0.0
    for _ in range(limit):
        code = random_standard_code(rng, 41, max_step=2)
        other = perturb_outside(code, rng, 8, max_step=2)
        worst = max(worst, decay_check(code, other, params, 8).ratio)
    return Check("locality", worst <= 1.0, {"ratio": worst, "pairs": limit})


def check_entropy() -> Check:
    complete = {q: abs(tmc_entropy(complete_graph(q)) - math.log(q)) for q in (2, 3, 7)}
    golden = abs(tmc_entropy(golden_mean_graph()) - math.log((1 + math.sqrt(5)) / 2))
    bound = standard_map_entropy_bound(20.0, math.pi / 4)
    growth = standard_map_entropy_bound(1e6, math.pi / 4).bound / math.log(1e6)
    passed = max(complete.values()) <= 1e-9 and golden <= 1e-9 and bound.q == 7 and growth >= 0.9
    return Check("entropy", passed, {"golden": golden, "q": bound.q, "bound_nats": bound.bound, "growth": growth})


def check_billiard() -> list[Check]:
    built = BilliardModel().build()
    system, spec, lift = built.system, built.spec, built.system.lift
    config = ShadowConfig.from_settings(get_settings())
    worst = 0.0
    codes = 0
    for period in (2, 4):
        for crits in itertools.product(range(2), repeat=period):
            xs = [float(lift.crit(k % 2, c)[0]) for k, c in enumerate(crits)]
            code, base = billiard_code(system, xs, True)
            orbit = shadow(code, system, config)
            worst = max(worst, reflection_check(orbit, system, spec, base))
            codes += 1

    widths = (25.0, 50.0, 100.0)
    residuals = []
    for width in widths:
        wide = BilliardModel(width=width).build().system
        code, _ = billiard_code(wide, [0.0, 0.5], True)
        residuals.append(code_residual(code, wide, wide.anchors(code)))
    slope = float(np.polyfit(np.log(widths), np.log(residuals), 1)[0])
    return [
        Check("billiard_reflection", worst <= 1e-8, {"defect": worst, "codes": codes}),
        Check("billiard_scaling", abs(slope + 1) <= 0.15, {"slope": slope}),
    ]


def check_sepmap(rng: np.random.Generator, limit: int) -> Check:
    built = SepMapModel().build()
    worst_residual = worst_defect = 0.0
    cones_ok = True
    for _ in range(limit):
        code = random_path(built.system, rng, 12)
        orbit = shadow(code, built.system)
        worst_residual = max(worst_residual, orbit.residual)
        worst_defect = max(worst_defect, sepmap_generating_defect(orbit, built.system, built.spec).worst)
        report = cone_verify(orbit, variational_blocks(orbit, built.system), rng=rng)
        cones_ok = cones_ok and report.passed
    passed = worst_residual <= 1e-8 and worst_defect <= 1e-8 and cones_ok
    return Check("sepmap", passed, {"residual": worst_residual, "generating": worst_defect, "cones": cones_ok})


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def build_markdown_report(checks: list[Check]) -> str:
    passed = sum(1 for c in checks if c.passed)
    lines = [
        "# Acceptance Report",
        "",
        f"- Generated: {datetime.now().isoformat(timespec='seconds')}",
        f"- Passed: {passed}/{len(checks)}",
        "",
        "| check | pass | detail |",
        "|---|---|---|",
    ]
    for check in checks:
        detail = ", ".join(f"{k}={_fmt(v)}" for k, v in check.detail.items())
        lines.append(f"| {check.name} | {'yes' if check.passed else 'NO'} | {detail} |")
    lines.append("")
    return "\n".join(lines)


def write_report(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8")


async def main() -> int:
    args = parse_args()
    rng = np.random.default_rng(args.seed)
    checks = await check_standard_shadowing()
    checks += [check_period_two(), check_stable_decay(), check_locality(rng, args.limit), check_entropy()]
    checks += check_billiard()
    checks.append(check_sepmap(rng, args.limit))

    now = datetime.now().strftime("%Y%m%d_%H%M%S")
    md_path = Path(args.output_md) if args.output_md else Path(f"eval/reports/acceptance_{now}.md")
    json_path = Path(args.output_json) if args.output_json else Path(f"eval/reports/acceptance_{now}.json")

    write_report(md_path, build_markdown_report(checks))
    write_report(
        json_path,
        json.dumps({"seed": args.seed, "checks": [asdict(c) for c in checks]}, ensure_ascii=False, indent=2),
    )

    failed = [c.name for c in checks if not c.passed]
    print(f"[acceptance] passed={len(checks) - len(failed)}/{len(checks)} failed={','.join(failed) or '-'}")
    print(f"[acceptance] markdown={md_path}")
    print(f"[acceptance] json={json_path}")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(asyncio.run(main()))
