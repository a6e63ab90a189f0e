import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from anti_orbits.artifacts import write_json_report, write_orbit_csv, write_sweep_csv
from anti_orbits.cli.run_config import (
    SWEEP_PARAMS,
    ConfigError,
    RunConfig,
    absolute_points,
    apply_override,
    build_run_config,
    describe_validation,
    load_code,
    load_json,
    validate_config,
    with_param,
)
from anti_orbits.config import Settings, get_settings
from anti_orbits.entropy.spectral import spectral_report
from anti_orbits.entropy.standard import standard_map_entropy_bound
from anti_orbits.errors import AntiOrbitsError, CertificationError, ModelInvariantError
from anti_orbits.models.billiard import reflection_check
from anti_orbits.models.kick import kick_residual
from anti_orbits.models.registry import (
    BilliardModel,
    BuiltModel,
    KickModel,
    ModelConfig,
    SepMapModel,
    StandardModel,
)
from anti_orbits.models.sepmap import sepmap_generating_defect
from anti_orbits.service.certifier import error_payload
from anti_orbits.workflow.certification import CertificationJob, CertificationResult, CertificationWorkflow

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CERTIFICATION = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anti-orbits",
        description="Shadow symbolic codes of near-anti-integrable maps and certify the orbits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("shadow", "Shadow one code; writes orbit.csv and report.json."),
        ("verify", "Shadow and run the cone check; writes hyperbolicity.json."),
        ("entropy", "Entropy lower bound; writes entropy.json."),
        ("sweep", "Shadow one code over a parameter grid; writes sweep.csv."),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", default="", help="JSON run config; flags override its keys.")
        cmd.add_argument("--model", default="", help="Built-in model name or path of a JSON model spec.")
        cmd.add_argument("--code", default="", help="Code JSON file.")
        cmd.add_argument("--lambda", dest="coupling", type=float, default=None, help="Coupling lambda.")
        cmd.add_argument("--sigma", type=float, default=None, help="Uniqueness radius of the standard map.")
        cmd.add_argument("--width", type=float, default=None, help="Strip width of the billiard.")
        cmd.add_argument("--out", default="", help="Output directory (default: out).")
        cmd.add_argument("--seed", type=int, default=None, help="Seed of the randomized checks.")
        cmd.add_argument("--grid", default="", help='Sweep grid "start:stop:step".')
    check = sub.add_parser("validate", help="Check a JSON run config without running it.")
    check.add_argument("config", help="JSON run config.")
    return parser


def _model_data(value: Any) -> Any:
    if isinstance(value, str) and (value.endswith(".json") or Path(value).is_file()):
        return load_json(value)
    if isinstance(value, str):
        return {"model": value}
    return value


def config_from_args(args: argparse.Namespace) -> RunConfig:
    data: dict[str, Any] = {}
    if args.config:
        loaded = load_json(args.config)
        if not isinstance(loaded, dict):
            raise ConfigError(f"run config must be a JSON object: {args.config}")
        data.update(loaded)
    data["command"] = args.command
    if args.model:
        data["model"] = args.model
    if "model" not in data:
        raise ConfigError("a model is required (--model or the config's 'model' key)")
    model = _model_data(data["model"])
    if not isinstance(model, dict):
        raise ConfigError("model must be a name or a JSON object")
    for name, value in (("lambda", args.coupling), ("sigma", args.sigma), ("width", args.width)):
        if value is not None:
            model = apply_override(model, name, value)
    data["model"] = model
    for key in ("code", "out", "grid"):
        if getattr(args, key):
            data[key] = getattr(args, key)
    if args.seed is not None:
        data["seed"] = args.seed
    return build_run_config(data)


class Runner:
    """Executes one RunConfig and writes its artifacts."""

    def __init__(self, config: RunConfig, settings: Settings | None = None) -> None:
        self.config = config
        self.settings = settings or get_settings()
        self.workflow = CertificationWorkflow(self.settings)
        self.out = Path(config.out)

    def run(self) -> int:
        logger.info("cli.run command=%s model=%s out=%s", self.config.command, self.config.model.model, self.out)
        handler = getattr(self, f"_{self.config.command}")
        return handler()

    def _job(self, model: ModelConfig, built: BuiltModel | None, *, verify: bool) -> tuple[CertificationJob, Any]:
        code, base = load_code(model, built, self.config.code)
        job = CertificationJob(
            name=model.model,
            code=code,
            system=None if built is None else built.system,
            params=model.params() if isinstance(model, StandardModel) else None,
            verify=verify,
            entropy=False,
            seed=self.config.seed,
        )
        return job, base

    @staticmethod
    def _build(model: ModelConfig) -> BuiltModel | None:
        return None if isinstance(model, StandardModel) else model.build()

    def _certify(self, model: ModelConfig, *, verify: bool) -> tuple[CertificationResult, BuiltModel | None, Any]:
        built = self._build(model)
        job, base = self._job(model, built, verify=verify)
        return asyncio.run(self.workflow.run(job)), built, base

    def _write_failure(self, name: str, exc: CertificationError) -> int:
        write_json_report(self.out / name, {"status": "certification_failed", "error": error_payload(exc)})
        print(f"[anti-orbits] certification failed: {exc.category}: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION

    def _shadow(self) -> int:
        model = self.config.model
        try:
            result, built, base = self._certify(model, verify=False)
        except CertificationError as exc:
            return self._write_failure("report.json", exc)
        points = absolute_points(model, built, result.orbit, base)
        report = {
            "status": "ok",
            "model": model.model_dump(),
            "shadow": {**result.orbit.as_meta(), **result.orbit.extras},
            "checks": model_checks(model, built, result, points, base),
        }
        csv_path = write_orbit_csv(self.out / "orbit.csv", points, result.residuals)
        json_path = write_json_report(self.out / "report.json", report)
        print(f"[anti-orbits] orbit={csv_path}")
        print(f"[anti-orbits] report={json_path}")
        return EXIT_OK

    def _verify(self) -> int:
        model = self.config.model
        try:
            result, _, _ = self._certify(model, verify=True)
        except CertificationError as exc:
            return self._write_failure("hyperbolicity.json", exc)
        cones = result.cones
        report = {
            "status": "ok" if result.certified else "certification_failed",
            **cones.as_meta(),
            "orbit": result.orbit.as_meta(),
        }
        path = write_json_report(self.out / "hyperbolicity.json", report)
        print(f"[anti-orbits] hyperbolicity={path} pass={cones.passed} tier={cones.tier}")
        return EXIT_OK if result.certified else EXIT_CERTIFICATION

    def _entropy(self) -> int:
        model = self.config.model
        try:
            report = self.entropy_meta(model)
        except CertificationError as exc:
            return self._write_failure("entropy.json", exc)
        path = write_json_report(self.out / "entropy.json", report)
        print(f"[anti-orbits] entropy={path}")
        return EXIT_OK

    def entropy_meta(self, model: ModelConfig, built: BuiltModel | None = None) -> dict[str, Any]:
        if isinstance(model, StandardModel):
            return standard_map_entropy_bound(model.coupling, model.sigma).as_meta()
        built = built or model.build()
        return spectral_report(built.system.graph, self.settings).as_meta()

    def _sweep(self) -> int:
        model = self.config.model
        param = SWEEP_PARAMS[model.model]
        grid = self.config.grid_values()
        models = [with_param(model, param, value) for value in grid]
        rows = asyncio.run(self._sweep_rows(grid, models))
        path = write_sweep_csv(self.out / "sweep.csv", rows)
        print(f"[anti-orbits] sweep={path} points={len(rows)} param={param}")
        return EXIT_OK

    async def _sweep_rows(self, grid: list[float], models: list[ModelConfig]) -> list[dict[str, Any]]:
        return list(await asyncio.gather(*(self._sweep_point(v, m) for v, m in zip(grid, models))))

    async def _sweep_point(self, value: float, model: ModelConfig) -> dict[str, Any]:
        row: dict[str, Any] = {"param": value, "converged": False}
        try:
            built = self._build(model)
            job, _ = self._job(model, built, verify=True)
            result = await self.workflow.run(job)
        except (CertificationError, ModelInvariantError) as exc:
            logger.info("sweep.point_failed param=%g type=%s message=%s", value, exc.__class__.__name__, exc)
            return row
        orbit = result.orbit
        row.update(
            converged=True,
            residual=orbit.residual,
            rho=orbit.rho,
            contraction=orbit.contraction_estimate,
            mu=result.cones.mu if result.cones is not None else None,
        )
        try:
            meta = self.entropy_meta(model, built)
            row["entropy_bound"] = meta.get("bound_nats", meta.get("entropy_nats"))
        except CertificationError:
            row["entropy_bound"] = None
        return row


def model_checks(
    model: ModelConfig,
    built: BuiltModel | None,
    result: CertificationResult,
    points: Any,
    base: Any,
) -> dict[str, Any]:
    """Model-specific defects of a shadowed orbit in its original coordinates."""
    if isinstance(model, KickModel):
        return {"kick_residual": kick_residual(built.spec, points)}
    if isinstance(model, BilliardModel):
        return {"reflection_defect": reflection_check(result.orbit, built.system, built.spec, base)}
    if isinstance(model, SepMapModel):
        defect = sepmap_generating_defect(result.orbit, built.system, built.spec)
        return {"momentum_defect": defect.momentum, "position_defect": defect.position, "signs_ok": defect.signs_ok}
    return {}


def _validate(path: str) -> int:
    diagnostics = validate_config(path)
    for line in diagnostics:
        print(f"[anti-orbits] {line}")
    if not diagnostics:
        print("[anti-orbits] config ok")
    return EXIT_USAGE if diagnostics else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
    )
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        return _validate(args.config)
    try:
        config = config_from_args(args)
        return Runner(config, settings).run()
    except ValidationError as exc:
        for line in describe_validation(exc):
            print(f"[anti-orbits] usage error: {line}", file=sys.stderr)
        return EXIT_USAGE
    except CertificationError as exc:
        print(f"[anti-orbits] certification failed: {exc.category}: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION
    except AntiOrbitsError as exc:
        invariant = getattr(exc, "invariant", None)
        prefix = f"invariant {invariant}: " if invariant else ""
        print(f"[anti-orbits] usage error: {prefix}{exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
