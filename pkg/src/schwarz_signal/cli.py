"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 physics-domain error.
"""

import argparse
import json
import math
import sys

import jsonschema

from . import catalog, engine, signal
from .errors import ConfigError, PhysicsDomainError, SchwarzSignalError
from .series import MODES

EXIT_OK, EXIT_CONFIG, EXIT_PHYSICS = 0, 1, 2
OUTPUTS = ("series", "spectrum", "chirpfit", "timemap")

_NUM = {"type": "number"}
_BODY = {
    "type": "object",
    "properties": {"name": {"type": "string"}, "mass": _NUM, "radius": _NUM,
                   "alpha": {"type": ["number", "null"]}},
    "required": ["name", "mass", "radius"],
    "additionalProperties": False,
}
_SCENARIO = {
    "type": "object",
    "properties": {
        "id": {"type": "string"},
        "kind": {"enum": ["straight", "conic", "interstellar", "static"]},
        "bodies": {"type": "array", "items": _BODY, "minItems": 1, "maxItems": 2},
        "r1": _NUM,
        "trajectory": {"type": "object", "additionalProperties": _NUM},
        "duration": _NUM,
        "resolution": {"type": "integer"},
    },
    "required": ["kind", "bodies", "r1", "trajectory"],
    "additionalProperties": False,
}
CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "scenario": {"oneOf": [{"type": "string"}, _SCENARIO]},
        "duration": {"type": "number", "exclusiveMinimum": 0},
        "samples": {"type": "integer", "minimum": 2},
        "signal": {
            "type": "object",
            "properties": {"tone_hz": {"type": "number", "exclusiveMinimum": 0},
                           "input_csv": {"type": "string"}},
            "maxProperties": 1,
            "additionalProperties": False,
        },
        "outputs": {"type": "array", "items": {"enum": list(OUTPUTS)}, "uniqueItems": True},
        "mode": {"enum": list(MODES)},
        "threshold_db": _NUM,
        "window": {"enum": ["rect", "hann"]},
        "substeps": {"type": "integer", "minimum": 1},
        "out": {"type": "string"},
    },
    "required": ["scenario"],
    "additionalProperties": False,
}


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors, not the physics exit code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def validate_config(cfg):
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config {where}: {exc.message}") from None
    return cfg


def load_config(path):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r}: {exc}") from None
    return validate_config(cfg)


def resolve_scenario(scenario, duration=None, samples=None):
    """A ``ScenarioPreset`` from a preset id or an inline document.

    Inline documents may leave ``duration`` and ``resolution`` to the run
    configuration.
    """
    if isinstance(scenario, str):
        return catalog.preset(scenario)
    doc = {"id": "custom"}
    if duration is not None:
        doc["duration"] = duration
    if samples is not None:
        doc["resolution"] = samples
    return catalog.ScenarioPreset.from_dict({**doc, **scenario})


def _config_from_args(args):
    if args.config:
        cfg = load_config(args.config)
    elif args.preset:
        cfg = {"scenario": args.preset}
    else:
        raise ConfigError("one of --preset or --config is required")
    for key in ("duration", "samples", "mode", "threshold_db", "window", "substeps", "out"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if getattr(args, "tone_hz", None) is not None:
        cfg["signal"] = {"tone_hz": args.tone_hz}
    if getattr(args, "input_csv", None) is not None:
        cfg["signal"] = {"input_csv": args.input_csv}
    return validate_config(cfg)


def _series(cfg):
    p = resolve_scenario(cfg["scenario"], cfg.get("duration"), cfg.get("samples"))
    return engine.build_series(p, cfg.get("duration", p.duration), cfg.get("samples", p.resolution),
                               substeps=cfg.get("substeps"))


def _emit_csv(writer, out):
    if out is None:
        sys.stdout.write(writer(None))
    else:
        writer(out)


def _signal_for(cfg, series, mode):
    sig = cfg.get("signal", {})
    if "input_csv" in sig:
        try:
            f1 = signal.SignalBuffer.from_csv(sig["input_csv"])
        except (OSError, ValueError) as exc:
            raise ConfigError(f"input signal {sig['input_csv']!r}: {exc}") from None
        return signal.warp_sampled(f1, series, mode)
    tone = sig.get("tone_hz")
    if tone is None:
        tone = 1.0 / series.step / 2.5
    return signal.warp_tone(2.0 * math.pi * tone, series, mode)


def run_spectra(cfg, series):
    modes = [cfg["mode"]] if "mode" in cfg else list(MODES)
    threshold = cfg.get("threshold_db", 20.0)
    out = cfg.get("out")
    summary = {}
    for mode in modes:
        buf = _signal_for(cfg, series, mode)
        rep = signal.spectrum(buf, threshold, cfg.get("window"))
        del buf
        summary[mode] = rep.summary()
        if out is not None:
            rep.to_csv(f"{out}_{mode}.csv")
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(f"{out}_summary.json", "w") as fh:
            fh.write(text)
    return summary


def run_chirpfit(cfg, series):
    buf = _signal_for(cfg, series, cfg.get("mode", "full"))
    fit = signal.chirp_fit(buf)
    return {"f0": fit.f0, "rate": fit.rate, "sweep_rate": fit.sweep_rate, "residual": fit.residual}


def write_timemap(series, dest):
    data = engine.timemap_table(series)
    return signal._write_csv(dest, ("T", "tau", "tau_minus_T"), data)


def cmd_fsp(cfg):
    series = _series(cfg)
    _emit_csv(series.to_csv, cfg.get("out"))


def cmd_warp_spectrum(cfg):
    run_spectra(cfg, _series(cfg))


def cmd_timemap(cfg):
    series = _series(cfg)
    _emit_csv(lambda d: write_timemap(series, d), cfg.get("out"))


def cmd_run(cfg):
    outputs = cfg.get("outputs", ["series"])
    out = cfg.get("out")
    if out is None and len(outputs) > 1:
        raise ConfigError("several outputs need an 'out' prefix")
    series = _series(cfg)
    for kind in outputs:
        if kind == "series":
            _emit_csv(series.to_csv, None if out is None else f"{out}_series.csv")
        elif kind == "timemap":
            _emit_csv(lambda d: write_timemap(series, d), None if out is None else f"{out}_timemap.csv")
        elif kind == "spectrum":
            run_spectra(cfg, series)
        else:
            text = json.dumps(run_chirpfit(cfg, series), indent=2, sort_keys=True) + "\n"
            if out is None:
                sys.stdout.write(text)
            else:
                with open(f"{out}_chirpfit.json", "w") as fh:
                    fh.write(text)


def cmd_presets(args):
    if args.json:
        sys.stdout.write(json.dumps([p.to_dict() for p in catalog.builtin_presets()], indent=2) + "\n")
        return
    for p in catalog.builtin_presets():
        bodies = "->".join(b.name for b in p.bodies)
        sys.stdout.write(f"{p.id:20s} {p.kind:13s} {bodies:28s} {p.duration:12.6g} s  {p.resolution} samples\n")


def build_parser():
    ap = _Parser(prog="schwarz-signal",
                 description="Frequency shifts and signal warping in Schwarzschild spacetime.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, signal_opts=False):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--preset", help="builtin scenario id (see 'presets')")
        src.add_argument("--config", help="JSON run configuration")
        p.add_argument("--duration", type=float, help="receiver proper-time span (s)")
        p.add_argument("--samples", type=int, help="number of grid samples")
        p.add_argument("--substeps", type=int, help="RK4 steps per grid interval")
        p.add_argument("--out", help="output path (stdout if omitted)")
        if signal_opts:
            tone = p.add_mutually_exclusive_group()
            tone.add_argument("--tone-hz", type=float, help="input tone (default: sample rate / 2.5)")
            tone.add_argument("--input-csv", help="input signal as tau,re,im CSV")
            p.add_argument("--mode", choices=MODES, help="single channel mode (default: all three)")
            p.add_argument("--threshold-db", type=float, help="occupied-bandwidth threshold (default 20)")
            p.add_argument("--window", choices=["rect", "hann"])

    common(sub.add_parser("fsp", help="write the FSP series as CSV"))
    common(sub.add_parser("warp-spectrum", help="spectra of a warped signal per channel mode"),
           signal_opts=True)
    common(sub.add_parser("timemap", help="write T, tau, tau-T as CSV"))
    run = sub.add_parser("run", help="execute a JSON run configuration")
    run.add_argument("config")
    pre = sub.add_parser("presets", help="list builtin presets")
    pre.add_argument("--json", action="store_true", help="dump presets as JSON")
    return ap


_COMMANDS = {"fsp": cmd_fsp, "warp-spectrum": cmd_warp_spectrum, "timemap": cmd_timemap}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "presets":
            cmd_presets(args)
        elif args.command == "run":
            cmd_run(load_config(args.config))
        else:
            _COMMANDS[args.command](_config_from_args(args))
    except PhysicsDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except (SchwarzSignalError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BrokenPipeError:  # pragma: no cover
        return EXIT_OK
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
