"""Command-line entry points: `run` for one experiment, `sweep` for a
batch/memory grid.

A run starts from the shipped per-environment config (or --config FILE)
and applies any flag overrides on top, so the full resolved spec always
lands in the output directory as config.json for exact reruns.
"""

import argparse
import json
import sys
from dataclasses import replace
from importlib import resources

from .envs import ENV_NAMES
from .errors import ConfigError
from .runner import ExperimentSpec, run_experiment, run_sweep

__all__ = ["main", "load_default_spec"]


def load_default_spec(env):
    """The shipped config for an environment name."""
    ref = resources.files("hdql").joinpath("configs", f"{env}.json")
    try:
        text = ref.read_text()
    except FileNotFoundError as exc:
        raise ConfigError(f"no shipped config for env {env!r}") from exc
    return ExperimentSpec.from_dict(json.loads(text))


def _load_spec_file(path):
    try:
        with open(path) as f:
            doc = json.load(f)
    except OSError as exc:
        raise IOError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    return ExperimentSpec.from_dict(doc)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _apply_overrides(spec, args):
    agent = spec.agent
    if args.dim is not None:
        agent = replace(agent, dim=args.dim)
    if getattr(args, "batch", None) is not None and isinstance(args.batch, int):
        agent = replace(agent, batch_size=args.batch)
    if getattr(args, "memory", None) is not None and isinstance(args.memory, int):
        agent = replace(agent, memory_capacity=None if args.memory == 0 else args.memory)
    if args.seed is not None:
        agent = replace(agent, seed=args.seed)
    spec = replace(spec, agent=agent)
    if args.episodes is not None:
        spec = replace(spec, episodes=args.episodes)
    if args.trials is not None:
        spec = replace(spec, trials=args.trials)
    if args.out is not None:
        spec = replace(spec, out=args.out)
    return spec


def _base_spec(args):
    if args.config is not None:
        spec = _load_spec_file(args.config)
        if spec.env != args.env:
            # two explicit, conflicting env choices; refuse rather than pick one
            raise ConfigError(
                f"--env {args.env} conflicts with config file env {spec.env!r}")
        return spec
    return load_default_spec(args.env)


def _print_trial_lines(results):
    for t in results["trial_summaries"]:
        if t["failed"]:
            print(f"  trial {t['trial']}: FAILED at episode "
                  f"{t['failure']['episode']} ({t['failure']['message']})")
        else:
            goal = (f"goal at episode {t['goal_episode']}"
                    if t["goal_episode"] else "goal not reached")
            trailing = t["final_trailing_mean"]
            trail_txt = f"{trailing:.1f}" if trailing is not None else "n/a"
            print(f"  trial {t['trial']}: {goal}, final trailing mean {trail_txt}")


def _cmd_run(args):
    spec = _apply_overrides(_base_spec(args), args)
    spec = replace(spec, sweep_batch=None, sweep_memory=None)
    results = run_experiment(spec)
    agg = results["aggregate"]
    print(f"{spec.env}: {agg['trials_reached_goal']}/{agg['trials']} trials "
          f"reached the goal")
    _print_trial_lines(results)
    if spec.out:
        print(f"wrote episodes.csv / summary.json / config.json to {spec.out}")
    return 0


def _cmd_sweep(args):
    spec = _apply_overrides(_base_spec(args), args)
    if args.batch is not None:
        spec = replace(spec, sweep_batch=args.batch)
    if args.memory is not None:
        spec = replace(spec, sweep_memory=[None if m == 0 else m
                                                 for m in args.memory])
    results = run_sweep(spec)
    for cell in results["cells"]:
        tag = " (online regime)" if cell["online_regime"] else ""
        if "error" in cell:
            print(f"{cell['label']}{tag}: ERROR {cell['error']}")
        else:
            agg = cell["aggregate"]
            trail = agg["mean_final_trailing"]
            trail_txt = f"{trail:.1f}" if trail is not None else "n/a"
            print(f"{cell['label']}{tag}: mean final trailing {trail_txt}, "
                  f"{agg['trials_reached_goal']}/{agg['trials']} reached goal")
    if spec.out:
        print(f"wrote per-cell outputs and sweep_summary.json to {spec.out}")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="hdql",
        description="Hyperdimensional Q-learning experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--env", required=True, choices=ENV_NAMES)
        p.add_argument("--config", help="experiment spec JSON (default: shipped per-env config)")
        p.add_argument("--dim", type=int, help="hypervector dimension override")
        p.add_argument("--episodes", type=int)
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int, help="base seed; trial i uses seed+i")
        p.add_argument("--out", help="output directory for CSV/JSON files")

    run_p = sub.add_parser("run", help="run one experiment")
    common(run_p)
    run_p.add_argument("--batch", type=int, help="replay batch size")
    run_p.add_argument("--memory", type=int,
                       help="replay capacity; 0 means unlimited")

    sweep_p = sub.add_parser("sweep", help="run a batch/memory grid")
    common(sweep_p)
    sweep_p.add_argument("--batch", type=_int_list,
                         help="comma-separated batch sizes, e.g. 2,4,8")
    sweep_p.add_argument("--memory", type=_int_list,
                         help="comma-separated capacities; 0 means unlimited")
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_sweep(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IOError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
