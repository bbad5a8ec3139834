"""Experiment orchestration: seeded trials, goal tracking, file outputs.

A run is a list of independent trials; trial i gets agent seed
base_seed + i and derives its environment stream from that agent seed, so
the whole experiment is a pure function of its spec.  Each episode lands
in the CSV as one row

    trial,episode,reward,steps,epsilon,trailing_mean,wall_ms,goal

with trial and episode indices 1-based, wall_ms the trial's cumulative
agent compute time (exactly 0.0 when measure_time is off, which is what
makes reruns byte-identical), and goal an instantaneous 0/1 flag: episodic
goals compare the episode's reward strictly above the threshold, trailing
goals compare the window mean at-or-above it.

A diverged trial is recorded as failed with its diagnostic context and the
run continues with the remaining trials.
"""

import json
import os
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .agent import AgentConfig, HDQAgent
from .envs import ENV_NAMES, make_env
from .errors import ConfigError, DivergenceError

__all__ = ["GoalSpec", "ExperimentSpec", "EpisodeRecord", "run_trial",
           "run_experiment", "run_sweep", "emit_outputs", "CSV_HEADER"]

CSV_HEADER = "trial,episode,reward,steps,epsilon,trailing_mean,wall_ms,goal"

GOAL_MODES = ("episodic", "trailing")


@dataclass(frozen=True)
class GoalSpec:
    """When an episode counts as reaching the goal.

    episodic: this episode's reward is strictly above the threshold.
    trailing: the mean over the last `window` episodes is at or above it.
    """

    mode: str
    threshold: float
    window: int = 1

    def validate(self, problems):
        if self.mode not in GOAL_MODES:
            problems.append(f"goal mode must be one of {GOAL_MODES}, got {self.mode!r}")
        if not np.isfinite(self.threshold):
            problems.append(f"goal threshold must be finite, got {self.threshold!r}")
        if not isinstance(self.window, (int, np.integer)) or self.window < 1:
            problems.append(f"goal window must be a positive integer, got {self.window!r}")

    def reached(self, reward, trailing_mean):
        if self.mode == "episodic":
            return reward > self.threshold
        return trailing_mean >= self.threshold

    def to_dict(self):
        return {"mode": self.mode, "threshold": self.threshold, "window": self.window}

    @classmethod
    def from_dict(cls, doc):
        unknown = set(doc) - {"mode", "threshold", "window"}
        if unknown:
            raise ConfigError(f"unknown goal keys: {sorted(unknown)}")
        try:
            return cls(doc["mode"], doc["threshold"], doc.get("window", 1))
        except KeyError as exc:
            raise ConfigError(f"goal definition missing field {exc}") from exc


@dataclass(frozen=True)
class EpisodeRecord:
    trial: int
    episode: int
    reward: float
    steps: int
    epsilon: float
    trailing_mean: float
    wall_ms: float
    goal: int

    def csv_row(self):
        return (f"{self.trial},{self.episode},{self.reward!r},{self.steps},"
                f"{self.epsilon!r},{self.trailing_mean!r},{self.wall_ms!r},{self.goal}")


@dataclass
class ExperimentSpec:
    """Everything a run needs; serializes to config.json and back."""

    env: str
    agent: AgentConfig = field(default_factory=AgentConfig)
    episodes: int = 100
    trials: int = 10
    goal: GoalSpec = None
    bandwidths: object = None       # None -> encoder default; scalar or list
    distribution: str = "gaussian"
    measure_time: bool = True
    env_params: dict = field(default_factory=dict)
    sweep_batch: list = None
    sweep_memory: list = None
    out: str = None

    def validate(self):
        problems = []
        if self.env not in ENV_NAMES:
            problems.append(f"env must be one of {ENV_NAMES}, got {self.env!r}")
        try:
            self.agent.validate()
        except ConfigError as exc:
            problems.append(str(exc))
        if not isinstance(self.episodes, (int, np.integer)) or self.episodes < 0:
            problems.append(f"episodes must be a non-negative integer, got {self.episodes!r}")
        if not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            problems.append(f"trials must be a positive integer, got {self.trials!r}")
        if self.goal is None:
            problems.append("goal definition is required")
        else:
            self.goal.validate(problems)
        if self.distribution not in ("gaussian", "uniform"):
            problems.append(f"distribution must be gaussian or uniform, got {self.distribution!r}")
        if self.sweep_batch is not None:
            if not isinstance(self.sweep_batch, (list, tuple)) or not self.sweep_batch:
                problems.append("sweep_batch must be a non-empty list when present")
            elif not all(isinstance(b, (int, np.integer)) and b >= 1
                         for b in self.sweep_batch):
                problems.append(f"sweep_batch values must be positive integers, "
                                f"got {self.sweep_batch!r}")
        if self.sweep_memory is not None:
            if not isinstance(self.sweep_memory, (list, tuple)) or not self.sweep_memory:
                problems.append("sweep_memory must be a non-empty list when present")
            elif not all(m is None or (isinstance(m, (int, np.integer)) and m >= 1)
                         for m in self.sweep_memory):
                problems.append(f"sweep_memory values must be positive integers or "
                                f"null, got {self.sweep_memory!r}")
        if problems:
            raise ConfigError("invalid experiment spec: " + "; ".join(problems))
        return self

    def to_dict(self):
        return {
            "format": "hdql-experiment-v1",
            "env": self.env,
            "env_params": dict(self.env_params),
            "episodes": self.episodes,
            "trials": self.trials,
            "goal": self.goal.to_dict() if self.goal else None,
            "agent": self.agent.to_dict(),
            "bandwidths": self.bandwidths,
            "distribution": self.distribution,
            "measure_time": self.measure_time,
            "sweep_batch": self.sweep_batch,
            "sweep_memory": self.sweep_memory,
            "out": None,  # never baked in: rerunning must not clobber old output
        }

    @classmethod
    def from_dict(cls, doc):
        if not isinstance(doc, dict):
            raise ConfigError("experiment spec must be a JSON object")
        doc = dict(doc)
        fmt = doc.pop("format", "hdql-experiment-v1")
        if fmt != "hdql-experiment-v1":
            raise ConfigError(f"unknown experiment format {fmt!r}")
        known = {"env", "env_params", "episodes", "trials", "goal", "agent",
                 "bandwidths", "distribution", "measure_time",
                 "sweep_batch", "sweep_memory", "out"}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown experiment keys: {sorted(unknown)}")
        if "env" not in doc:
            raise ConfigError("experiment spec missing field 'env'")
        goal = doc.get("goal")
        return cls(
            env=doc["env"],
            agent=AgentConfig.from_dict(doc.get("agent", {})),
            episodes=doc.get("episodes", 100),
            trials=doc.get("trials", 10),
            goal=GoalSpec.from_dict(goal) if goal else None,
            bandwidths=doc.get("bandwidths"),
            distribution=doc.get("distribution", "gaussian"),
            measure_time=doc.get("measure_time", True),
            env_params=doc.get("env_params") or {},
            sweep_batch=doc.get("sweep_batch"),
            sweep_memory=doc.get("sweep_memory"),
            out=doc.get("out"),
        )


def _build_trial(spec, trial_index):
    cfg = replace(spec.agent, seed=spec.agent.seed + trial_index)
    env = make_env(spec.env, **spec.env_params)
    agent = HDQAgent.for_env(env, cfg, bandwidths=spec.bandwidths,
                             distribution=spec.distribution)
    env.reseed(agent.env_seed())
    return agent, env


def run_trial(spec, trial_index):
    """One seeded trial -> (records, trial summary).  Divergence is caught
    and recorded; other faults propagate."""
    agent, env = _build_trial(spec, trial_index)
    records = []
    window = deque(maxlen=spec.goal.window)
    wall_seconds = 0.0
    goal_episode = None
    failure = None

    for ep in range(1, spec.episodes + 1):
        try:
            result = agent.run_episode(env, measure_time=spec.measure_time)
        except DivergenceError as exc:
            failure = {"episode": ep, "context": exc.context, "message": str(exc)}
            break
        window.append(result.total_reward)
        trailing = float(np.mean(window))
        wall_seconds += result.agent_seconds
        hit = spec.goal.reached(result.total_reward, trailing)
        if hit and goal_episode is None:
            goal_episode = ep
        records.append(EpisodeRecord(
            trial=trial_index + 1, episode=ep, reward=result.total_reward,
            steps=result.steps, epsilon=result.epsilon, trailing_mean=trailing,
            wall_ms=wall_seconds * 1000.0 if spec.measure_time else 0.0,
            goal=int(hit)))

    summary = {
        "trial": trial_index + 1,
        "seed": spec.agent.seed + trial_index,
        "episodes_run": len(records),
        "goal_episode": goal_episode,
        "final_trailing_mean": records[-1].trailing_mean if records else None,
        "wall_seconds": wall_seconds if spec.measure_time else None,
        "failed": failure is not None,
        "failure": failure,
    }
    return records, summary


def _prepare_outdir(path):
    """Create the output directory and prove it is writable before any
    training starts."""
    try:
        os.makedirs(path, exist_ok=True)
        probe = os.path.join(path, ".write-probe")
        with open(probe, "w") as f:
            f.write("ok")
        os.remove(probe)
    except OSError as exc:
        raise IOError(f"output path {path!r} is not writable: {exc}") from exc


def run_experiment(spec):
    """All trials of a spec -> results bundle; writes files when spec.out set."""
    spec.validate()
    if spec.out is not None:
        _prepare_outdir(spec.out)

    all_records = []
    trial_summaries = []
    for i in range(spec.trials):
        records, summary = run_trial(spec, i)
        all_records.extend(records)
        trial_summaries.append(summary)

    reached = [t["goal_episode"] for t in trial_summaries if t["goal_episode"]]
    finals = [t["final_trailing_mean"] for t in trial_summaries
              if t["final_trailing_mean"] is not None]
    walls = [t["wall_seconds"] for t in trial_summaries if t["wall_seconds"] is not None]
    aggregate = {
        "trials": spec.trials,
        "trials_reached_goal": len(reached),
        "trials_failed": sum(t["failed"] for t in trial_summaries),
        "mean_goal_episode": float(np.mean(reached)) if reached else None,
        "mean_final_trailing": float(np.mean(finals)) if finals else None,
        "mean_wall_seconds": float(np.mean(walls)) if walls else None,
    }
    results = {"spec": spec, "records": all_records,
               "trial_summaries": trial_summaries, "aggregate": aggregate}
    if spec.out is not None:
        emit_outputs(results, spec.out)
    return results


def emit_outputs(results, path):
    """Write episodes.csv, summary.json, and config.json under path."""
    _prepare_outdir(path)
    spec = results["spec"]

    rows = [CSV_HEADER]
    rows.extend(r.csv_row() for r in results["records"])
    with open(os.path.join(path, "episodes.csv"), "w") as f:
        f.write("\n".join(rows) + "\n")

    summary = {
        "format": "hdql-summary-v1",
        "version": __version__,
        "spec": spec.to_dict(),
        "trials": results["trial_summaries"],
        "aggregate": results["aggregate"],
    }
    with open(os.path.join(path, "summary.json"), "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")

    with open(os.path.join(path, "config.json"), "w") as f:
        json.dump(spec.to_dict(), f, indent=2, sort_keys=True)
        f.write("\n")


def run_sweep(spec):
    """Cartesian product over sweep_batch x sweep_memory, each cell an
    independent experiment; cell failures are isolated and recorded."""
    spec.validate()
    batches = spec.sweep_batch if spec.sweep_batch else [spec.agent.batch_size]
    memories = spec.sweep_memory if spec.sweep_memory else [spec.agent.memory_capacity]
    if spec.out is not None:
        _prepare_outdir(spec.out)

    cells = []
    for b in batches:
        for m in memories:
            label = f"batch{b}_mem{'inf' if m is None else m}"
            cell_spec = replace(
                spec,
                agent=replace(spec.agent, batch_size=b, memory_capacity=m),
                sweep_batch=None, sweep_memory=None,
                out=os.path.join(spec.out, label) if spec.out else None)
            cell = {"batch": b, "memory": m, "label": label,
                    "online_regime": b == m}
            try:
                results = run_experiment(cell_spec)
                cell["aggregate"] = results["aggregate"]
                cell["results"] = results
            except ConfigError:
                raise  # a bad axis value is a spec bug, not a cell failure
            except Exception as exc:  # pragma: no cover - depends on cell faults
                cell["error"] = f"{type(exc).__name__}: {exc}"
            cells.append(cell)

    matrix = {"format": "hdql-sweep-v1", "version": __version__,
              "spec": spec.to_dict(),
              "cells": [{k: v for k, v in c.items() if k != "results"}
                        for c in cells]}
    if spec.out is not None:
        with open(os.path.join(spec.out, "sweep_summary.json"), "w") as f:
            json.dump(matrix, f, indent=2, sort_keys=True)
            f.write("\n")
    return {"matrix": matrix, "cells": cells}
