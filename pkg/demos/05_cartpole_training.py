"""Watch the agent learn CartPole from scratch.

Desk-scale settings (D=2000, 80 episodes, one trial) so the script finishes
in well under a minute; the shipped experiment config scales the same recipe
to D=6000, 200 episodes, 10 trials.

Run:  python3 demos/05_cartpole_training.py
"""
import numpy as np

from hdql import AgentConfig, GoalSpec, ExperimentSpec, run_experiment

spec = ExperimentSpec(
    env="cartpole",
    agent=AgentConfig(dim=2000, beta=0.05, gamma=0.99, epsilon_start=1.0,
                      epsilon_decay=0.95, epsilon_min=0.01, sync_period=2,
                      batch_size=4, memory_capacity=None, seed=42),
    episodes=80,
    trials=1,
    goal=GoalSpec("episodic", 200.0, window=20),
    measure_time=True,
)

print("training one CartPole trial (D=2000, 80 episodes)...\n")
results = run_experiment(spec)
records = results["records"]

print(f"{'episode':>7} | {'reward':>7} | {'trailing-20':>11} | {'epsilon':>7}")
for r in records:
    if r.episode % 5 == 0 or r.goal and r.episode == results["trial_summaries"][0]["goal_episode"]:
        bar = "#" * int(min(r.reward, 600) / 12)
        print(f"{r.episode:>7} | {r.reward:>7.0f} | {r.trailing_mean:>11.1f} | "
              f"{r.epsilon:>7.3f} {bar}")

summary = results["trial_summaries"][0]
print(f"\nfirst episode with reward > 200: {summary['goal_episode']}")
print(f"trailing-20 mean at the end: {summary['final_trailing_mean']:.1f}")
print(f"agent compute time: {summary['wall_seconds']:.1f}s "
      f"({1000 * summary['wall_seconds'] / sum(r.steps for r in records):.2f} ms/step)")
print("\nepisodes cap at 1000 steps, so trailing means can exceed the goal by far.")
