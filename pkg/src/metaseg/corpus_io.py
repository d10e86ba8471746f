"""Corpus files and synthetic corpora.

Corpus JSON (UTF-8)::

    {"version": "1.0",
     "episodes": [{"id": "...", "goal": "...", "sub_goals": [...],
                   "actions": ["MoveAhead", ...], "subgoal_index": [...],
                   "poses": [[x, y], ...],            # optional, T+1 points
                   "goal_conditions": [true, ...],    # optional
                   "pred_path": [[x, y], ...], "ref_path": [[x, y], ...],
                   "pred_len": 12.0, "ref_len": 10.0}]}  # optional results

Action names are the exact, case-sensitive ``LowLevelAction`` names.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CorpusIOError, InvariantViolation, SchemaError
from .metrics import EpisodeResult
from .trajectory import ActionTrajectory, LowLevelAction, encode_actions

FORMAT_VERSION = "1.0"

_REQUIRED = ("id", "goal", "sub_goals", "actions", "subgoal_index")
_OPTIONAL = ("poses", "goal_conditions", "pred_path", "ref_path", "pred_len", "ref_len")
_ACTION_NAMES = {a.value: a for a in LowLevelAction}


@dataclass(frozen=True)
class Episode:
    id: str
    trajectory: ActionTrajectory
    pred_path: Optional[tuple] = None
    ref_path: Optional[tuple] = None
    pred_len: Optional[float] = None
    ref_len: Optional[float] = None

    @property
    def letters(self):
        return encode_actions(self.trajectory)

    def result(self) -> EpisodeResult:
        conds = self.trajectory.goal_conditions
        return EpisodeResult(
            goal_conditions=list(conds) if conds is not None else [],
            pred_path=self.pred_path,
            ref_path=self.ref_path,
            pred_length=self.pred_len,
            ref_length=self.ref_len,
        )


@dataclass(frozen=True)
class CorpusFile:
    episodes: tuple = ()
    version: str = FORMAT_VERSION

    def __len__(self):
        return len(self.episodes)

    def __iter__(self):
        return iter(self.episodes)

    @property
    def trajectories(self):
        return [ep.trajectory for ep in self.episodes]


def _points(value, name, i):
    if not isinstance(value, list):
        raise SchemaError(name, i, "expected a list of [x, y] points")
    pts = []
    for p in value:
        if (
            not isinstance(p, list)
            or len(p) != 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p)
        ):
            raise SchemaError(name, i, f"bad point {p!r}")
        pts.append((float(p[0]), float(p[1])))
    return tuple(pts)


def _number(value, name, i):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise SchemaError(name, i, "expected a finite number")
    if value < 0:
        raise SchemaError(name, i, "must be >= 0")
    return float(value)


def _episode(obj, i) -> Episode:
    if not isinstance(obj, dict):
        raise SchemaError("episodes", i, "episode must be an object")
    for key in _REQUIRED:
        if key not in obj:
            raise SchemaError(key, i, "missing")
    unknown = sorted(set(obj) - set(_REQUIRED) - set(_OPTIONAL))
    if unknown:
        raise SchemaError(unknown[0], i, "unknown field")
    ep_id = obj["id"]
    if isinstance(ep_id, bool) or not isinstance(ep_id, (str, int)):
        raise SchemaError("id", i, "expected a string")
    if not isinstance(obj["goal"], str):
        raise SchemaError("goal", i, "expected a string")
    subs = obj["sub_goals"]
    if not isinstance(subs, list) or not all(isinstance(s, str) for s in subs):
        raise SchemaError("sub_goals", i, "expected a list of strings")
    acts = obj["actions"]
    if not isinstance(acts, list):
        raise SchemaError("actions", i, "expected a list of action names")
    actions = []
    for a in acts:
        if not isinstance(a, str) or a not in _ACTION_NAMES:
            raise SchemaError("actions", i, f"unknown action {a!r}")
        actions.append(_ACTION_NAMES[a])
    idx = obj["subgoal_index"]
    if not isinstance(idx, list) or not all(
        isinstance(k, int) and not isinstance(k, bool) for k in idx
    ):
        raise SchemaError("subgoal_index", i, "expected a list of integers")
    poses = _points(obj["poses"], "poses", i) if obj.get("poses") is not None else None
    conds = obj.get("goal_conditions")
    if conds is not None and (
        not isinstance(conds, list) or not all(isinstance(c, bool) for c in conds)
    ):
        raise SchemaError("goal_conditions", i, "expected a list of booleans")
    try:
        traj = ActionTrajectory(obj["goal"], subs, actions, idx, poses, conds)
    except InvariantViolation as exc:
        raise InvariantViolation(exc.reason, episode_index=i) from None
    extra = {}
    for key in ("pred_path", "ref_path"):
        if obj.get(key) is not None:
            extra[key] = _points(obj[key], key, i)
    for key in ("pred_len", "ref_len"):
        if obj.get(key) is not None:
            extra[key] = _number(obj[key], key, i)
    return Episode(str(ep_id), traj, **extra)


def parse_corpus(data) -> CorpusFile:
    if not isinstance(data, dict):
        raise SchemaError("<root>", None, "top level must be an object")
    version = data.get("version")
    if not isinstance(version, str):
        raise SchemaError("version", None, "missing or not a string")
    episodes = data.get("episodes")
    if not isinstance(episodes, list):
        raise SchemaError("episodes", None, "missing or not a list")
    return CorpusFile(tuple(_episode(e, i) for i, e in enumerate(episodes)), version)


def loads_corpus(text: str) -> CorpusFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("<json>", None, f"line {exc.lineno} col {exc.colno}: {exc.msg}") from None
    return parse_corpus(data)


def load_corpus(path) -> CorpusFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CorpusIOError(f"cannot read {path}: {exc.strerror or exc}") from None
    return loads_corpus(text)


def episode_to_json(ep: Episode) -> dict:
    t = ep.trajectory
    out = {
        "id": ep.id,
        "goal": t.goal_text,
        "sub_goals": list(t.sub_goals),
        "actions": [a.value for a in t.actions],
        "subgoal_index": list(t.subgoal_index),
    }
    if t.poses is not None:
        out["poses"] = [list(p) for p in t.poses]
    if t.goal_conditions is not None:
        out["goal_conditions"] = list(t.goal_conditions)
    for key in ("pred_path", "ref_path"):
        val = getattr(ep, key)
        if val is not None:
            out[key] = [list(p) for p in val]
    for key in ("pred_len", "ref_len"):
        val = getattr(ep, key)
        if val is not None:
            out[key] = val
    return out


def dumps_corpus(corpus: CorpusFile) -> str:
    data = {"version": corpus.version, "episodes": [episode_to_json(e) for e in corpus]}
    return json.dumps(data, indent=1) + "\n"


def save_corpus(corpus: CorpusFile, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_corpus(corpus))


# --- synthetic corpora -------------------------------------------------------

_NAV = (
    LowLevelAction.MoveAhead,
    LowLevelAction.RotateLeft,
    LowLevelAction.RotateRight,
    LowLevelAction.LookUp,
    LowLevelAction.LookDown,
)
_NAV_WEIGHTS = np.array([0.55, 0.15, 0.15, 0.075, 0.075])
_INTERACT = tuple(a for a in LowLevelAction if a.is_interaction)
_HEADINGS = ((0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (1.0, 0.0))  # N, W, S, E


def simulate_poses(actions, start=(0.0, 0.0)):
    """Grid positions visited by a trajectory: T+1 points, unit steps, 90 degree turns."""
    x, y = start
    h = 0
    poses = [(x, y)]
    for a in actions:
        if a is LowLevelAction.MoveAhead:
            dx, dy = _HEADINGS[h]
            x, y = x + dx, y + dy
        elif a is LowLevelAction.RotateLeft:
            h = (h + 1) % 4
        elif a is LowLevelAction.RotateRight:
            h = (h - 1) % 4
        poses.append((x, y))
    return tuple(poses)


def _walk(rng, length, p_move=0.85, p_other=0.35, p_i_repeat=0.15, p_interact=0.08):
    """Sticky random walk: long MoveAhead runs, short turn/look runs, sparse interactions."""
    actions = []
    while len(actions) < length:
        prev = actions[-1] if actions else None
        if prev is None:
            repeat = 0.0
        elif prev.is_interaction:
            repeat = p_i_repeat
        elif prev is LowLevelAction.MoveAhead:
            repeat = p_move
        else:
            repeat = p_other
        if rng.random() < repeat:
            nxt = _INTERACT[rng.integers(len(_INTERACT))] if prev.is_interaction else prev
        elif rng.random() < p_interact:
            nxt = _INTERACT[rng.integers(len(_INTERACT))]
        else:
            nxt = _NAV[rng.choice(len(_NAV), p=_NAV_WEIGHTS)]
        actions.append(nxt)
    return actions


def _subgoals(actions):
    """A new sub-goal starts after every run of interactions that is not final."""
    index = []
    k = 0
    for t, a in enumerate(actions):
        index.append(k)
        if a.is_interaction and t + 1 < len(actions) and not actions[t + 1].is_interaction:
            k += 1
    return index, k + 1


def generate_synthetic(seed: int, n: int, mean_len: int) -> CorpusFile:
    """Deterministic random-walk corpus with poses, goal conditions and a noisy replay path."""
    if n < 1 or mean_len < 1:
        raise ValueError("n and mean_len must be >= 1")
    rng = np.random.default_rng(seed)
    episodes = []
    for e in range(n):
        length = max(1, int(rng.poisson(mean_len)))
        actions = _walk(rng, length)
        index, n_sub = _subgoals(actions)
        sub_goals = [f"sub-goal {k + 1} of synthetic task {e}" for k in range(n_sub)]
        conds = [bool(c) for c in rng.random(int(rng.integers(1, 5))) < 0.75]
        poses = simulate_poses(actions)
        noisy = [
            _NAV[rng.choice(len(_NAV), p=_NAV_WEIGHTS)] if rng.random() < 0.1 else a
            for a in actions
        ]
        traj = ActionTrajectory(
            goal_text=f"synthetic task {e}",
            sub_goals=sub_goals,
            actions=actions,
            subgoal_index=index,
            poses=poses,
            goal_conditions=conds,
        )
        episodes.append(
            Episode(
                id=f"syn-{seed}-{e:05d}",
                trajectory=traj,
                pred_path=simulate_poses(noisy),
                ref_path=poses,
            )
        )
    return CorpusFile(tuple(episodes), FORMAT_VERSION)
